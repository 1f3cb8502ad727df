// Copyright 2026 The robonlu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Times the serial reference kernels against the OpenMP versions on
// LSTM-sized operands and checks that both produce bit-identical output.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "robonlu/linalg.hpp"
#include "robonlu/rng.hpp"

using robonlu::Rng;
using robonlu::linalg::Tensor;

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

struct Shape {
  std::size_t rows, cols;
};

void bench_shape(const Shape& shape, int repeats) {
  Rng rng(42);
  Tensor w(shape.rows, shape.cols);
  for (auto& v : w.data) v = rng.uniform(-1.0, 1.0);
  std::vector<double> x(shape.cols), y_serial(shape.rows), y_parallel(shape.rows);
  for (auto& v : x) v = rng.uniform(-1.0, 1.0);

  double t0 = now_seconds();
  for (int r = 0; r < repeats; ++r)
    robonlu::linalg::serial::matvec(w, x.data(), y_serial.data());
  const double serial_s = now_seconds() - t0;

  t0 = now_seconds();
  for (int r = 0; r < repeats; ++r)
    robonlu::linalg::parallel::matvec(w, x.data(), y_parallel.data());
  const double parallel_s = now_seconds() - t0;

  bool identical = y_serial == y_parallel;
  const double flops = 2.0 * static_cast<double>(shape.rows) *
                       static_cast<double>(shape.cols) * repeats;
  std::printf(
      "matvec %5zux%-5zu serial %8.1f MFLOP/s  parallel %8.1f MFLOP/s  "
      "speedup %.2fx  bit-identical %s\n",
      shape.rows, shape.cols, flops / serial_s / 1e6, flops / parallel_s / 1e6,
      serial_s / parallel_s, identical ? "yes" : "NO");
}

void bench_outer(const Shape& shape, int repeats) {
  Rng rng(43);
  Tensor a_serial(shape.rows, shape.cols), a_parallel(shape.rows, shape.cols);
  std::vector<double> u(shape.rows), v(shape.cols);
  for (auto& q : u) q = rng.uniform(-1.0, 1.0);
  for (auto& q : v) q = rng.uniform(-1.0, 1.0);

  double t0 = now_seconds();
  for (int r = 0; r < repeats; ++r)
    robonlu::linalg::serial::outer_add(a_serial, u.data(), v.data());
  const double serial_s = now_seconds() - t0;

  t0 = now_seconds();
  for (int r = 0; r < repeats; ++r)
    robonlu::linalg::parallel::outer_add(a_parallel, u.data(), v.data());
  const double parallel_s = now_seconds() - t0;

  bool identical = a_serial.data == a_parallel.data;
  const double flops = 2.0 * static_cast<double>(shape.rows) *
                       static_cast<double>(shape.cols) * repeats;
  std::printf(
      "outer  %5zux%-5zu serial %8.1f MFLOP/s  parallel %8.1f MFLOP/s  "
      "speedup %.2fx  bit-identical %s\n",
      shape.rows, shape.cols, flops / serial_s / 1e6, flops / parallel_s / 1e6,
      serial_s / parallel_s, identical ? "yes" : "NO");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; parallel falls back to serial\n");
#endif
  // Gate-stacked LSTM shapes: 4H x (E + H) style operands.
  bench_shape({400, 150}, 20000);
  bench_shape({1000, 300}, 5000);
  bench_shape({2000, 550}, 2000);
  bench_outer({400, 150}, 20000);
  bench_outer({2000, 550}, 2000);
  return 0;
}
