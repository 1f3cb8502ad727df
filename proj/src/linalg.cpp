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

#include "robonlu/linalg.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace robonlu {
namespace linalg {

namespace {

#ifdef _OPENMP
bool g_parallel = true;
#else
bool g_parallel = false;
#endif

// Below this element count the fork/join overhead dominates on small LSTM
// layers, so stay serial.
constexpr std::size_t kParallelThreshold = 256 * 1024;

bool use_parallel(std::size_t elements) {
  return g_parallel && elements >= kParallelThreshold;
}

}  // namespace

void set_parallel_enabled(bool enabled) {
#ifdef _OPENMP
  g_parallel = enabled;
#else
  (void)enabled;
  g_parallel = false;
#endif
}

bool parallel_enabled() { return g_parallel; }

namespace serial {

void matvec(const Tensor& w, const double* x, double* y) {
  for (std::size_t r = 0; r < w.rows; ++r) {
    const double* row = w.row(r);
    double acc = 0.0;
    for (std::size_t c = 0; c < w.cols; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
}

void matvec_add(const Tensor& w, const double* x, double* y) {
  for (std::size_t r = 0; r < w.rows; ++r) {
    const double* row = w.row(r);
    double acc = 0.0;
    for (std::size_t c = 0; c < w.cols; ++c) acc += row[c] * x[c];
    y[r] += acc;
  }
}

void matvec_transpose_add(const Tensor& w, const double* y, double* x) {
  // Output element j accumulates down column j in row order.
  for (std::size_t c = 0; c < w.cols; ++c) {
    double acc = 0.0;
    for (std::size_t r = 0; r < w.rows; ++r) acc += w.at(r, c) * y[r];
    x[c] += acc;
  }
}

void outer_add(Tensor& a, const double* u, const double* v) {
  for (std::size_t r = 0; r < a.rows; ++r) {
    double* row = a.row(r);
    const double ur = u[r];
    for (std::size_t c = 0; c < a.cols; ++c) row[c] += ur * v[c];
  }
}

}  // namespace serial

namespace parallel {

void matvec(const Tensor& w, const double* x, double* y) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (long r = 0; r < static_cast<long>(w.rows); ++r) {
    const double* row = w.row(static_cast<std::size_t>(r));
    double acc = 0.0;
    for (std::size_t c = 0; c < w.cols; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
#else
  serial::matvec(w, x, y);
#endif
}

void matvec_add(const Tensor& w, const double* x, double* y) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (long r = 0; r < static_cast<long>(w.rows); ++r) {
    const double* row = w.row(static_cast<std::size_t>(r));
    double acc = 0.0;
    for (std::size_t c = 0; c < w.cols; ++c) acc += row[c] * x[c];
    y[r] += acc;
  }
#else
  serial::matvec_add(w, x, y);
#endif
}

void matvec_transpose_add(const Tensor& w, const double* y, double* x) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (long c = 0; c < static_cast<long>(w.cols); ++c) {
    double acc = 0.0;
    for (std::size_t r = 0; r < w.rows; ++r)
      acc += w.at(r, static_cast<std::size_t>(c)) * y[r];
    x[c] += acc;
  }
#else
  serial::matvec_transpose_add(w, y, x);
#endif
}

void outer_add(Tensor& a, const double* u, const double* v) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (long r = 0; r < static_cast<long>(a.rows); ++r) {
    double* row = a.row(static_cast<std::size_t>(r));
    const double ur = u[r];
    for (std::size_t c = 0; c < a.cols; ++c) row[c] += ur * v[c];
  }
#else
  serial::outer_add(a, u, v);
#endif
}

}  // namespace parallel

void matvec(const Tensor& w, const double* x, double* y) {
  if (use_parallel(w.size()))
    parallel::matvec(w, x, y);
  else
    serial::matvec(w, x, y);
}

void matvec_add(const Tensor& w, const double* x, double* y) {
  if (use_parallel(w.size()))
    parallel::matvec_add(w, x, y);
  else
    serial::matvec_add(w, x, y);
}

void matvec_transpose_add(const Tensor& w, const double* y, double* x) {
  if (use_parallel(w.size()))
    parallel::matvec_transpose_add(w, y, x);
  else
    serial::matvec_transpose_add(w, y, x);
}

void outer_add(Tensor& a, const double* u, const double* v) {
  if (use_parallel(a.size()))
    parallel::outer_add(a, u, v);
  else
    serial::outer_add(a, u, v);
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_squares(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return acc;
}

}  // namespace linalg
}  // namespace robonlu
