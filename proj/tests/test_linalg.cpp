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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "robonlu/linalg.hpp"
#include "robonlu/rng.hpp"

using robonlu::Rng;
using namespace robonlu::linalg;

namespace {

Tensor random_tensor(std::size_t rows, std::size_t cols, Rng& rng) {
  Tensor t(rows, cols);
  for (auto& v : t.data) v = rng.uniform(-2.0, 2.0);
  return t;
}

std::vector<double> random_vec(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-2.0, 2.0);
  return v;
}

}  // namespace

TEST_CASE("matvec matches a hand-computed product") {
  Tensor w(2, 3);
  w.data = {1, 2, 3, 4, 5, 6};
  std::vector<double> x = {1, 0, -1};
  std::vector<double> y;
  matvec(w, x, y);
  CHECK(y == std::vector<double>{-2, -2});
}

TEST_CASE("parallel kernels are bit-identical to the serial reference") {
  Rng rng(7);
  // Mixed sizes on both sides of the dispatch threshold.
  const std::vector<std::pair<std::size_t, std::size_t>> shapes = {
      {1, 1}, {3, 5}, {17, 9}, {128, 64}, {500, 550}, {1024, 700}};
  for (const auto& [rows, cols] : shapes) {
    CAPTURE(rows);
    CAPTURE(cols);
    const Tensor w = random_tensor(rows, cols, rng);
    const auto x = random_vec(cols, rng);
    const auto yr = random_vec(rows, rng);

    std::vector<double> a(rows, 0.0), b(rows, 0.0);
    serial::matvec(w, x.data(), a.data());
    parallel::matvec(w, x.data(), b.data());
    CHECK(a == b);

    std::vector<double> a2 = yr, b2 = yr;
    serial::matvec_add(w, x.data(), a2.data());
    parallel::matvec_add(w, x.data(), b2.data());
    CHECK(a2 == b2);

    std::vector<double> a3 = x, b3 = x;
    serial::matvec_transpose_add(w, yr.data(), a3.data());
    parallel::matvec_transpose_add(w, yr.data(), b3.data());
    CHECK(a3 == b3);

    Tensor wa = w, wb = w;
    serial::outer_add(wa, yr.data(), x.data());
    parallel::outer_add(wb, yr.data(), x.data());
    CHECK(wa.data == wb.data);
  }
}

TEST_CASE("dispatching entry points agree with serial regardless of the switch") {
  Rng rng(11);
  const Tensor w = random_tensor(600, 600, rng);  // above the threshold
  const auto x = random_vec(600, rng);
  std::vector<double> expect(600, 0.0);
  serial::matvec(w, x.data(), expect.data());

  for (bool enabled : {false, true}) {
    set_parallel_enabled(enabled);
    std::vector<double> got(600, 0.0);
    matvec(w, x.data(), got.data());
    CHECK(got == expect);
  }
  set_parallel_enabled(true);
}

TEST_CASE("transpose kernel computes W^T y") {
  Tensor w(2, 2);
  w.data = {1, 2, 3, 4};
  std::vector<double> y = {1, 1};
  std::vector<double> x = {0, 0};
  matvec_transpose_add(w, y.data(), x.data());
  CHECK(x == std::vector<double>{4, 6});
}

TEST_CASE("sum_squares and dot") {
  std::vector<double> v = {3, 4};
  CHECK(sum_squares(v) == doctest::Approx(25.0));
  std::vector<double> u = {1, -1};
  CHECK(dot(u.data(), v.data(), 2) == doctest::Approx(-1.0));
}
