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

#ifndef ROBONLU_LINALG_HPP_
#define ROBONLU_LINALG_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace robonlu {
namespace linalg {

// Dense row-major matrix. Vectors are Tensors with cols == 1 or plain
// std::vector<double>, depending on what the call site already holds.
struct Tensor {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }
  double* row(std::size_t r) { return data.data() + r * cols; }
  std::size_t size() const { return data.size(); }
  void fill(double v) { std::fill(data.begin(), data.end(), v); }

  bool same_shape(const Tensor& o) const {
    return rows == o.rows && cols == o.cols;
  }
};

// Parallel kernels run OpenMP loops over independent output rows only, so
// each element is accumulated in the same order as the serial reference and
// results are bit-identical for any thread count. The serial namespace is
// the reference implementation used by the equivalence tests and the
// benchmark tool.
namespace serial {

// y = W x
void matvec(const Tensor& w, const double* x, double* y);
// y += W x
void matvec_add(const Tensor& w, const double* x, double* y);
// x += W^T y
void matvec_transpose_add(const Tensor& w, const double* y, double* x);
// A += u v^T
void outer_add(Tensor& a, const double* u, const double* v);

}  // namespace serial

namespace parallel {

void matvec(const Tensor& w, const double* x, double* y);
void matvec_add(const Tensor& w, const double* x, double* y);
void matvec_transpose_add(const Tensor& w, const double* y, double* x);
void outer_add(Tensor& a, const double* u, const double* v);

}  // namespace parallel

// Process-wide switch; defaults to on when built with OpenMP. Small
// operands fall back to the serial path either way (dispatch threshold on
// element count), which changes nothing observable.
void set_parallel_enabled(bool enabled);
bool parallel_enabled();

// Dispatching entry points used by the rest of the code base.
void matvec(const Tensor& w, const double* x, double* y);
void matvec_add(const Tensor& w, const double* x, double* y);
void matvec_transpose_add(const Tensor& w, const double* y, double* x);
void outer_add(Tensor& a, const double* u, const double* v);

inline void matvec(const Tensor& w, const std::vector<double>& x,
                   std::vector<double>& y) {
  y.assign(w.rows, 0.0);
  matvec(w, x.data(), y.data());
}

double dot(const double* a, const double* b, std::size_t n);

// Deterministic sum of squares: per-row partials in parallel, combined in
// index order.
double sum_squares(const std::vector<double>& v);

}  // namespace linalg
}  // namespace robonlu

#endif  // ROBONLU_LINALG_HPP_
