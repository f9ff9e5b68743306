// Copyright 2026 The GUM Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace gum::linalg {

// Real rows x cols matrix stored row-major.
//
// Dimensions are always positive. Constructors that take user data reject
// non-finite entries; the arithmetic below preserves finiteness for finite
// operands short of overflow.
class DenseMatrix {
 public:
  // Zero matrix.
  DenseMatrix(std::size_t rows, std::size_t cols);
  // Takes ownership of row-major data; throws InvalidInput on a size
  // mismatch or a non-finite entry.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static DenseMatrix zeros(std::size_t rows, std::size_t cols) {
    return DenseMatrix(rows, cols);
  }
  static DenseMatrix identity(std::size_t n);
  // rows x cols with `diag` on the main diagonal.
  static DenseMatrix diagonal(std::span<const double> diag, std::size_t rows,
                              std::size_t cols);
  static DenseMatrix diagonal(std::initializer_list<double> diag);
  static DenseMatrix from_rows(
      std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::span<double> row(std::size_t i) {
    return std::span<double>(data_).subspan(i * cols_, cols_);
  }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * cols_, cols_);
  }

  bool same_shape(const DenseMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool all_finite() const;
  bool is_zero() const;

  DenseMatrix transpose() const;
  // Rows [r0, r0 + nr) and columns [c0, c0 + nc).
  DenseMatrix block(std::size_t r0, std::size_t c0, std::size_t nr,
                    std::size_t nc) const;
  // First `n` columns.
  DenseMatrix left_columns(std::size_t n) const { return block(0, 0, rows_, n); }

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double s);

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(double s, DenseMatrix a);

// a * b
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
// a^T * b
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
// a * b^T
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);

// Frobenius inner product <a, b> = trace(a^T b).
double inner(const DenseMatrix& a, const DenseMatrix& b);
double frobenius_norm(const DenseMatrix& m);
double frobenius_norm_squared(const DenseMatrix& m);
// Largest absolute elementwise difference.
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

// Throws InvalidInput if `m` has a NaN or Inf entry; `what` names the caller.
void require_finite(const DenseMatrix& m, const char* what);
void require_same_shape(const DenseMatrix& a, const DenseMatrix& b,
                        const char* what);

}  // namespace gum::linalg
