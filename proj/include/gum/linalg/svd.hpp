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
#include <vector>

#include "gum/linalg/dense_matrix.hpp"

namespace gum::linalg {

// Thin SVD: input = u * diag(s) * v^T with k = min(rows, cols).
//
// u is rows x k and v is cols x k, both with orthonormal columns; s is
// nonincreasing and nonnegative. Columns are normalized so that the entry of
// largest magnitude in each u column is nonnegative; equal singular values
// keep the order in which the algorithm produced them.
struct SvdResult {
  DenseMatrix u;
  std::vector<double> s;
  DenseMatrix v;

  std::size_t k() const { return s.size(); }
  // u * diag(s) * v^T
  DenseMatrix reconstruct() const;
};

// Largest min(rows, cols) handled by one-sided Jacobi in svd_thin.
inline constexpr std::size_t kJacobiMaxDim = 64;

// Dispatches to svd_jacobi for min(rows, cols) <= kJacobiMaxDim and to
// svd_golub_kahan otherwise. Deterministic for a fixed input.
// Throws InvalidInput on non-finite entries.
SvdResult svd_thin(const DenseMatrix& m);

// One-sided (Hestenes) Jacobi with cyclic sweeps.
SvdResult svd_jacobi(const DenseMatrix& m);

// Householder bidiagonalization followed by implicit-shift QR on the
// bidiagonal (Golub-Kahan-Reinsch).
SvdResult svd_golub_kahan(const DenseMatrix& m);

}  // namespace gum::linalg
