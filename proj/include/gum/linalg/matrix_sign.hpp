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

#include "gum/linalg/dense_matrix.hpp"

namespace gum::linalg {

// Coefficients of the odd polynomial iteration
//   X <- a X + b (X X^T) X + c (X X^T)^2 X
// applied `iterations` times after scaling the input to unit Frobenius norm.
struct NewtonSchulzCoeffs {
  double a = 15.0 / 8.0;
  double b = -10.0 / 8.0;
  double c = 3.0 / 8.0;
  int iterations = 10;

  // Degree-5 Newton-Schulz: p(x) = (15x - 10x^3 + 3x^5) / 8. Fixed point at
  // 1 with p'(1) = p''(1) = 0, so it converges to the exact sign.
  static NewtonSchulzCoeffs classic_quintic() { return {}; }
  // The tuned quintic of the Muon reference code. Fast on badly scaled
  // inputs but oscillates: p(1) ~ 0.70, singular values land in ~[0.7, 1.2].
  static NewtonSchulzCoeffs muon_quintic() {
    return {3.4445, -4.7750, 2.0315, 5};
  }
  // p(x) = (3x - x^3) / 2.
  static NewtonSchulzCoeffs cubic(int iterations = 20) {
    return {1.5, -0.5, 0.0, iterations};
  }

  // Throws InvalidInput unless iterations >= 1 and a, b, c are finite.
  void validate() const;

  friend bool operator==(const NewtonSchulzCoeffs&,
                         const NewtonSchulzCoeffs&) = default;
};

// Relative threshold below which singular values are treated as zero by
// msign_exact.
inline constexpr double kRankTolerance = 1e-12;

// Orthogonal polar factor U_r V_r^T over singular triplets with
// sigma_i > kRankTolerance * sigma_max. The zero matrix maps to zero.
DenseMatrix msign_exact(const DenseMatrix& m);

// Newton-Schulz approximation of msign. Throws InvalidInput for a zero or
// non-finite input.
DenseMatrix newton_schulz(const DenseMatrix& m,
                          const NewtonSchulzCoeffs& coeffs = {});

enum class MsignMode { kNewtonSchulz, kExactOracle };

// msign as used by the optimizers: exact or Newton-Schulz, with zero
// mapping to zero in both modes.
DenseMatrix msign(const DenseMatrix& m, MsignMode mode,
                  const NewtonSchulzCoeffs& coeffs = {});

}  // namespace gum::linalg
