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

#include "gum/linalg/matrix_sign.hpp"

#include <cmath>

#include "gum/errors.hpp"
#include "gum/linalg/svd.hpp"

namespace gum::linalg {

void NewtonSchulzCoeffs::validate() const {
  if (iterations < 1) {
    throw InvalidInput("NewtonSchulzCoeffs: iterations must be >= 1");
  }
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
    throw InvalidInput("NewtonSchulzCoeffs: non-finite coefficient");
  }
}

DenseMatrix msign_exact(const DenseMatrix& m) {
  require_finite(m, "msign_exact");
  DenseMatrix out(m.rows(), m.cols());
  if (m.is_zero()) return out;
  const SvdResult svd = svd_thin(m);
  const double cutoff = kRankTolerance * svd.s.front();
  for (std::size_t j = 0; j < svd.k(); ++j) {
    if (svd.s[j] <= cutoff) break;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const double uij = svd.u(i, j);
      if (uij == 0.0) continue;
      auto out_row = out.row(i);
      for (std::size_t l = 0; l < m.cols(); ++l) out_row[l] += uij * svd.v(l, j);
    }
  }
  return out;
}

DenseMatrix newton_schulz(const DenseMatrix& m,
                          const NewtonSchulzCoeffs& coeffs) {
  coeffs.validate();
  require_finite(m, "newton_schulz");
  const double norm = frobenius_norm(m);
  if (norm == 0.0) throw InvalidInput("newton_schulz: zero matrix");

  // Iterate on the wide orientation so the Gram matrix is the small one.
  const bool tall = m.rows() > m.cols();
  DenseMatrix x = tall ? m.transpose() : m;
  x *= 1.0 / norm;
  for (int it = 0; it < coeffs.iterations; ++it) {
    const DenseMatrix gram = matmul_nt(x, x);
    DenseMatrix poly = coeffs.b * gram;
    if (coeffs.c != 0.0) poly += coeffs.c * matmul(gram, gram);
    DenseMatrix next = matmul(poly, x);
    next += coeffs.a * x;
    x = std::move(next);
  }
  require_finite(x, "newton_schulz");
  return tall ? x.transpose() : x;
}

DenseMatrix msign(const DenseMatrix& m, MsignMode mode,
                  const NewtonSchulzCoeffs& coeffs) {
  if (m.is_zero()) return DenseMatrix(m.rows(), m.cols());
  switch (mode) {
    case MsignMode::kExactOracle:
      return msign_exact(m);
    case MsignMode::kNewtonSchulz:
      return newton_schulz(m, coeffs);
  }
  throw InvalidInput("msign: unknown mode");
}

}  // namespace gum::linalg
