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

#include "gum/linalg/norms.hpp"

#include <algorithm>
#include <numeric>

#include "gum/errors.hpp"
#include "gum/linalg/svd.hpp"

namespace gum::linalg {

double spectral_norm(const DenseMatrix& m) {
  require_finite(m, "spectral_norm");
  if (m.is_zero()) return 0.0;
  return svd_thin(m).s.front();
}

double trace_norm(const DenseMatrix& m) {
  require_finite(m, "trace_norm");
  if (m.is_zero()) return 0.0;
  const SvdResult svd = svd_thin(m);
  return std::accumulate(svd.s.begin(), svd.s.end(), 0.0);
}

double stable_rank(const DenseMatrix& m) {
  require_finite(m, "stable_rank");
  if (m.is_zero()) throw InvalidInput("stable_rank: zero matrix");
  const double op = spectral_norm(m);
  const double fro = frobenius_norm(m);
  const double ratio = (fro / op) * (fro / op);
  const double upper = static_cast<double>(std::min(m.rows(), m.cols()));
  return std::clamp(ratio, 1.0, upper);
}

}  // namespace gum::linalg
