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

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gum/linalg/dense_matrix.hpp"
#include "gum/optim/gradient_oracle.hpp"
#include "gum/random.hpp"
#include "support/matrices.hpp"

namespace gum::testing {

// Gradient W_l - T_l plus N(0, sigma^2) entries. Stands in for a problem
// without depending on the problems library.
class ShiftedQuadratic final : public optim::GradientOracle {
 public:
  ShiftedQuadratic(std::vector<DenseMatrix> targets, double sigma)
      : targets_(std::move(targets)), sigma_(sigma) {}

  static ShiftedQuadratic random(
      const std::vector<std::pair<std::size_t, std::size_t>>& shapes,
      double sigma, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<DenseMatrix> t;
    for (const auto& [m, n] : shapes) t.push_back(gaussian(m, n, rng));
    return ShiftedQuadratic(std::move(t), sigma);
  }

  std::vector<DenseMatrix> gradients(std::span<const DenseMatrix> weights,
                                     Rng& rng) const override {
    std::vector<DenseMatrix> g;
    for (std::size_t l = 0; l < weights.size(); ++l) {
      DenseMatrix gl = weights[l] - targets_[l];
      if (sigma_ > 0.0) {
        for (double& x : gl.data()) x += sigma_ * rng.normal();
      }
      g.push_back(std::move(gl));
    }
    return g;
  }

  std::vector<std::pair<std::size_t, std::size_t>> block_shapes()
      const override {
    std::vector<std::pair<std::size_t, std::size_t>> s;
    for (const auto& t : targets_) s.emplace_back(t.rows(), t.cols());
    return s;
  }

  std::vector<DenseMatrix> zeros() const {
    std::vector<DenseMatrix> w;
    for (const auto& t : targets_) w.emplace_back(t.rows(), t.cols());
    return w;
  }

 private:
  std::vector<DenseMatrix> targets_;
  double sigma_;
};

// Inverse by Gauss-Jordan elimination with partial pivoting.
inline DenseMatrix inverse(const DenseMatrix& a) {
  const std::size_t n = a.rows();
  DenseMatrix m = a;
  DenseMatrix inv = DenseMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m(r, c)) > std::abs(m(piv, c))) piv = r;
    if (m(piv, c) == 0.0) throw std::runtime_error("singular matrix");
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(m(c, j), m(piv, j));
      std::swap(inv(c, j), inv(piv, j));
    }
    const double d = m(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      m(c, j) /= d;
      inv(c, j) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = m(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        m(r, j) -= f * m(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

// Orthogonal polar factor of a square nonsingular matrix by the Newton
// iteration X <- (X + X^{-T}) / 2. Needs no SVD.
inline DenseMatrix polar_newton(const DenseMatrix& a) {
  DenseMatrix x = a;
  for (int it = 0; it < 100; ++it) {
    DenseMatrix next = 0.5 * (x + inverse(x).transpose());
    const double change = linalg::max_abs_diff(next, x);
    x = std::move(next);
    if (change < 1e-15) break;
  }
  return x;
}

}  // namespace gum::testing
