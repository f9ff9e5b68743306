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

#include "gum/problems/multi_block_quadratic.hpp"

#include <cmath>
#include <string>

#include "gum/errors.hpp"

namespace gum::problems {

using linalg::matmul;
using linalg::matmul_tn;

namespace {

void require_weights(const MultiBlockQuadratic& p,
                     std::span<const DenseMatrix> weights) {
  if (weights.size() != p.blocks().size()) {
    throw InvalidInput("multi-block quadratic: expected " +
                       std::to_string(p.blocks().size()) + " blocks, got " +
                       std::to_string(weights.size()));
  }
  for (std::size_t l = 0; l < weights.size(); ++l) {
    const QuadraticBlock& b = p.blocks()[l];
    if (weights[l].rows() != b.a.cols() || weights[l].cols() != b.y.cols()) {
      throw InvalidInput("multi-block quadratic: block " + std::to_string(l) +
                         " has the wrong shape");
    }
  }
}

}  // namespace

MultiBlockQuadratic::MultiBlockQuadratic(std::vector<QuadraticBlock> blocks,
                                         double noise_sigma)
    : blocks_(std::move(blocks)), noise_sigma_(noise_sigma) {
  if (blocks_.empty()) throw InvalidInput("multi-block quadratic: no blocks");
  if (!(std::isfinite(noise_sigma_) && noise_sigma_ >= 0.0)) {
    throw InvalidInput("multi-block quadratic: noise_sigma must be >= 0");
  }
  for (const auto& b : blocks_) {
    if (b.a.rows() != b.y.rows()) {
      throw InvalidInput("multi-block quadratic: A and Y row counts differ");
    }
    linalg::require_finite(b.a, "multi-block quadratic A");
    linalg::require_finite(b.y, "multi-block quadratic Y");
  }
}

MultiBlockQuadratic MultiBlockQuadratic::random(
    std::vector<std::pair<std::size_t, std::size_t>> shapes,
    double noise_sigma, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<QuadraticBlock> blocks;
  for (const auto& [m, n] : shapes) {
    if (m == 0 || n == 0) throw InvalidInput("multi-block quadratic: empty block");
    const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(m));
    DenseMatrix a(2 * m, m);
    for (double& x : a.data()) x = scale * rng.normal();
    DenseMatrix w_star(m, n);
    for (double& x : w_star.data()) x = rng.normal();
    blocks.push_back({a, matmul(a, w_star)});
  }
  MultiBlockQuadratic p(std::move(blocks), noise_sigma);
  p.seed_ = seed;
  p.optimum_ = 0.0;
  return p;
}

double MultiBlockQuadratic::loss(std::span<const DenseMatrix> weights) const {
  return mbq_loss(*this, weights);
}

std::vector<DenseMatrix> MultiBlockQuadratic::true_gradients(
    std::span<const DenseMatrix> weights) const {
  require_weights(*this, weights);
  std::vector<DenseMatrix> g;
  for (std::size_t l = 0; l < blocks_.size(); ++l) {
    const QuadraticBlock& b = blocks_[l];
    g.push_back(matmul_tn(b.a, matmul(b.a, weights[l]) - b.y));
  }
  return g;
}

std::vector<DenseMatrix> MultiBlockQuadratic::gradients(
    std::span<const DenseMatrix> weights, Rng& rng) const {
  return mbq_grad(*this, weights, rng);
}

std::vector<std::pair<std::size_t, std::size_t>>
MultiBlockQuadratic::block_shapes() const {
  std::vector<std::pair<std::size_t, std::size_t>> shapes;
  for (const auto& b : blocks_) shapes.emplace_back(b.a.cols(), b.y.cols());
  return shapes;
}

std::optional<double> MultiBlockQuadratic::optimal_value() const {
  return optimum_;
}

std::vector<DenseMatrix> MultiBlockQuadratic::initial_point() const {
  std::vector<DenseMatrix> w;
  for (const auto& b : blocks_) w.emplace_back(b.a.cols(), b.y.cols());
  return w;
}

nlohmann::json MultiBlockQuadratic::to_json() const {
  if (!seed_) {
    throw InvalidState("multi-block quadratic built from explicit blocks");
  }
  nlohmann::json shapes = nlohmann::json::array();
  for (const auto& [m, n] : block_shapes()) shapes.push_back({m, n});
  return {{"name", name()},
          {"shapes", shapes},
          {"noise_sigma", noise_sigma_},
          {"seed", *seed_}};
}

double mbq_loss(const MultiBlockQuadratic& p,
                std::span<const DenseMatrix> weights) {
  require_weights(p, weights);
  double total = 0.0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    const QuadraticBlock& b = p.blocks()[l];
    total += 0.5 * linalg::frobenius_norm_squared(matmul(b.a, weights[l]) - b.y);
  }
  return total;
}

std::vector<DenseMatrix> mbq_grad(const MultiBlockQuadratic& p,
                                  std::span<const DenseMatrix> weights,
                                  Rng& rng) {
  std::vector<DenseMatrix> g = p.true_gradients(weights);
  if (p.noise_sigma() > 0.0) {
    for (auto& gl : g) {
      for (double& x : gl.data()) x += p.noise_sigma() * rng.normal();
    }
  }
  return g;
}

}  // namespace gum::problems
