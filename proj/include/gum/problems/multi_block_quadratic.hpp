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
#include <cstdint>
#include <utility>
#include <vector>

#include "gum/problems/problem.hpp"
#include "gum/random.hpp"

namespace gum::problems {

struct QuadraticBlock {
  DenseMatrix a;  // p x m
  DenseMatrix y;  // p x n
};

// sum_l 1/2 ||A_l W_l - Y_l||_F^2 with W_l of shape m_l x n_l and
// gradient A_l^T (A_l W_l - Y_l) plus i.i.d. N(0, noise_sigma^2) entries.
class MultiBlockQuadratic final : public Problem {
 public:
  // Throws InvalidInput on incompatible shapes or negative sigma.
  MultiBlockQuadratic(std::vector<QuadraticBlock> blocks, double noise_sigma);

  // For each weight shape m x n: A is 2m x m with N(0, 1/(2m)) entries and
  // Y = A W* for a standard normal W*, so the optimum is 0.
  static MultiBlockQuadratic random(
      std::vector<std::pair<std::size_t, std::size_t>> shapes,
      double noise_sigma, std::uint64_t seed);

  const std::vector<QuadraticBlock>& blocks() const { return blocks_; }
  double noise_sigma() const { return noise_sigma_; }

  std::string name() const override { return "multi_block_quadratic"; }
  double loss(std::span<const DenseMatrix> weights) const override;
  std::vector<DenseMatrix> true_gradients(
      std::span<const DenseMatrix> weights) const override;
  std::vector<DenseMatrix> gradients(std::span<const DenseMatrix> weights,
                                     Rng& rng) const override;
  std::vector<std::pair<std::size_t, std::size_t>> block_shapes()
      const override;
  std::optional<double> optimal_value() const override;
  std::vector<DenseMatrix> initial_point() const override;
  // Only instances built by random() have a JSON form; others throw
  // InvalidState.
  nlohmann::json to_json() const override;

 private:
  std::vector<QuadraticBlock> blocks_;
  double noise_sigma_;
  // Set by random().
  std::optional<std::uint64_t> seed_;
  std::optional<double> optimum_;
};

double mbq_loss(const MultiBlockQuadratic& p,
                std::span<const DenseMatrix> weights);
std::vector<DenseMatrix> mbq_grad(const MultiBlockQuadratic& p,
                                  std::span<const DenseMatrix> weights,
                                  Rng& rng);

}  // namespace gum::problems
