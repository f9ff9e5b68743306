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

#include "gum/problems/problem.hpp"
#include "gum/random.hpp"

namespace gum::problems {

// Distribution of the noise multiplier xi.
enum class NoiseMode {
  // xi in {0, 1} with equal probability. Mean 0.5.
  kBernoulli,
  // xi in {-1, +1} with equal probability. Mean 0.
  kRademacher,
};

// min_X 1/2 ||A X||_F^2 + <B, X> over n x n matrices, with k = n - r:
//   A = [I_k 0]            (k x n)
//   B = [D 0; 0 0]         (D is k x k)
//   C = [0 0; 0 I_r]       noise direction
// and stochastic gradient A^T A X + B + xi sigma C.
//
// The noise lives on the bottom-right block where the true gradient is
// zero, so for large sigma the top-r singular directions of a noisy draw
// are pure noise.
class NoisyLinearRegression final : public Problem {
 public:
  // D drawn i.i.d. standard normal from `seed`.
  NoisyLinearRegression(std::size_t n, std::size_t r_noise, double sigma,
                        std::uint64_t seed,
                        NoiseMode noise = NoiseMode::kBernoulli);
  // Explicit D; must be (n - r_noise) square.
  static NoisyLinearRegression with_d(std::size_t n, std::size_t r_noise,
                                      double sigma, DenseMatrix d,
                                      NoiseMode noise = NoiseMode::kBernoulli);

  std::size_t n() const { return n_; }
  std::size_t r_noise() const { return r_; }
  std::size_t k() const { return n_ - r_; }
  double sigma() const { return sigma_; }
  std::uint64_t seed() const { return seed_; }
  NoiseMode noise() const { return noise_; }
  const DenseMatrix& d() const { return d_; }

  // Dense A, B, C as defined above.
  DenseMatrix a_matrix() const;
  DenseMatrix b_matrix() const;
  DenseMatrix c_matrix() const;
  // Top-left block -D, zero elsewhere.
  DenseMatrix minimizer() const;

  std::string name() const override { return "noisy_linear_regression"; }
  double loss(std::span<const DenseMatrix> weights) const override;
  std::vector<DenseMatrix> true_gradients(
      std::span<const DenseMatrix> weights) const override;
  std::vector<DenseMatrix> gradients(std::span<const DenseMatrix> weights,
                                     Rng& rng) const override;
  std::vector<std::pair<std::size_t, std::size_t>> block_shapes()
      const override;
  std::optional<double> optimal_value() const override;
  std::vector<DenseMatrix> initial_point() const override;
  nlohmann::json to_json() const override;

 private:
  NoisyLinearRegression(std::size_t n, std::size_t r_noise, double sigma,
                        std::uint64_t seed, NoiseMode noise, DenseMatrix d);

  std::size_t n_;
  std::size_t r_;
  double sigma_;
  std::uint64_t seed_;
  NoiseMode noise_;
  DenseMatrix d_;
};

inline constexpr std::uint64_t kNlrDefaultSeed = 20;

// 1/2 ||X_top||_F^2 + <D, X_top-left>. Throws InvalidInput unless X is n x n.
double nlr_loss(const NoisyLinearRegression& p, const DenseMatrix& x);
// A^T A X + B.
DenseMatrix nlr_true_grad(const NoisyLinearRegression& p, const DenseMatrix& x);
// A^T A X + B + xi sigma C with an explicit xi.
DenseMatrix nlr_grad(const NoisyLinearRegression& p, const DenseMatrix& x,
                     double xi);
// xi drawn from `rng` per the problem's noise mode; one uniform per call.
DenseMatrix nlr_grad(const NoisyLinearRegression& p, const DenseMatrix& x,
                     Rng& rng);
// -1/2 ||D||_F^2
double nlr_optimal_value(const NoisyLinearRegression& p);

// n = 20, r = 12, sigma = 100.
NoisyLinearRegression nlr_reference_instance(std::uint64_t seed = kNlrDefaultSeed);
// Ranks the counterexample pairs with the instance.
inline constexpr std::size_t kNlrGaloreRank = 12;
inline constexpr std::size_t kNlrGumRank = 2;
inline constexpr double kNlrGumQ = 0.5;

const char* noise_mode_name(NoiseMode mode);
NoiseMode parse_noise_mode(const std::string& name);

}  // namespace gum::problems
