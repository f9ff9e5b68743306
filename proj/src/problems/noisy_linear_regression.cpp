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

#include "gum/problems/noisy_linear_regression.hpp"

#include <cmath>
#include <string>

#include "gum/errors.hpp"

namespace gum::problems {
namespace {

DenseMatrix gaussian_d(std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  DenseMatrix d(k, k);
  for (double& x : d.data()) x = rng.normal();
  return d;
}

void require_square(const NoisyLinearRegression& p, const DenseMatrix& x,
                    const char* what) {
  if (x.rows() != p.n() || x.cols() != p.n()) {
    throw InvalidInput(std::string(what) + ": X must be " +
                       std::to_string(p.n()) + "x" + std::to_string(p.n()));
  }
}

const DenseMatrix& single_block(std::span<const DenseMatrix> weights) {
  if (weights.size() != 1) {
    throw InvalidInput("noisy linear regression has exactly one block");
  }
  return weights[0];
}

}  // namespace

NoisyLinearRegression::NoisyLinearRegression(std::size_t n, std::size_t r_noise,
                                             double sigma, std::uint64_t seed,
                                             NoiseMode noise)
    : NoisyLinearRegression(n, r_noise, sigma, seed, noise,
                            gaussian_d(r_noise < n ? n - r_noise : 1, seed)) {}

NoisyLinearRegression::NoisyLinearRegression(std::size_t n, std::size_t r_noise,
                                             double sigma, std::uint64_t seed,
                                             NoiseMode noise, DenseMatrix d)
    : n_(n), r_(r_noise), sigma_(sigma), seed_(seed), noise_(noise),
      d_(std::move(d)) {
  if (r_ == 0 || r_ >= n_) {
    throw InvalidInput("noisy linear regression: need 0 < r_noise < n");
  }
  if (!(std::isfinite(sigma_) && sigma_ >= 0.0)) {
    throw InvalidInput("noisy linear regression: sigma must be >= 0");
  }
  if (d_.rows() != k() || d_.cols() != k()) {
    throw InvalidInput("noisy linear regression: D must be (n - r) square");
  }
  linalg::require_finite(d_, "noisy linear regression D");
}

NoisyLinearRegression NoisyLinearRegression::with_d(std::size_t n,
                                                    std::size_t r_noise,
                                                    double sigma, DenseMatrix d,
                                                    NoiseMode noise) {
  return NoisyLinearRegression(n, r_noise, sigma, 0, noise, std::move(d));
}

DenseMatrix NoisyLinearRegression::a_matrix() const {
  DenseMatrix a(k(), n_);
  for (std::size_t i = 0; i < k(); ++i) a(i, i) = 1.0;
  return a;
}

DenseMatrix NoisyLinearRegression::b_matrix() const {
  DenseMatrix b(n_, n_);
  for (std::size_t i = 0; i < k(); ++i) {
    for (std::size_t j = 0; j < k(); ++j) b(i, j) = d_(i, j);
  }
  return b;
}

DenseMatrix NoisyLinearRegression::c_matrix() const {
  DenseMatrix c(n_, n_);
  for (std::size_t i = k(); i < n_; ++i) c(i, i) = 1.0;
  return c;
}

DenseMatrix NoisyLinearRegression::minimizer() const {
  DenseMatrix x(n_, n_);
  for (std::size_t i = 0; i < k(); ++i) {
    for (std::size_t j = 0; j < k(); ++j) x(i, j) = -d_(i, j);
  }
  return x;
}

double NoisyLinearRegression::loss(std::span<const DenseMatrix> weights) const {
  return nlr_loss(*this, single_block(weights));
}

std::vector<DenseMatrix> NoisyLinearRegression::true_gradients(
    std::span<const DenseMatrix> weights) const {
  return {nlr_true_grad(*this, single_block(weights))};
}

std::vector<DenseMatrix> NoisyLinearRegression::gradients(
    std::span<const DenseMatrix> weights, Rng& rng) const {
  return {nlr_grad(*this, single_block(weights), rng)};
}

std::vector<std::pair<std::size_t, std::size_t>>
NoisyLinearRegression::block_shapes() const {
  return {{n_, n_}};
}

std::optional<double> NoisyLinearRegression::optimal_value() const {
  return nlr_optimal_value(*this);
}

std::vector<DenseMatrix> NoisyLinearRegression::initial_point() const {
  return {DenseMatrix(n_, n_)};
}

nlohmann::json NoisyLinearRegression::to_json() const {
  return {{"name", name()},       {"n", n_},
          {"r_noise", r_},        {"sigma", sigma_},
          {"seed", seed_},        {"noise", noise_mode_name(noise_)}};
}

double nlr_loss(const NoisyLinearRegression& p, const DenseMatrix& x) {
  require_square(p, x, "nlr_loss");
  double quad = 0.0;
  double lin = 0.0;
  for (std::size_t i = 0; i < p.k(); ++i) {
    for (std::size_t j = 0; j < p.n(); ++j) quad += x(i, j) * x(i, j);
    for (std::size_t j = 0; j < p.k(); ++j) lin += p.d()(i, j) * x(i, j);
  }
  return 0.5 * quad + lin;
}

DenseMatrix nlr_true_grad(const NoisyLinearRegression& p, const DenseMatrix& x) {
  require_square(p, x, "nlr_grad");
  DenseMatrix g(p.n(), p.n());
  for (std::size_t i = 0; i < p.k(); ++i) {
    for (std::size_t j = 0; j < p.n(); ++j) g(i, j) = x(i, j);
    for (std::size_t j = 0; j < p.k(); ++j) g(i, j) += p.d()(i, j);
  }
  return g;
}

DenseMatrix nlr_grad(const NoisyLinearRegression& p, const DenseMatrix& x,
                     double xi) {
  DenseMatrix g = nlr_true_grad(p, x);
  const double shift = xi * p.sigma();
  for (std::size_t i = p.k(); i < p.n(); ++i) g(i, i) += shift;
  return g;
}

DenseMatrix nlr_grad(const NoisyLinearRegression& p, const DenseMatrix& x,
                     Rng& rng) {
  const bool heads = rng.bernoulli(0.5);
  double xi = heads ? 1.0 : 0.0;
  if (p.noise() == NoiseMode::kRademacher) xi = heads ? 1.0 : -1.0;
  return nlr_grad(p, x, xi);
}

double nlr_optimal_value(const NoisyLinearRegression& p) {
  return -0.5 * linalg::frobenius_norm_squared(p.d());
}

NoisyLinearRegression nlr_reference_instance(std::uint64_t seed) {
  return NoisyLinearRegression(20, 12, 100.0, seed);
}

const char* noise_mode_name(NoiseMode mode) {
  return mode == NoiseMode::kRademacher ? "rademacher" : "bernoulli";
}

NoiseMode parse_noise_mode(const std::string& name) {
  if (name == "bernoulli") return NoiseMode::kBernoulli;
  if (name == "rademacher") return NoiseMode::kRademacher;
  throw InvalidInput("unknown noise mode '" + name + "'");
}

}  // namespace gum::problems
