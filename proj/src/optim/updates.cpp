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

#include "gum/optim/updates.hpp"

#include <numeric>
#include <string>

#include "gum/errors.hpp"
#include "gum/linalg/svd.hpp"

namespace gum::optim {

using linalg::matmul;
using linalg::matmul_tn;

namespace {

void require_probability(double q, const char* what) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw InvalidInput(std::string(what) + ": q must be in [0, 1]");
  }
}

DenseMatrix msign_of(const DenseMatrix& m, const GumConfig& cfg) {
  return linalg::msign(m, cfg.msign_mode, cfg.newton_schulz);
}

}  // namespace

BlockState muon_step(BlockState state, const DenseMatrix& grad,
                     const GumConfig& cfg, std::size_t step) {
  const DenseMatrix g = orient(state, grad);
  if (!state.momentum.same_shape(g)) {
    throw InvalidState("muon_step: momentum is not full-rank shaped");
  }
  accumulate_momentum(state.momentum, g, cfg.momentum, cfg.use_damping);
  apply_update(state, msign_of(state.momentum, cfg), cfg.eta_at(step));
  return state;
}

Projector galore_projector(const DenseMatrix& grad, std::size_t r) {
  linalg::require_finite(grad, "galore_projector");
  if (r == 0 || r > std::min(grad.rows(), grad.cols())) {
    throw InvalidInput("galore_projector: rank " + std::to_string(r) +
                       " out of range for " + std::to_string(grad.rows()) +
                       "x" + std::to_string(grad.cols()));
  }
  Projector p{linalg::svd_thin(grad).u.left_columns(r)};
  p.validate();
  return p;
}

std::vector<Assignment> sample_assignments(std::size_t n_blocks, double q,
                                           Rng& rng) {
  require_probability(q, "sample_assignments");
  std::vector<Assignment> out(n_blocks);
  for (auto& a : out) {
    a = rng.bernoulli(q) ? Assignment::kFullRank : Assignment::kLowRank;
  }
  return out;
}

std::vector<Assignment> sample_assignments(std::span<const double> q_per_block,
                                           Rng& rng) {
  std::vector<Assignment> out(q_per_block.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    require_probability(q_per_block[i], "sample_assignments");
    out[i] = rng.bernoulli(q_per_block[i]) ? Assignment::kFullRank
                                           : Assignment::kLowRank;
  }
  return out;
}

std::vector<Assignment> sample_exactly(std::size_t n_blocks, std::size_t gamma,
                                       Rng& rng) {
  if (gamma > n_blocks) throw InvalidInput("sample_exactly: gamma > n_blocks");
  std::vector<std::size_t> order(n_blocks);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<Assignment> out(n_blocks, Assignment::kLowRank);
  for (std::size_t i = 0; i < gamma; ++i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(i, n_blocks - 1));
    std::swap(order[i], order[j]);
    out[order[i]] = Assignment::kFullRank;
  }
  return out;
}

DenseMatrix low_rank_increment(const DenseMatrix& oriented_grad,
                               const Projector& projector, double q) {
  if (!(q >= 0.0 && q < 1.0)) {
    throw InvalidState("low-rank update needs q < 1");
  }
  DenseMatrix inc = matmul_tn(projector.p, oriented_grad);
  inc *= 1.0 / (1.0 - q);
  return inc;
}

DenseMatrix full_rank_increment(const DenseMatrix& oriented_grad,
                                const Projector& projector, double q,
                                bool compensated) {
  if (!(q > 0.0 && q <= 1.0)) {
    throw InvalidState("full-rank update needs q > 0");
  }
  // (1 - q) P P^T G vanishes.
  if (compensated && q == 1.0) return oriented_grad;
  DenseMatrix proj = matmul(projector.p, matmul_tn(projector.p, oriented_grad));
  if (compensated) proj *= 1.0 - q;
  DenseMatrix inc = oriented_grad - proj;
  inc *= 1.0 / q;
  return inc;
}

DenseMatrix effective_gradient(const DenseMatrix& oriented_grad,
                               const Projector& projector, double q,
                               Assignment assignment, bool compensated) {
  if (assignment == Assignment::kFullRank) {
    return full_rank_increment(oriented_grad, projector, q, compensated);
  }
  if (!(q >= 0.0 && q < 1.0)) throw InvalidState("low-rank update needs q < 1");
  DenseMatrix out =
      matmul(projector.p, matmul_tn(projector.p, oriented_grad));
  if (!compensated) out *= 1.0 / (1.0 - q);
  return out;
}

BlockState gum_low_rank_step(BlockState state, const DenseMatrix& grad,
                             const GumConfig& cfg, std::size_t step) {
  if (!state.projector) throw InvalidState("gum_low_rank_step: no projector");
  if (state.assignment != Assignment::kLowRank) {
    throw InvalidState("gum_low_rank_step: block is full-rank");
  }
  state.check_shapes();
  const Projector& p = *state.projector;
  const DenseMatrix inc = low_rank_increment(orient(state, grad), p, state.q);
  accumulate_momentum(state.momentum, inc, cfg.momentum, cfg.use_damping);
  apply_update(state, matmul(p.p, msign_of(state.momentum, cfg)),
               cfg.eta_at(step));
  return state;
}

BlockState gum_full_rank_step(BlockState state, const DenseMatrix& grad,
                              const GumConfig& cfg, std::size_t step) {
  if (!state.projector) throw InvalidState("gum_full_rank_step: no projector");
  if (state.assignment != Assignment::kFullRank) {
    throw InvalidState("gum_full_rank_step: block is low-rank");
  }
  state.check_shapes();
  const DenseMatrix inc = full_rank_increment(
      orient(state, grad), *state.projector, state.q, cfg.compensated_variant);
  accumulate_momentum(state.momentum, inc, cfg.momentum, cfg.use_damping);
  apply_update(state, msign_of(state.momentum, cfg), cfg.eta_at(step));
  return state;
}

BlockState begin_period(BlockState state, Projector projector,
                        Assignment assignment, double q,
                        std::size_t period_index) {
  if (projector.dim() != state.m()) {
    throw InvalidInput("begin_period: projector does not match block");
  }
  const std::size_t rows =
      assignment == Assignment::kLowRank ? projector.rank() : state.m();
  state.momentum = DenseMatrix(rows, state.n());
  state.projector = std::move(projector);
  state.assignment = assignment;
  state.q = q;
  state.period_index = period_index;
  return state;
}

}  // namespace gum::optim
