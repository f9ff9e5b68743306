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

#include "gum/optim/optimizers.hpp"

#include <string>

#include "gum/errors.hpp"
#include "gum/optim/updates.hpp"
#include "gum/parallel.hpp"

namespace gum::optim {

using linalg::matmul;
using linalg::matmul_tn;

namespace {

std::vector<DenseMatrix> weights_of(const std::vector<BlockState>& blocks) {
  std::vector<DenseMatrix> w;
  w.reserve(blocks.size());
  for (const auto& b : blocks) w.push_back(b.weights);
  return w;
}

std::vector<DenseMatrix> draw_gradients(const std::vector<BlockState>& blocks,
                                        const GradientOracle& oracle,
                                        Rng& rng) {
  const std::vector<DenseMatrix> w = weights_of(blocks);
  std::vector<DenseMatrix> g = oracle.gradients(w, rng);
  if (g.size() != blocks.size()) {
    throw InvalidInput("oracle returned " + std::to_string(g.size()) +
                       " gradients for " + std::to_string(blocks.size()) +
                       " blocks");
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    linalg::require_same_shape(w[i], g[i], "oracle gradient");
  }
  return g;
}

struct PeriodDraw {
  std::vector<Assignment> assignments;
  std::vector<double> q;
};

PeriodDraw draw_assignments(const GumConfig& cfg, std::size_t n_blocks,
                            Rng& rng) {
  PeriodDraw d;
  if (cfg.sampling == SamplingMode::kExactGamma) {
    d.assignments = sample_exactly(n_blocks, cfg.full_rank_layers, rng);
    d.q.assign(n_blocks, cfg.q());
  } else {
    for (std::size_t l = 0; l < n_blocks; ++l) d.q.push_back(cfg.q_for_block(l));
    d.assignments = sample_assignments(d.q, rng);
  }
  return d;
}

BlockState galore_muon_step(BlockState state, const DenseMatrix& grad,
                            const GumConfig& cfg, std::size_t step) {
  const DenseMatrix& p = state.projector->p;
  accumulate_momentum(state.momentum, matmul_tn(p, orient(state, grad)),
                      cfg.momentum, cfg.use_damping);
  apply_update(state,
               matmul(p, linalg::msign(state.momentum, cfg.msign_mode,
                                       cfg.newton_schulz)),
               cfg.eta_at(step));
  return state;
}

void check_steps(std::size_t steps, const GumConfig& cfg) {
  if (steps > cfg.period) {
    throw InvalidInput("run_period: " + std::to_string(steps) +
                       " steps exceed the period " +
                       std::to_string(cfg.period));
  }
}

}  // namespace

RngStreams RngStreams::from_seed(std::uint64_t master_seed) {
  return from_seeds(mix_seed(master_seed, kGradientStream),
                    mix_seed(master_seed, kAssignmentStream),
                    mix_seed(master_seed, kProjectorStream));
}

RngStreams RngStreams::from_seeds(std::uint64_t gradient_seed,
                                  std::uint64_t assignment_seed,
                                  std::uint64_t projector_seed) {
  return {Rng(gradient_seed), Rng(assignment_seed), Rng(projector_seed)};
}

std::string_view method_name(Method method) {
  switch (method) {
    case Method::kMuon: return "muon";
    case Method::kGaloreMuon: return "galore_muon";
    case Method::kGum: return "gum";
    case Method::kUnbiasedGeneric: return "unbiased_generic";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::kMuon, Method::kGaloreMuon, Method::kGum,
                   Method::kUnbiasedGeneric}) {
    if (method_name(m) == name) return m;
  }
  throw InvalidInput("unknown method '" + std::string(name) + "'");
}

Optimizer::Optimizer(std::vector<DenseMatrix> initial_weights, GumConfig cfg,
                     std::size_t threads)
    : cfg_(std::move(cfg)), threads_(threads == 0 ? 1 : threads) {
  std::vector<std::pair<std::size_t, std::size_t>> shapes;
  for (auto& w : initial_weights) {
    linalg::require_finite(w, "initial weights");
    shapes.emplace_back(w.rows(), w.cols());
    blocks_.push_back(BlockState::initial(std::move(w)));
  }
  cfg_.validate_shapes(shapes);
}

std::vector<DenseMatrix> Optimizer::weights() const { return weights_of(blocks_); }

std::size_t Optimizer::state_scalars() const {
  std::size_t total = 0;
  for (const auto& b : blocks_) total += b.state_scalars();
  return total;
}

std::vector<DenseMatrix> Optimizer::draw(const GradientOracle& oracle,
                                         Rng& rng) const {
  return draw_gradients(blocks_, oracle, rng);
}

template <class Fn>
void Optimizer::for_blocks(Fn&& fn) const {
  parallel_for(blocks_.size(), threads_, std::forward<Fn>(fn));
}

MuonOptimizer::MuonOptimizer(std::vector<DenseMatrix> initial_weights,
                             GumConfig cfg, std::size_t threads,
                             bool restart_momentum)
    : Optimizer(std::move(initial_weights), std::move(cfg), threads),
      restart_momentum_(restart_momentum) {}

void MuonOptimizer::run_period(const GradientOracle& oracle, RngStreams& rngs,
                               std::size_t first_step, std::size_t steps,
                               const StepObserver& observer) {
  check_steps(steps, cfg_);
  for (auto& b : blocks_) {
    if (restart_momentum_) b.momentum = DenseMatrix(b.m(), b.n());
    b.period_index = period_index_;
  }
  for (std::size_t k = 0; k < steps; ++k) {
    const std::vector<DenseMatrix> grads = draw(oracle, rngs.gradient);
    const std::size_t step = first_step + k;
    for_blocks([&](std::size_t l) {
      blocks_[l] = muon_step(std::move(blocks_[l]), grads[l], cfg_, step);
    });
    if (observer) observer({step + 1, grads, blocks_});
  }
  ++period_index_;
}

void GaloreMuonOptimizer::run_period(const GradientOracle& oracle,
                                     RngStreams& rngs, std::size_t first_step,
                                     std::size_t steps,
                                     const StepObserver& observer) {
  check_steps(steps, cfg_);
  if (steps == 0) return;
  std::vector<DenseMatrix> grads = draw(oracle, rngs.gradient);
  for_blocks([&](std::size_t l) {
    Projector p = galore_projector(orient(blocks_[l], grads[l]), cfg_.rank);
    blocks_[l] = begin_period(std::move(blocks_[l]), std::move(p),
                              Assignment::kLowRank, 0.0, period_index_);
  });
  for (std::size_t k = 0; k < steps; ++k) {
    if (k > 0) grads = draw(oracle, rngs.gradient);
    const std::size_t step = first_step + k;
    for_blocks([&](std::size_t l) {
      blocks_[l] = galore_muon_step(std::move(blocks_[l]), grads[l], cfg_, step);
    });
    if (observer) observer({step + 1, grads, blocks_});
  }
  ++period_index_;
}

void GumOptimizer::run_period(const GradientOracle& oracle, RngStreams& rngs,
                              std::size_t first_step, std::size_t steps,
                              const StepObserver& observer) {
  optim::run_period(blocks_, oracle, cfg_, rngs, first_step, steps,
                    period_index_, threads_, observer);
  ++period_index_;
}

void run_period(std::vector<BlockState>& blocks, const GradientOracle& oracle,
                const GumConfig& cfg, RngStreams& rngs, std::size_t first_step,
                std::size_t steps, std::size_t period_index,
                std::size_t threads, const StepObserver& observer) {
  check_steps(steps, cfg);
  if (steps == 0) return;
  std::vector<DenseMatrix> grads = draw_gradients(blocks, oracle, rngs.gradient);
  const PeriodDraw period =
      draw_assignments(cfg, blocks.size(), rngs.assignment);
  parallel_for(blocks.size(), threads, [&](std::size_t l) {
    Projector p = galore_projector(orient(blocks[l], grads[l]), cfg.rank);
    blocks[l] = begin_period(std::move(blocks[l]), std::move(p),
                             period.assignments[l], period.q[l], period_index);
  });
  for (std::size_t k = 0; k < steps; ++k) {
    if (k > 0) grads = draw_gradients(blocks, oracle, rngs.gradient);
    const std::size_t step = first_step + k;
    parallel_for(blocks.size(), threads, [&](std::size_t l) {
      BlockState& b = blocks[l];
      b = b.assignment == Assignment::kFullRank
              ? gum_full_rank_step(std::move(b), grads[l], cfg, step)
              : gum_low_rank_step(std::move(b), grads[l], cfg, step);
    });
    if (observer) observer({step + 1, grads, blocks});
  }
}

GenericUnbiasedOptimizer::GenericUnbiasedOptimizer(
    std::vector<DenseMatrix> initial_weights, GumConfig cfg,
    std::size_t threads, std::unique_ptr<ProjectorRule> rule,
    std::unique_ptr<BaseOptimizer> base, bool refresh_each_step)
    : Optimizer(std::move(initial_weights), std::move(cfg), threads),
      rule_(std::move(rule)),
      base_(std::move(base)),
      refresh_each_step_(refresh_each_step) {
  if (!rule_ || !base_) {
    throw InvalidInput("generic optimizer needs a projector rule and a base");
  }
}

void GenericUnbiasedOptimizer::run_period(const GradientOracle& oracle,
                                          RngStreams& rngs,
                                          std::size_t first_step,
                                          std::size_t steps,
                                          const StepObserver& observer) {
  check_steps(steps, cfg_);
  if (steps == 0) return;
  const PeriodDraw period =
      draw_assignments(cfg_, blocks_.size(), rngs.assignment);
  // One projector stream per block, split before the parallel section.
  std::vector<Rng> block_rngs;
  for (std::size_t l = 0; l < blocks_.size(); ++l) {
    block_rngs.emplace_back(mix_seed(rngs.projector.next_u64(), l));
  }
  for (std::size_t l = 0; l < blocks_.size(); ++l) {
    BlockState& b = blocks_[l];
    b.assignment = period.assignments[l];
    b.q = period.q[l];
    b.period_index = period_index_;
    b.projector.reset();
    b.momentum = DenseMatrix(
        b.assignment == Assignment::kLowRank ? cfg_.rank : b.m(), b.n());
  }
  for (std::size_t k = 0; k < steps; ++k) {
    const std::vector<DenseMatrix> grads = draw(oracle, rngs.gradient);
    const std::size_t step = first_step + k;
    const ParadigmSettings settings{cfg_.eta_at(step), cfg_.rank,
                                    cfg_.compensated_variant,
                                    refresh_each_step_};
    for_blocks([&](std::size_t l) {
      blocks_[l] = unbiased_paradigm_step(std::move(blocks_[l]), grads[l],
                                          *rule_, *base_, period.q[l],
                                          block_rngs[l], settings);
    });
    if (observer) observer({step + 1, grads, blocks_});
  }
  ++period_index_;
}

std::unique_ptr<Optimizer> make_optimizer(
    Method method, std::vector<DenseMatrix> initial_weights,
    const GumConfig& cfg, std::size_t threads) {
  switch (method) {
    case Method::kMuon:
      return std::make_unique<MuonOptimizer>(std::move(initial_weights), cfg,
                                             threads);
    case Method::kGaloreMuon:
      return std::make_unique<GaloreMuonOptimizer>(std::move(initial_weights),
                                                   cfg, threads);
    case Method::kGum:
      return std::make_unique<GumOptimizer>(std::move(initial_weights), cfg,
                                            threads);
    case Method::kUnbiasedGeneric:
      return std::make_unique<GenericUnbiasedOptimizer>(
          std::move(initial_weights), cfg, threads,
          std::make_unique<GaloreRule>(),
          std::make_unique<MuonBase>(cfg.momentum, cfg.use_damping,
                                     cfg.msign_mode, cfg.newton_schulz));
  }
  throw InvalidInput("unknown method");
}

}  // namespace gum::optim
