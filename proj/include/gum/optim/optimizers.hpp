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
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "gum/optim/block_state.hpp"
#include "gum/optim/config.hpp"
#include "gum/optim/gradient_oracle.hpp"
#include "gum/optim/paradigm.hpp"
#include "gum/random.hpp"

namespace gum::optim {

// Independent random streams of one run.
struct RngStreams {
  Rng gradient;
  Rng assignment;
  Rng projector;

  static RngStreams from_seed(std::uint64_t master_seed);
  // Explicit per-stream seeds.
  static RngStreams from_seeds(std::uint64_t gradient_seed,
                               std::uint64_t assignment_seed,
                               std::uint64_t projector_seed);
};

struct StepEvent {
  // Updates completed so far, counted from the start of the run.
  std::size_t step;
  // Gradients the step consumed, in the blocks' own shapes.
  std::span<const DenseMatrix> gradients;
  std::span<const BlockState> blocks;
};
using StepObserver = std::function<void(const StepEvent&)>;

enum class Method { kMuon, kGaloreMuon, kGum, kUnbiasedGeneric };

std::string_view method_name(Method method);
// Throws InvalidInput on an unknown name.
Method parse_method(std::string_view name);

// A blockwise optimizer driven one period at a time. Each inner step makes
// one oracle call; the gradient that opens a period also serves its first
// step.
class Optimizer {
 public:
  Optimizer(std::vector<DenseMatrix> initial_weights, GumConfig cfg,
            std::size_t threads);
  virtual ~Optimizer() = default;

  virtual Method method() const = 0;

  // Runs `steps` iterations (at most cfg.period) as one period.
  // `first_step` is the global index of the first iteration.
  virtual void run_period(const GradientOracle& oracle, RngStreams& rngs,
                          std::size_t first_step, std::size_t steps,
                          const StepObserver& observer) = 0;

  const GumConfig& config() const { return cfg_; }
  const std::vector<BlockState>& blocks() const { return blocks_; }
  // For checkpoint restore. Shapes are checked by the next step.
  std::vector<BlockState>& mutable_blocks() { return blocks_; }
  std::vector<DenseMatrix> weights() const;
  std::size_t state_scalars() const;
  std::size_t period_index() const { return period_index_; }
  void set_period_index(std::size_t p) { period_index_ = p; }

 protected:
  // Draws the gradient at the current weights.
  std::vector<DenseMatrix> draw(const GradientOracle& oracle, Rng& rng) const;
  // Applies fn(block_index) to every block on the worker pool.
  template <class Fn>
  void for_blocks(Fn&& fn) const;

  GumConfig cfg_;
  std::size_t threads_;
  std::vector<BlockState> blocks_;
  std::size_t period_index_ = 0;
};

// Full-parameter Muon. With `restart_momentum` the buffer is zeroed at each
// period start.
class MuonOptimizer final : public Optimizer {
 public:
  MuonOptimizer(std::vector<DenseMatrix> initial_weights, GumConfig cfg,
                std::size_t threads, bool restart_momentum = false);
  Method method() const override { return Method::kMuon; }
  void run_period(const GradientOracle& oracle, RngStreams& rngs,
                  std::size_t first_step, std::size_t steps,
                  const StepObserver& observer) override;

 private:
  bool restart_momentum_;
};

// Biased projected paradigm with Muon: every block low-rank, projector
// refreshed and momentum restarted each period.
class GaloreMuonOptimizer final : public Optimizer {
 public:
  using Optimizer::Optimizer;
  Method method() const override { return Method::kGaloreMuon; }
  void run_period(const GradientOracle& oracle, RngStreams& rngs,
                  std::size_t first_step, std::size_t steps,
                  const StepObserver& observer) override;
};

class GumOptimizer final : public Optimizer {
 public:
  using Optimizer::Optimizer;
  Method method() const override { return Method::kGum; }
  void run_period(const GradientOracle& oracle, RngStreams& rngs,
                  std::size_t first_step, std::size_t steps,
                  const StepObserver& observer) override;
};

// Unbiased paradigm with pluggable projector rule and base optimizer.
class GenericUnbiasedOptimizer final : public Optimizer {
 public:
  GenericUnbiasedOptimizer(std::vector<DenseMatrix> initial_weights,
                           GumConfig cfg, std::size_t threads,
                           std::unique_ptr<ProjectorRule> rule,
                           std::unique_ptr<BaseOptimizer> base,
                           bool refresh_each_step = false);
  Method method() const override { return Method::kUnbiasedGeneric; }
  void run_period(const GradientOracle& oracle, RngStreams& rngs,
                  std::size_t first_step, std::size_t steps,
                  const StepObserver& observer) override;

 private:
  std::unique_ptr<ProjectorRule> rule_;
  std::unique_ptr<BaseOptimizer> base_;
  bool refresh_each_step_;
};

// GUM period over explicit block states:
// momentum restart, projector from the period-start gradient,
// assignment resampling, then `steps` dispatched inner iterations.
void run_period(std::vector<BlockState>& blocks, const GradientOracle& oracle,
                const GumConfig& cfg, RngStreams& rngs, std::size_t first_step,
                std::size_t steps, std::size_t period_index,
                std::size_t threads, const StepObserver& observer);

// Builds an optimizer with GaLore projectors and a Muon base for
// kUnbiasedGeneric. Validates cfg against the initial weights' shapes.
std::unique_ptr<Optimizer> make_optimizer(
    Method method, std::vector<DenseMatrix> initial_weights,
    const GumConfig& cfg, std::size_t threads);

}  // namespace gum::optim
