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
#include <filesystem>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "gum/harness/config.hpp"
#include "gum/metrics/trace.hpp"
#include "gum/optim/block_state.hpp"
#include "gum/problems/problem.hpp"

namespace gum::harness {

// Loss above which a run counts as diverged.
inline constexpr double kBlowUpLoss = 1e12;

struct RunOptions {
  std::size_t threads = 1;
  // Checkpoints go here when set.
  std::optional<std::filesystem::path> checkpoint_dir = std::nullopt;
  // Continue from a checkpoint written at a period boundary.
  std::optional<std::filesystem::path> resume_from = std::nullopt;
};

struct RunResult {
  std::uint64_t seed = 0;
  double eta = 0;
  std::vector<metrics::TraceRecord> trace;
  std::vector<optim::BlockState> final_blocks;
  std::size_t steps_completed = 0;
  bool blew_up = false;
  // (eta, final shifted loss) for every grid point tried.
  std::vector<std::pair<double, double>> grid_scores;
};

std::unique_ptr<problems::Problem> make_problem(const ExperimentConfig& cfg);

// Builds the configured optimizer over the problem's initial point.
std::unique_ptr<optim::Optimizer> make_experiment_optimizer(
    const ExperimentConfig& cfg, const problems::Problem& problem,
    std::size_t threads);

// One run at the configured step size. Losses in the trace are shifted by
// the problem's optimal value when it is known. A loss above kBlowUpLoss or
// a non-finite loss stops the run; the trace ends at the last good row.
// Throws InvalidInput for an unusable checkpoint.
RunResult run_experiment(const ExperimentConfig& cfg,
                         const problems::Problem& problem, std::uint64_t seed,
                         const RunOptions& options = {});

// run_experiment over cfg.eta_grid (or the single configured step size),
// keeping the run with the lowest final shifted loss.
RunResult run_tuned(const ExperimentConfig& cfg,
                    const problems::Problem& problem, std::uint64_t seed,
                    const RunOptions& options = {});

struct GoldenMismatch {
  std::size_t row;  // 1-based data row; 0 for a row-count mismatch
  std::string field;
  std::string expected;
  std::string actual;
};

// Compares traces field by field: integers and assignment bits exactly,
// reals to 1e-12 relative to max(1, |a|, |b|).
std::optional<GoldenMismatch> compare_traces(
    const std::vector<metrics::TraceRecord>& expected,
    const std::vector<metrics::TraceRecord>& actual);

}  // namespace gum::harness
