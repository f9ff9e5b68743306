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
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gum/optim/config.hpp"
#include "gum/optim/optimizers.hpp"

namespace gum::harness {

struct Seeds {
  // One run per master seed.
  std::vector<std::uint64_t> masters = {0};
  // Replace the streams derived from the master seed.
  std::optional<std::uint64_t> gradient;
  std::optional<std::uint64_t> assignment;
};

// One experiment as read from a JSON document. Example:
//
//   {
//     "problem": {"name": "noisy_linear_regression", "sigma": 100},
//     "method": "gum",
//     "optimizer": {"period": 50, "rank": 2, "q": 0.5, "step_size": 0.01},
//     "total_steps": 2000,
//     "seeds": {"master": [1, 2, 3]},
//     "trace": {"every": 10, "chi_every": 20}
//   }
struct ExperimentConfig {
  nlohmann::json problem;
  optim::Method method = optim::Method::kGum;
  optim::GumConfig optimizer;
  // Per-step eta: step_size / sqrt(1 + t / decay_scale).
  std::optional<double> decay_scale;
  // unbiased_generic only.
  std::string projector_rule = "galore";
  std::string base_optimizer = "muon";
  bool refresh_each_step = false;
  // muon only: zero the buffer every `period` steps.
  bool restart_momentum = false;
  std::size_t total_steps = 2000;
  Seeds seeds;
  std::size_t trace_every = 1;
  std::size_t chi_every = 20;
  // When non-empty, each run tries every eta and keeps the one with the
  // lowest final loss.
  std::vector<double> eta_grid;
  // 0 writes only the final checkpoint.
  std::size_t checkpoint_every_periods = 0;
  std::string output_dir;
};

// Throws InvalidInput on unknown keys, wrong types or out-of-range values.
// num_blocks is taken from the problem.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// Fully resolved form; parse_experiment_config(to_json(c)) reproduces c.
nlohmann::json to_json(const ExperimentConfig& cfg);

// FNV-1a of the resolved JSON, 16 hex digits. output_dir and total_steps
// are left out so a checkpointed run can be extended.
std::string config_hash(const ExperimentConfig& cfg);

// GumConfig for one run: step schedule expanded to total_steps entries.
optim::GumConfig resolved_optimizer(const ExperimentConfig& cfg);

}  // namespace gum::harness
