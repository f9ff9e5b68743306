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

#include "gum/optim/config.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gum/errors.hpp"

namespace gum::optim {
namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidInput("GumConfig: " + msg);
}

bool is_probability(double q) { return std::isfinite(q) && q >= 0.0 && q <= 1.0; }

}  // namespace

double GumConfig::q() const {
  if (q_override) return *q_override;
  return static_cast<double>(full_rank_layers) /
         static_cast<double>(num_blocks);
}

double GumConfig::q_for_block(std::size_t block) const {
  if (!per_block_q.empty()) return per_block_q.at(block);
  return q();
}

double GumConfig::eta_at(std::size_t step) const {
  if (step_schedule.empty()) return step_size;
  return step_schedule[std::min(step, step_schedule.size() - 1)];
}

void GumConfig::validate() const {
  require(period >= 1, "period must be positive");
  require(rank >= 1, "rank must be positive");
  require(num_blocks >= 1, "num_blocks must be positive");
  require(full_rank_layers <= num_blocks,
          "full_rank_layers exceeds num_blocks");
  require(std::isfinite(momentum) && momentum >= 0.0 && momentum < 1.0,
          "momentum must be in [0, 1)");
  require(std::isfinite(step_size) && step_size > 0.0,
          "step_size must be positive");
  for (double eta : step_schedule) {
    require(std::isfinite(eta) && eta > 0.0,
            "step_schedule entries must be positive");
  }
  if (q_override) require(is_probability(*q_override), "q must be in [0, 1]");
  if (!per_block_q.empty()) {
    require(per_block_q.size() == num_blocks,
            "per_block_q needs one entry per block");
    for (double q : per_block_q) {
      require(is_probability(q), "per_block_q entries must be in [0, 1]");
    }
  }
  require(sampling == SamplingMode::kBernoulli ||
              (!q_override && per_block_q.empty()),
          "exact-gamma sampling takes q from full_rank_layers");
  newton_schulz.validate();
}

void GumConfig::validate_shapes(
    std::span<const std::pair<std::size_t, std::size_t>> shapes) const {
  validate();
  require(shapes.size() == num_blocks,
          "num_blocks is " + std::to_string(num_blocks) + " but problem has " +
              std::to_string(shapes.size()) + " blocks");
  for (const auto& [rows, cols] : shapes) {
    require(rank <= std::min(rows, cols),
            "rank " + std::to_string(rank) + " exceeds block " +
                std::to_string(rows) + "x" + std::to_string(cols));
  }
}

}  // namespace gum::optim
