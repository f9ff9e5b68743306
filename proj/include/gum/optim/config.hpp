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
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gum/linalg/matrix_sign.hpp"

namespace gum::optim {

enum class SamplingMode {
  // Each block independently full-rank with probability q.
  kBernoulli,
  // Exactly gamma blocks, drawn without replacement. Hard memory cap.
  kExactGamma,
};

// Hyperparameters shared by every optimizer in the family.
struct GumConfig {
  std::size_t period = 50;            // K: iterations per projector period
  std::size_t rank = 2;               // r
  std::size_t full_rank_layers = 0;   // gamma
  std::size_t num_blocks = 1;         // N_L
  // Replaces gamma / N_L when set; needed for single-block problems.
  std::optional<double> q_override;
  // Per-block q table; overrides the global q when non-empty.
  std::vector<double> per_block_q;
  double momentum = 0.9;              // beta
  double step_size = 0.01;            // eta
  // Per-step eta table. Step t uses entry min(t, size - 1).
  std::vector<double> step_schedule;
  // Full-rank increment G - (1 - q) P P^T G instead of G - P P^T G.
  bool compensated_variant = false;
  // (1 - beta) factor on momentum increments.
  bool use_damping = false;
  linalg::MsignMode msign_mode = linalg::MsignMode::kNewtonSchulz;
  linalg::NewtonSchulzCoeffs newton_schulz;
  SamplingMode sampling = SamplingMode::kBernoulli;

  // Global full-rank probability.
  double q() const;
  double q_for_block(std::size_t block) const;
  double eta_at(std::size_t step) const;

  // Range checks on scalar fields; throws InvalidInput.
  void validate() const;
  // validate() plus rank <= min(m, n) for every block and
  // num_blocks == shapes.size().
  void validate_shapes(
      std::span<const std::pair<std::size_t, std::size_t>> shapes) const;
};

}  // namespace gum::optim
