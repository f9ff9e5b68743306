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
#include <filesystem>
#include <string>
#include <vector>

#include "gum/optim/block_state.hpp"
#include "gum/optim/optimizers.hpp"

namespace gum::optim {

// On disk: a directory with manifest.json and, per block,
// block_NNN_weights.bin, block_NNN_momentum.bin and, when present,
// block_NNN_projector.bin in the DenseMatrix binary format.
struct Checkpoint {
  std::vector<BlockState> blocks;
  std::size_t period_index = 0;
  // Iterations already run in the current period.
  std::size_t step_in_period = 0;
  std::size_t global_step = 0;
  std::string config_hash;
  std::string method;
  RngStreams rngs;
};

// Creates the directory if needed and overwrites existing files.
void save_checkpoint(const std::filesystem::path& dir, const Checkpoint& ckpt);
// Throws InvalidInput on a missing or malformed checkpoint.
Checkpoint load_checkpoint(const std::filesystem::path& dir);

}  // namespace gum::optim
