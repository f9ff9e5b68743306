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
#include <optional>
#include <vector>

#include <json.hpp>

namespace gum::harness {

struct UnbiasedTrial {
  std::size_t index = 0;
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t r = 0;
  double q = 0;
  bool compensated = false;
  bool galore_projector = true;
  std::size_t draws = 0;
  double fraction_full_rank = 0;
  // ||mean - G||_F
  double error = 0;
  // sqrt(sum of per-entry sample variances / draws)
  double standard_error = 0;
  bool pass = false;
};

struct UnbiasedReport {
  std::vector<UnbiasedTrial> trials;
  double tolerance_in_standard_errors = 4.0;
  bool all_pass = false;
};

// Monte-Carlo mean of the effective gradient over `draws` Bernoulli(q)
// assignment draws, for `trials` seeded (G, P, q) triples and both the plain
// and compensated variants. Even triples use the GaLore projector of G, odd
// ones a random orthonormal P. q is drawn from [0.1, 0.9] unless fixed.
UnbiasedReport verify_unbiased(std::size_t trials, std::size_t draws,
                               std::uint64_t seed,
                               std::optional<double> fixed_q = std::nullopt);

nlohmann::json to_json(const UnbiasedReport& report);

}  // namespace gum::harness
