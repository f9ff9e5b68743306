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

#include <cstdint>
#include <random>
#include <string>

namespace gum {

// Seeded generator with platform-independent draws.
//
// std::normal_distribution and friends are implementation-defined, which
// would make traces differ between standard libraries. The engine itself
// (mt19937_64) is fully specified, so all derived draws are computed here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the second variate is discarded so the
  // generator carries no hidden cache.
  double normal();

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [lo, hi].
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);

  std::string serialize() const;
  static Rng deserialize(const std::string& text);

  friend bool operator==(const Rng& a, const Rng& b) {
    return a.engine_ == b.engine_;
  }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// Stream identifiers for seeds derived from a master seed.
inline constexpr std::uint64_t kGradientStream = 0x67726164ULL;    // "grad"
inline constexpr std::uint64_t kAssignmentStream = 0x61736e67ULL;  // "asng"
inline constexpr std::uint64_t kProjectorStream = 0x70726f6aULL;   // "proj"

}  // namespace gum
