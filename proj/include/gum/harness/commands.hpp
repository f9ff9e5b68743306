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
#include <iosfwd>
#include <optional>
#include <string>

namespace gum::harness {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalFailure = 3;
inline constexpr int kExitVerificationFailure = 4;

struct RunCommand {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> resume;
};

// Writes <out>/config.json and, per seed, <out>/seed_<N>/{trace.csv,
// summary.json, checkpoint/}. The synthetic command accepts the noisy
// linear regression problem, the blockwise one the multi-block quadratic.
int cmd_run_synthetic(const RunCommand& cmd, std::ostream& log);
int cmd_run_blockwise(const RunCommand& cmd, std::ostream& log);

struct VerifyUnbiasedCommand {
  std::size_t trials = 20;
  std::size_t draws = 100000;
  std::uint64_t seed = 1;
  std::optional<double> q = 0.5;
  std::optional<std::filesystem::path> out;
};
int cmd_verify_unbiased(const VerifyUnbiasedCommand& cmd, std::ostream& out,
                        std::ostream& log);

struct MemoryReportCommand {
  std::filesystem::path shapes;
  std::size_t rank = 0;
  std::size_t rank_prime = 0;
  std::size_t gamma = 0;
  std::optional<std::filesystem::path> out;
};
// Shapes file: {"shapes": [[m, n], ...]} or a bare array of pairs.
int cmd_memory_report(const MemoryReportCommand& cmd, std::ostream& out,
                      std::ostream& log);

struct AnalyzeSpectrumCommand {
  std::filesystem::path checkpoint;
  std::optional<std::filesystem::path> out;
};
// Writes spectra.json and stable_rank.csv (into the checkpoint directory
// unless --out is given).
int cmd_analyze_spectrum(const AnalyzeSpectrumCommand& cmd, std::ostream& log);

struct GoldenCheckCommand {
  std::filesystem::path config;
  std::filesystem::path reference;
  std::optional<std::uint64_t> seed;
};
// Reruns the config's first seed and compares with the reference trace.
int cmd_golden_check(const GoldenCheckCommand& cmd, std::ostream& log);

}  // namespace gum::harness
