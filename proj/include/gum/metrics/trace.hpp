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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gum::metrics {

// One row of an optimization trace. Step 0 is the initial point.
struct TraceRecord {
  std::size_t step = 0;
  double loss = 0;
  // sum over blocks of the trace norm of the noise-free gradient
  double grad_trace_norm = 0;
  std::optional<double> chi_residual;
  std::vector<std::optional<double>> stable_ranks;
  std::optional<double> stable_rank_mean;
  std::size_t memory_scalars = 0;
  // One character per block: '1' full-rank, '0' low-rank. Empty for
  // methods without assignments.
  std::string assignment_bits;
};

inline constexpr const char* kTraceHeader =
    "step,loss,grad_trace_norm,chi_residual,stable_rank_mean,memory_scalars,"
    "assignment_bits";

// Shortest decimal form that reads back to the same double.
std::string format_double(double x);

// Header plus one row per record. Absent values are empty fields. Per-block
// stable ranks are not part of the CSV.
void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace);
// Throws InvalidInput on a bad header, malformed row, non-finite value or
// non-increasing step.
std::vector<TraceRecord> read_trace_csv(std::istream& in);

// Splits one CSV line on commas; no quoting.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace gum::metrics
