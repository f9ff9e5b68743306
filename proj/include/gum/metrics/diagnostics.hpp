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
#include <vector>

#include <json.hpp>

#include "gum/linalg/dense_matrix.hpp"
#include "gum/optim/block_state.hpp"

namespace gum::metrics {

using linalg::DenseMatrix;

// ||g_u - g_p||_F / ||g_u||_F. Throws InvalidInput on a shape mismatch or
// a zero g_u.
double chi_residual(const DenseMatrix& g_unprojected,
                    const DenseMatrix& g_projected);
// Same ratio over several blocks treated as one stacked matrix.
double chi_residual(std::span<const DenseMatrix> g_unprojected,
                    std::span<const DenseMatrix> g_projected);

struct SpectrumHistogram {
  std::size_t block = 0;
  std::size_t period = 0;
  std::size_t step = 0;
  // Descending.
  std::vector<double> singular_values;
};

// Singular values of the block weights.
SpectrumHistogram spectrum_snapshot(const optim::BlockState& state,
                                    std::size_t block = 0,
                                    std::size_t step = 0);

nlohmann::json to_json(const SpectrumHistogram& h);

struct StableRankSummary {
  // Absent for all-zero blocks.
  std::vector<std::optional<double>> per_block;
  // Mean over the blocks that have a value; absent if none do.
  std::optional<double> mean;
  bool skipped_zero_block = false;
};

// Stable rank of every block's weights.
StableRankSummary stable_rank_trace(std::span<const optim::BlockState> states);
StableRankSummary stable_rank_trace(std::span<const DenseMatrix> weights);

struct TraceRecord;

struct GradNormSummary {
  std::vector<double> min_so_far;
  double final_min = 0;
  double final_value = 0;
};

// Running minimum of grad_trace_norm. Throws InvalidInput on an empty trace.
GradNormSummary grad_norm_trace(std::span<const TraceRecord> trace);

// sum_l ||G_l||_* over blocks.
double trace_norm_sum(std::span<const DenseMatrix> grads);

}  // namespace gum::metrics
