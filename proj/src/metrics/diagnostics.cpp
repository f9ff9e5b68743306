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

#include "gum/metrics/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "gum/errors.hpp"
#include "gum/linalg/norms.hpp"
#include "gum/linalg/svd.hpp"
#include "gum/metrics/trace.hpp"

namespace gum::metrics {

double chi_residual(const DenseMatrix& g_unprojected,
                    const DenseMatrix& g_projected) {
  return chi_residual(std::span(&g_unprojected, 1), std::span(&g_projected, 1));
}

double chi_residual(std::span<const DenseMatrix> g_unprojected,
                    std::span<const DenseMatrix> g_projected) {
  if (g_unprojected.size() != g_projected.size()) {
    throw InvalidInput("chi_residual: block counts differ");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t l = 0; l < g_unprojected.size(); ++l) {
    linalg::require_same_shape(g_unprojected[l], g_projected[l], "chi_residual");
    num += linalg::frobenius_norm_squared(g_unprojected[l] - g_projected[l]);
    den += linalg::frobenius_norm_squared(g_unprojected[l]);
  }
  if (!(den > 0.0)) throw InvalidInput("chi_residual: zero gradient");
  return std::sqrt(num / den);
}

SpectrumHistogram spectrum_snapshot(const optim::BlockState& state,
                                    std::size_t block, std::size_t step) {
  return {block, state.period_index, step,
          linalg::svd_thin(state.weights).s};
}

nlohmann::json to_json(const SpectrumHistogram& h) {
  return {{"block", h.block},
          {"period", h.period},
          {"step", h.step},
          {"singular_values", h.singular_values}};
}

StableRankSummary stable_rank_trace(std::span<const optim::BlockState> states) {
  std::vector<DenseMatrix> w;
  w.reserve(states.size());
  for (const auto& s : states) w.push_back(s.weights);
  return stable_rank_trace(w);
}

StableRankSummary stable_rank_trace(std::span<const DenseMatrix> weights) {
  StableRankSummary out;
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& w : weights) {
    if (w.is_zero()) {
      out.per_block.push_back(std::nullopt);
      out.skipped_zero_block = true;
      continue;
    }
    const double sr = linalg::stable_rank(w);
    out.per_block.push_back(sr);
    sum += sr;
    ++count;
  }
  if (count > 0) out.mean = sum / static_cast<double>(count);
  return out;
}

GradNormSummary grad_norm_trace(std::span<const TraceRecord> trace) {
  if (trace.empty()) throw InvalidInput("grad_norm_trace: empty trace");
  GradNormSummary out;
  double best = trace.front().grad_trace_norm;
  for (const auto& r : trace) {
    best = std::min(best, r.grad_trace_norm);
    out.min_so_far.push_back(best);
  }
  out.final_min = best;
  out.final_value = trace.back().grad_trace_norm;
  return out;
}

double trace_norm_sum(std::span<const DenseMatrix> grads) {
  double total = 0.0;
  for (const auto& g : grads) total += linalg::trace_norm(g);
  return total;
}

}  // namespace gum::metrics
