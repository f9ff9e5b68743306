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

#include "gum/harness/verification.hpp"

#include <cmath>

#include "gum/errors.hpp"
#include "gum/optim/paradigm.hpp"
#include "gum/optim/updates.hpp"
#include "gum/random.hpp"

namespace gum::harness {

using linalg::DenseMatrix;

namespace {

DenseMatrix gaussian(std::size_t rows, std::size_t cols, Rng& rng) {
  DenseMatrix m(rows, cols);
  for (double& x : m.data()) x = rng.normal();
  return m;
}

UnbiasedTrial run_trial(const DenseMatrix& g, const optim::Projector& p,
                        double q, bool compensated, std::size_t draws,
                        Rng& rng) {
  UnbiasedTrial t;
  t.m = g.rows();
  t.n = g.cols();
  t.r = p.rank();
  t.q = q;
  t.compensated = compensated;
  t.draws = draws;
  const DenseMatrix full =
      optim::effective_gradient(g, p, q, optim::Assignment::kFullRank, compensated);
  const DenseMatrix low =
      optim::effective_gradient(g, p, q, optim::Assignment::kLowRank, compensated);
  const std::size_t size = g.size();
  std::vector<double> sum(size, 0.0);
  std::vector<double> sum_sq(size, 0.0);
  std::size_t full_count = 0;
  for (std::size_t d = 0; d < draws; ++d) {
    const bool is_full = rng.bernoulli(q);
    full_count += is_full;
    const auto e = (is_full ? full : low).data();
    for (std::size_t i = 0; i < size; ++i) {
      sum[i] += e[i];
      sum_sq[i] += e[i] * e[i];
    }
  }
  const double n = static_cast<double>(draws);
  double err_sq = 0;
  double var_sum = 0;
  const auto gd = g.data();
  for (std::size_t i = 0; i < size; ++i) {
    const double mean = sum[i] / n;
    err_sq += (mean - gd[i]) * (mean - gd[i]);
    var_sum += std::max(0.0, (sum_sq[i] - n * mean * mean) / (n - 1));
  }
  t.fraction_full_rank = static_cast<double>(full_count) / n;
  t.error = std::sqrt(err_sq);
  t.standard_error = std::sqrt(var_sum / n);
  return t;
}

}  // namespace

UnbiasedReport verify_unbiased(std::size_t trials, std::size_t draws,
                               std::uint64_t seed,
                               std::optional<double> fixed_q) {
  if (trials == 0) throw InvalidInput("verify_unbiased: trials must be positive");
  if (draws < 2) throw InvalidInput("verify_unbiased: draws must be at least 2");
  if (fixed_q && !(*fixed_q > 0.0 && *fixed_q < 1.0)) {
    throw InvalidInput("verify_unbiased: q must lie in (0, 1)");
  }
  UnbiasedReport report;
  report.all_pass = true;
  for (std::size_t k = 0; k < trials; ++k) {
    Rng rng(mix_seed(seed, k));
    const std::size_t m = static_cast<std::size_t>(rng.uniform_int(3, 10));
    const std::size_t n = m + static_cast<std::size_t>(rng.uniform_int(0, 6));
    const std::size_t r = static_cast<std::size_t>(rng.uniform_int(1, m - 1));
    const double q = fixed_q ? *fixed_q : 0.1 + 0.8 * rng.uniform();
    const DenseMatrix g = gaussian(m, n, rng);
    const bool galore = k % 2 == 0;
    const optim::Projector p = galore
                                   ? optim::galore_projector(g, r)
                                   : optim::RandomOrthonormalRule()(g, r, rng);
    for (bool compensated : {false, true}) {
      Rng draws_rng(mix_seed(mix_seed(seed, k), compensated ? 2 : 1));
      UnbiasedTrial t = run_trial(g, p, q, compensated, draws, draws_rng);
      t.index = k;
      t.galore_projector = galore;
      t.pass = t.error <= report.tolerance_in_standard_errors * t.standard_error;
      report.all_pass = report.all_pass && t.pass;
      report.trials.push_back(t);
    }
  }
  return report;
}

nlohmann::json to_json(const UnbiasedReport& report) {
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& t : report.trials) {
    trials.push_back({{"index", t.index},
                      {"m", t.m},
                      {"n", t.n},
                      {"r", t.r},
                      {"q", t.q},
                      {"variant", t.compensated ? "compensated" : "plain"},
                      {"projector", t.galore_projector ? "galore" : "random"},
                      {"draws", t.draws},
                      {"fraction_full_rank", t.fraction_full_rank},
                      {"error", t.error},
                      {"standard_error", t.standard_error},
                      {"pass", t.pass}});
  }
  return {{"tolerance_in_standard_errors", report.tolerance_in_standard_errors},
          {"all_pass", report.all_pass},
          {"trials", trials}};
}

}  // namespace gum::harness
