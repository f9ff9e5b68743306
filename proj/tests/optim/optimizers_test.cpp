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

#include "gum/optim/optimizers.hpp"

#include <gtest/gtest.h>

#include "gum/errors.hpp"
#include "gum/linalg/svd.hpp"
#include "gum/optim/updates.hpp"
#include "support/matrices.hpp"
#include "support/oracles.hpp"

namespace gum::optim {
namespace {

using linalg::matmul;
using linalg::matmul_tn;
using linalg::max_abs_diff;
using testing::ShiftedQuadratic;

const std::vector<std::pair<std::size_t, std::size_t>> kShapes = {
    {6, 8}, {9, 5}, {4, 4}};

GumConfig base_config() {
  GumConfig cfg;
  cfg.period = 5;
  cfg.rank = 2;
  cfg.num_blocks = 3;
  cfg.momentum = 0.9;
  cfg.step_size = 0.02;
  return cfg;
}

struct RunLog {
  std::vector<std::vector<DenseMatrix>> weights;  // after every step
  std::vector<std::vector<BlockState>> states;
};

RunLog run(Optimizer& opt, const GradientOracle& oracle, std::uint64_t seed,
        std::size_t total) {
  RngStreams rngs = RngStreams::from_seed(seed);
  RunLog out;
  const StepObserver record = [&](const StepEvent& e) {
    out.states.emplace_back(e.blocks.begin(), e.blocks.end());
    std::vector<DenseMatrix> w;
    for (const auto& b : e.blocks) w.push_back(b.weights);
    out.weights.push_back(std::move(w));
  };
  const std::size_t k = opt.config().period;
  for (std::size_t t = 0; t < total; t += k) {
    opt.run_period(oracle, rngs, t, std::min(k, total - t), record);
  }
  return out;
}

TEST(RunPeriodTest, GammaZeroEqualsGaloreMuon) {
  const auto oracle = ShiftedQuadratic::random(kShapes, 0.5, 1);
  GumConfig cfg = base_config();
  cfg.full_rank_layers = 0;
  GumOptimizer gum(oracle.zeros(), cfg, 1);
  GaloreMuonOptimizer galore(oracle.zeros(), cfg, 1);
  const RunLog a = run(gum, oracle, 2, 23);
  const RunLog b = run(galore, oracle, 2, 23);
  ASSERT_EQ(a.weights.size(), 23u);
  EXPECT_EQ(a.weights, b.weights);
  for (const auto& step : a.states) {
    for (const auto& s : step) EXPECT_EQ(s.assignment, Assignment::kLowRank);
  }
}

TEST(RunPeriodTest, AllFullRankCompensatedEqualsRestartedMuon) {
  const auto oracle = ShiftedQuadratic::random(kShapes, 0.5, 3);
  GumConfig cfg = base_config();
  cfg.full_rank_layers = 3;
  cfg.compensated_variant = true;
  GumOptimizer gum(oracle.zeros(), cfg, 1);
  MuonOptimizer muon(oracle.zeros(), cfg, 1, /*restart_momentum=*/true);
  EXPECT_EQ(run(gum, oracle, 4, 23).weights, run(muon, oracle, 4, 23).weights);
}

TEST(RunPeriodTest, SinglePeriodRunEqualsPlainMuon) {
  const auto oracle = ShiftedQuadratic::random(kShapes, 0.5, 5);
  GumConfig cfg = base_config();
  cfg.period = 40;
  cfg.full_rank_layers = 3;
  cfg.compensated_variant = true;
  GumOptimizer gum(oracle.zeros(), cfg, 1);
  MuonOptimizer muon(oracle.zeros(), cfg, 1);
  EXPECT_EQ(run(gum, oracle, 6, 40).weights, run(muon, oracle, 6, 40).weights);
}

TEST(RunPeriodTest, OnePeriodMatchesUnrolledOracle) {
  const auto oracle = ShiftedQuadratic::random({{3, 5}}, 0.4, 7);
  GumConfig cfg = base_config();
  cfg.num_blocks = 1;
  cfg.period = 1;
  cfg.rank = 1;
  cfg.q_override = 0.5;
  cfg.momentum = 0.0;
  cfg.msign_mode = linalg::MsignMode::kExactOracle;
  GumOptimizer gum(oracle.zeros(), cfg, 1);
  const RunLog r = run(gum, oracle, 8, 6);

  RngStreams rngs = RngStreams::from_seed(8);
  DenseMatrix w(3, 5);
  for (std::size_t t = 0; t < 6; ++t) {
    const DenseMatrix g = oracle.gradients(std::span(&w, 1), rngs.gradient)[0];
    const bool full = rngs.assignment.uniform() < 0.5;
    const DenseMatrix u = linalg::svd_thin(g).u.left_columns(1);
    const DenseMatrix ppg = matmul(u, matmul_tn(u, g));
    if (full) {
      w -= 0.02 * linalg::msign_exact(2.0 * (g - ppg));
    } else {
      w -= 0.02 * matmul(u, linalg::msign_exact(2.0 * matmul_tn(u, g)));
    }
    EXPECT_LT(max_abs_diff(r.weights[t][0], w), 1e-12) << "step " << t;
    EXPECT_EQ(r.states[t][0].assignment,
              full ? Assignment::kFullRank : Assignment::kLowRank);
  }
}

TEST(RunPeriodTest, MomentumRestartAndProjectorFreshness) {
  const auto oracle = ShiftedQuadratic::random(kShapes, 0.5, 9);
  GumConfig cfg = base_config();
  cfg.full_rank_layers = 1;
  GumOptimizer gum(oracle.zeros(), cfg, 1);
  RngStreams rngs = RngStreams::from_seed(10);
  for (std::size_t p = 0; p < 6; ++p) {
    std::vector<DenseMatrix> projectors;
    gum.run_period(oracle, rngs, p * cfg.period, cfg.period,
                   [&](const StepEvent& e) {
                     if (projectors.empty()) {
                       for (const auto& b : e.blocks) projectors.push_back(b.projector->p);
                     }
                     for (std::size_t l = 0; l < e.blocks.size(); ++l) {
                       EXPECT_EQ(e.blocks[l].projector->p, projectors[l]);
                       EXPECT_EQ(e.blocks[l].period_index, p);
                       e.blocks[l].check_shapes();
                     }
                   });
  }
  EXPECT_EQ(gum.period_index(), 6u);
}

// After one step from a restarted buffer, the momentum equals that step's
// increment exactly; with a stale buffer it would not.
TEST(RunPeriodTest, MomentumIsZeroAtPeriodStart) {
  const auto oracle = ShiftedQuadratic::random(kShapes, 0.5, 11);
  GumConfig cfg = base_config();
  cfg.full_rank_layers = 1;
  GumOptimizer gum(oracle.zeros(), cfg, 1);
  RngStreams rngs = RngStreams::from_seed(12);
  for (std::size_t p = 0; p < 4; ++p) {
    bool first = true;
    gum.run_period(oracle, rngs, p * cfg.period, cfg.period,
                   [&](const StepEvent& e) {
                     if (!first) return;
                     first = false;
                     for (std::size_t l = 0; l < e.blocks.size(); ++l) {
                       const BlockState& b = e.blocks[l];
                       const DenseMatrix g = orient(b, e.gradients[l]);
                       const DenseMatrix inc =
                           b.assignment == Assignment::kLowRank
                               ? low_rank_increment(g, *b.projector, b.q)
                               : full_rank_increment(g, *b.projector, b.q, false);
                       EXPECT_EQ(b.momentum, inc);
                     }
                   });
  }
}

TEST(RunPeriodTest, DeterministicAcrossThreadCounts) {
  const auto oracle = ShiftedQuadratic::random(kShapes, 0.5, 13);
  GumConfig cfg = base_config();
  cfg.full_rank_layers = 1;
  for (Method m : {Method::kMuon, Method::kGaloreMuon, Method::kGum,
                   Method::kUnbiasedGeneric}) {
    auto one = make_optimizer(m, oracle.zeros(), cfg, 1);
    auto four = make_optimizer(m, oracle.zeros(), cfg, 4);
    EXPECT_EQ(run(*one, oracle, 14, 17).weights, run(*four, oracle, 14, 17).weights)
        << method_name(m);
  }
}

TEST(RunPeriodTest, GenericWithGaloreAndMuonEqualsGum) {
  const auto oracle = ShiftedQuadratic::random(kShapes, 0.5, 15);
  for (bool compensated : {false, true}) {
    GumConfig cfg = base_config();
    cfg.full_rank_layers = 1;
    cfg.compensated_variant = compensated;
    auto gum = make_optimizer(Method::kGum, oracle.zeros(), cfg, 1);
    auto generic = make_optimizer(Method::kUnbiasedGeneric, oracle.zeros(), cfg, 1);
    EXPECT_EQ(run(*gum, oracle, 16, 21).weights, run(*generic, oracle, 16, 21).weights);
  }
}

TEST(RunPeriodTest, FullRankFrequencyFollowsQ) {
  const auto oracle = ShiftedQuadratic::random({{3, 3}, {3, 4}, {2, 5}, {4, 4}}, 0.1, 17);
  GumConfig cfg;
  cfg.period = 1;
  cfg.rank = 1;
  cfg.num_blocks = 4;
  cfg.full_rank_layers = 1;
  GumOptimizer gum(oracle.zeros(), cfg, 1);
  RngStreams rngs = RngStreams::from_seed(18);
  std::vector<int> hits(4, 0);
  for (std::size_t p = 0; p < 500; ++p) {
    gum.run_period(oracle, rngs, p, 1, nullptr);
    for (std::size_t l = 0; l < 4; ++l) {
      hits[l] += gum.blocks()[l].assignment == Assignment::kFullRank;
    }
  }
  int pooled = 0;
  for (int h : hits) {
    EXPECT_NEAR(h / 500.0, 0.25, 0.06);
    pooled += h;
  }
  EXPECT_NEAR(pooled / 2000.0, 0.25, 0.03);
}

TEST(RunPeriodTest, ExactGammaSampling) {
  const auto oracle = ShiftedQuadratic::random(kShapes, 0.5, 19);
  GumConfig cfg = base_config();
  cfg.full_rank_layers = 2;
  cfg.sampling = SamplingMode::kExactGamma;
  GumOptimizer gum(oracle.zeros(), cfg, 1);
  RngStreams rngs = RngStreams::from_seed(20);
  for (std::size_t p = 0; p < 20; ++p) {
    gum.run_period(oracle, rngs, p * cfg.period, cfg.period, nullptr);
    int full = 0;
    for (const auto& b : gum.blocks()) full += b.assignment == Assignment::kFullRank;
    EXPECT_EQ(full, 2);
  }
}

TEST(RunPeriodTest, StateScalarsMatchAssignments) {
  const auto oracle = ShiftedQuadratic::random(kShapes, 0.5, 21);
  GumConfig cfg = base_config();
  cfg.full_rank_layers = 1;
  GumOptimizer gum(oracle.zeros(), cfg, 1);
  RngStreams rngs = RngStreams::from_seed(22);
  gum.run_period(oracle, rngs, 0, cfg.period, nullptr);
  std::size_t expect = 0;
  for (const auto& b : gum.blocks()) {
    expect += b.m() * cfg.rank +
              (b.assignment == Assignment::kFullRank ? b.m() * b.n()
                                                     : cfg.rank * b.n());
  }
  EXPECT_EQ(gum.state_scalars(), expect);
  MuonOptimizer muon(oracle.zeros(), cfg, 1);
  EXPECT_EQ(muon.state_scalars(), 6u * 8 + 9 * 5 + 4 * 4);
}

TEST(RunPeriodTest, Errors) {
  const auto oracle = ShiftedQuadratic::random(kShapes, 0.5, 23);
  GumConfig cfg = base_config();
  cfg.rank = 5;
  EXPECT_THROW(GumOptimizer(oracle.zeros(), cfg, 1), InvalidInput);
  cfg = base_config();
  cfg.num_blocks = 2;
  EXPECT_THROW(GumOptimizer(oracle.zeros(), cfg, 1), InvalidInput);
  cfg = base_config();
  GumOptimizer gum(oracle.zeros(), cfg, 1);
  RngStreams rngs = RngStreams::from_seed(1);
  EXPECT_THROW(gum.run_period(oracle, rngs, 0, cfg.period + 1, nullptr),
               InvalidInput);
  EXPECT_THROW(parse_method("adamw"), InvalidInput);
  EXPECT_EQ(parse_method("galore_muon"), Method::kGaloreMuon);
}

TEST(RngStreamsTest, StreamsAreIndependentOfEachOther) {
  RngStreams a = RngStreams::from_seed(5);
  RngStreams b = RngStreams::from_seed(5);
  EXPECT_EQ(a.gradient, b.gradient);
  EXPECT_FALSE(a.gradient == a.assignment);
  a.assignment.next_u64();
  EXPECT_EQ(a.gradient.next_u64(), b.gradient.next_u64());
}

}  // namespace
}  // namespace gum::optim
