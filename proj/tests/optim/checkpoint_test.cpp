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

#include "gum/optim/checkpoint.hpp"

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "gum/errors.hpp"
#include "support/oracles.hpp"

namespace gum::optim {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const char* name) {
  const fs::path dir = fs::temp_directory_path() / "gum_checkpoint_test" / name;
  fs::remove_all(dir);
  return dir;
}

GumConfig config() {
  GumConfig cfg;
  cfg.period = 4;
  cfg.rank = 2;
  cfg.num_blocks = 2;
  cfg.full_rank_layers = 1;
  return cfg;
}

TEST(CheckpointTest, RoundTrip) {
  const auto oracle = testing::ShiftedQuadratic::random({{4, 6}, {7, 3}}, 0.3, 1);
  GumOptimizer opt(oracle.zeros(), config(), 1);
  RngStreams rngs = RngStreams::from_seed(2);
  opt.run_period(oracle, rngs, 0, 4, nullptr);

  const fs::path dir = scratch_dir("round_trip");
  save_checkpoint(dir, {opt.blocks(), 1, 0, 4, "abc", "gum", rngs});
  const Checkpoint c = load_checkpoint(dir);
  ASSERT_EQ(c.blocks.size(), 2u);
  for (std::size_t l = 0; l < 2; ++l) {
    EXPECT_EQ(c.blocks[l].weights, opt.blocks()[l].weights);
    EXPECT_EQ(c.blocks[l].momentum, opt.blocks()[l].momentum);
    EXPECT_EQ(c.blocks[l].projector->p, opt.blocks()[l].projector->p);
    EXPECT_EQ(c.blocks[l].assignment, opt.blocks()[l].assignment);
    EXPECT_EQ(c.blocks[l].q, opt.blocks()[l].q);
  }
  EXPECT_EQ(c.period_index, 1u);
  EXPECT_EQ(c.global_step, 4u);
  EXPECT_EQ(c.config_hash, "abc");
  EXPECT_EQ(c.method, "gum");
  EXPECT_EQ(c.rngs.gradient, rngs.gradient);
  EXPECT_EQ(c.rngs.assignment, rngs.assignment);
}

TEST(CheckpointTest, ResumeMatchesUninterruptedRun) {
  const auto oracle = testing::ShiftedQuadratic::random({{4, 6}, {7, 3}}, 0.3, 3);
  GumOptimizer straight(oracle.zeros(), config(), 1);
  RngStreams rngs = RngStreams::from_seed(4);
  for (std::size_t p = 0; p < 4; ++p) straight.run_period(oracle, rngs, 4 * p, 4, nullptr);

  GumOptimizer first(oracle.zeros(), config(), 1);
  RngStreams r1 = RngStreams::from_seed(4);
  for (std::size_t p = 0; p < 2; ++p) first.run_period(oracle, r1, 4 * p, 4, nullptr);
  const fs::path dir = scratch_dir("resume");
  save_checkpoint(dir, {first.blocks(), first.period_index(), 0, 8, "h", "gum", r1});

  const Checkpoint c = load_checkpoint(dir);
  GumOptimizer resumed(oracle.zeros(), config(), 1);
  resumed.mutable_blocks() = c.blocks;
  resumed.set_period_index(c.period_index);
  RngStreams r2 = c.rngs;
  for (std::size_t p = 2; p < 4; ++p) resumed.run_period(oracle, r2, 4 * p, 4, nullptr);
  for (std::size_t l = 0; l < 2; ++l) {
    EXPECT_EQ(resumed.blocks()[l].weights, straight.blocks()[l].weights);
  }
}

TEST(CheckpointTest, MuonBlocksHaveNoProjectorFile) {
  const auto oracle = testing::ShiftedQuadratic::random({{3, 3}}, 0.0, 5);
  GumConfig cfg = config();
  cfg.num_blocks = 1;
  cfg.full_rank_layers = 0;
  MuonOptimizer opt(oracle.zeros(), cfg, 1);
  const fs::path dir = scratch_dir("muon");
  save_checkpoint(dir, {opt.blocks(), 0, 0, 0, "", "muon", RngStreams::from_seed(1)});
  EXPECT_FALSE(fs::exists(dir / "block_000_projector.bin"));
  EXPECT_FALSE(load_checkpoint(dir).blocks[0].projector.has_value());
}

TEST(CheckpointTest, MissingOrCorruptThrows) {
  EXPECT_THROW(load_checkpoint(scratch_dir("missing")), InvalidInput);
  const fs::path dir = scratch_dir("corrupt");
  fs::create_directories(dir);
  std::ofstream(dir / "manifest.json") << "{\"format\": \"gum-checkpoint/1\"}";
  EXPECT_THROW(load_checkpoint(dir), InvalidInput);
  std::ofstream(dir / "manifest.json") << "not json";
  EXPECT_THROW(load_checkpoint(dir), InvalidInput);
}

TEST(CheckpointTest, TruncatedMatrixThrows) {
  const auto oracle = testing::ShiftedQuadratic::random({{3, 4}}, 0.0, 6);
  GumConfig cfg = config();
  cfg.num_blocks = 1;
  cfg.full_rank_layers = 0;
  MuonOptimizer opt(oracle.zeros(), cfg, 1);
  const fs::path dir = scratch_dir("truncated");
  save_checkpoint(dir, {opt.blocks(), 0, 0, 0, "", "muon", RngStreams::from_seed(1)});
  fs::resize_file(dir / "block_000_weights.bin", 20);
  EXPECT_THROW(load_checkpoint(dir), InvalidInput);
}

}  // namespace
}  // namespace gum::optim
