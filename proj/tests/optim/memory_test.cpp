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

#include "gum/optim/memory.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "gum/errors.hpp"

namespace gum::optim {
namespace {

TEST(MemoryFootprintTest, ExactCounts) {
  const MemoryCounts c = memory_footprint(20, 30, 4, 0.25);
  EXPECT_EQ(c.full_training, 600);
  EXPECT_EQ(c.galore, 80 + 120);
  EXPECT_EQ(c.gum_worst_case, 80 + 600);
  EXPECT_DOUBLE_EQ(c.gum_expected, 0.75 * 200 + 0.25 * 680);
}

TEST(MemoryFootprintTest, QZeroIsGalore) {
  const MemoryCounts c = memory_footprint(16, 16, 3, 0.0);
  EXPECT_EQ(c.gum_expected, c.galore);
}

TEST(MemoryFootprintTest, EqualMemoryQForSquareBlocks) {
  for (std::size_t m : {8u, 20u, 64u, 100u}) {
    for (std::size_t r = 2; r <= m; r += 3) {
      for (std::size_t rp = 1; rp < r; rp += 2) {
        const double q = equal_memory_q(m, m, r, rp);
        EXPECT_DOUBLE_EQ(q, 2.0 * (r - rp) / static_cast<double>(m - rp));
        if (q > 1.0) continue;
        const double galore = memory_footprint(m, m, r, q).galore;
        const double gum = memory_footprint(m, m, rp, q).gum_expected;
        EXPECT_LE(std::abs(gum - galore), 1e-9 * galore);
      }
    }
  }
}

TEST(MemoryFootprintTest, EqualMemoryQForRectangularBlocks) {
  const double q = equal_memory_q(12, 30, 6, 2);
  EXPECT_NEAR(memory_footprint(12, 30, 2, q).gum_expected,
              memory_footprint(12, 30, 6, q).galore, 1e-9);
}

// The counterexample pairing: GaLore at rank 12 against GUM at rank 2 with
// q = 0.5 on a 20 x 20 block.
TEST(MemoryFootprintTest, CounterexamplePairing) {
  EXPECT_EQ(memory_footprint(20, 20, 12, 0.5).galore, 480);
  const MemoryCounts gum = memory_footprint(20, 20, 2, 0.5);
  EXPECT_EQ(gum.gum_expected, 260);
  EXPECT_EQ(gum.gum_worst_case, 440);
  EXPECT_GT(equal_memory_q(20, 20, 12, 2), 1.0);
}

TEST(MemoryFootprintTest, Errors) {
  EXPECT_THROW(memory_footprint(10, 8, 2, 0.5), InvalidInput);
  EXPECT_THROW(memory_footprint(8, 10, 9, 0.5), InvalidInput);
  EXPECT_THROW(memory_footprint(8, 10, 0, 0.5), InvalidInput);
  EXPECT_THROW(memory_footprint(8, 10, 2, 1.5), InvalidInput);
  EXPECT_THROW(equal_memory_q(8, 8, 2, 8), InvalidInput);
}

TEST(MemoryReportTest, OrientsAndTotals) {
  const std::vector<std::pair<std::size_t, std::size_t>> shapes = {
      {64, 64}, {64, 64}, {64, 64}};
  const MemoryReport r = memory_report(shapes, 16, 4, 1.0 / 3.0);
  ASSERT_EQ(r.per_block.size(), 3u);
  EXPECT_EQ(r.per_block[0].galore, 2 * 64 * 16);
  EXPECT_EQ(r.per_block[0].gum_worst_case, 64 * 4 + 64 * 64);
  EXPECT_DOUBLE_EQ(r.per_block[0].gum_expected,
                   (2.0 / 3.0) * (2 * 64 * 4) + (1.0 / 3.0) * (64 * 4 + 64 * 64));
  EXPECT_EQ(r.total.galore, 3 * 2048);
  EXPECT_EQ(r.total.full_training, 3 * 4096);

  const std::vector<std::pair<std::size_t, std::size_t>> tall = {{30, 10}};
  const MemoryReport t = memory_report(tall, 3, 1, 0.5);
  EXPECT_EQ(t.per_block[0].galore, 10 * 3 + 3 * 30);
}

}  // namespace
}  // namespace gum::optim
