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
#include <span>
#include <utility>
#include <vector>

namespace gum::optim {

// Optimizer-state scalar counts for one m x n block (m <= n).
struct MemoryCounts {
  double full_training = 0;   // m n
  double galore = 0;          // m r + r n
  double gum_expected = 0;    // (1 - q)(m r + r n) + q (m r + m n)
  double gum_worst_case = 0;  // m r + m n

  MemoryCounts& operator+=(const MemoryCounts& other);
};

// Counts at a single rank r. Throws InvalidInput unless
// 1 <= r <= m <= n and q is in [0, 1].
MemoryCounts memory_footprint(std::size_t m, std::size_t n, std::size_t r,
                              double q);

// q at which GUM at rank r' has the same expected state as GaLore at rank r:
//   q = (r - r')(m + n) / (n (m - r')),  = 2 (r - r') / (m - r') for m = n.
// Can exceed 1, in which case no q reaches GaLore's count.
double equal_memory_q(std::size_t m, std::size_t n, std::size_t r,
                      std::size_t r_prime);

struct MemoryReport {
  std::vector<std::pair<std::size_t, std::size_t>> shapes;
  // galore at rank r; gum_* at rank r'; full_training rank free.
  std::vector<MemoryCounts> per_block;
  MemoryCounts total;
};

// Blocks may be tall; each is oriented so m <= n before counting.
MemoryReport memory_report(
    std::span<const std::pair<std::size_t, std::size_t>> shapes,
    std::size_t r, std::size_t r_prime, double q);

}  // namespace gum::optim
