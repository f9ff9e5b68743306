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

#include <algorithm>
#include <cmath>
#include <string>

#include "gum/errors.hpp"

namespace gum::optim {

MemoryCounts& MemoryCounts::operator+=(const MemoryCounts& other) {
  full_training += other.full_training;
  galore += other.galore;
  gum_expected += other.gum_expected;
  gum_worst_case += other.gum_worst_case;
  return *this;
}

MemoryCounts memory_footprint(std::size_t m, std::size_t n, std::size_t r,
                              double q) {
  if (r == 0 || r > m || m > n) {
    throw InvalidInput("memory_footprint: need 1 <= r <= m <= n, got m=" +
                       std::to_string(m) + " n=" + std::to_string(n) +
                       " r=" + std::to_string(r));
  }
  if (!(q >= 0.0 && q <= 1.0)) {
    throw InvalidInput("memory_footprint: q must be in [0, 1]");
  }
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  const double rd = static_cast<double>(r);
  MemoryCounts c;
  c.full_training = md * nd;
  c.galore = md * rd + rd * nd;
  c.gum_worst_case = md * rd + md * nd;
  c.gum_expected = (1.0 - q) * c.galore + q * c.gum_worst_case;
  return c;
}

double equal_memory_q(std::size_t m, std::size_t n, std::size_t r,
                      std::size_t r_prime) {
  if (r_prime >= m || r_prime > r || m > n) {
    throw InvalidInput("equal_memory_q: need r' <= r, r' < m <= n");
  }
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  return static_cast<double>(r - r_prime) * (md + nd) /
         (nd * static_cast<double>(m - r_prime));
}

MemoryReport memory_report(
    std::span<const std::pair<std::size_t, std::size_t>> shapes,
    std::size_t r, std::size_t r_prime, double q) {
  MemoryReport report;
  for (const auto& [rows, cols] : shapes) {
    const std::size_t m = std::min(rows, cols);
    const std::size_t n = std::max(rows, cols);
    const MemoryCounts at_r = memory_footprint(m, n, r, q);
    MemoryCounts c = memory_footprint(m, n, r_prime, q);
    c.galore = at_r.galore;
    report.shapes.emplace_back(rows, cols);
    report.per_block.push_back(c);
    report.total += c;
  }
  return report;
}

}  // namespace gum::optim
