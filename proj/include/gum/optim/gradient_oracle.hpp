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

#include <span>
#include <utility>
#include <vector>

#include "gum/linalg/dense_matrix.hpp"
#include "gum/random.hpp"

namespace gum::optim {

// Stochastic gradient of every block at the given weights. One call is one
// draw: implementations consume `rng` and nothing else.
class GradientOracle {
 public:
  virtual ~GradientOracle() = default;

  virtual std::vector<linalg::DenseMatrix> gradients(
      std::span<const linalg::DenseMatrix> weights, Rng& rng) const = 0;

  virtual std::vector<std::pair<std::size_t, std::size_t>> block_shapes()
      const = 0;
};

}  // namespace gum::optim
