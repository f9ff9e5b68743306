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

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gum/linalg/dense_matrix.hpp"
#include "gum/optim/gradient_oracle.hpp"

namespace gum::problems {

using linalg::DenseMatrix;

// A stochastic objective over one or more matrix blocks. Immutable after
// construction; gradient draws take their randomness from the caller.
class Problem : public optim::GradientOracle {
 public:
  virtual std::string name() const = 0;
  virtual double loss(std::span<const DenseMatrix> weights) const = 0;
  // Noise-free gradient.
  virtual std::vector<DenseMatrix> true_gradients(
      std::span<const DenseMatrix> weights) const = 0;
  // Minimum of the loss when known in closed form.
  virtual std::optional<double> optimal_value() const = 0;
  virtual std::vector<DenseMatrix> initial_point() const = 0;
  virtual nlohmann::json to_json() const = 0;
};

// Builds a problem from its JSON description; see each problem's to_json.
// Throws InvalidInput on unknown names or bad parameters.
std::unique_ptr<Problem> problem_from_json(const nlohmann::json& spec);

}  // namespace gum::problems
