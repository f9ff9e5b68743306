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

#include "gum/problems/problem.hpp"

#include <string>

#include "gum/errors.hpp"
#include "gum/problems/multi_block_quadratic.hpp"
#include "gum/problems/noisy_linear_regression.hpp"

namespace gum::problems {

using nlohmann::json;

std::unique_ptr<Problem> problem_from_json(const json& spec) {
  try {
    const std::string name = spec.at("name").get<std::string>();
    if (name == "noisy_linear_regression") {
      return std::make_unique<NoisyLinearRegression>(
          spec.value("n", std::size_t{20}), spec.value("r_noise", std::size_t{12}),
          spec.value("sigma", 100.0), spec.value("seed", kNlrDefaultSeed),
          parse_noise_mode(spec.value("noise", std::string("bernoulli"))));
    }
    if (name == "multi_block_quadratic") {
      std::vector<std::pair<std::size_t, std::size_t>> shapes;
      for (const json& s : spec.at("shapes")) {
        if (!s.is_array() || s.size() != 2) {
          throw InvalidInput("problem: shapes entries must be [rows, cols]");
        }
        shapes.emplace_back(s[0].get<std::size_t>(), s[1].get<std::size_t>());
      }
      return std::make_unique<MultiBlockQuadratic>(MultiBlockQuadratic::random(
          std::move(shapes), spec.value("noise_sigma", 0.0),
          spec.value("seed", std::uint64_t{0})));
    }
    throw InvalidInput("problem: unknown name '" + name + "'");
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("problem: ") + e.what());
  }
}

}  // namespace gum::problems
