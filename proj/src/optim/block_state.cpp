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

#include "gum/optim/block_state.hpp"

#include <algorithm>
#include <string>

#include "gum/errors.hpp"

namespace gum::optim {

using linalg::matmul_tn;

double Projector::orthonormality_error() const {
  DenseMatrix gram = matmul_tn(p, p);
  for (std::size_t i = 0; i < gram.rows(); ++i) gram(i, i) -= 1.0;
  return linalg::frobenius_norm(gram);
}

void Projector::validate(double tolerance) const {
  if (!p.all_finite()) throw InvalidProjector("projector has non-finite entries");
  const double err = orthonormality_error();
  if (!(err <= tolerance)) {
    throw InvalidProjector("projector columns not orthonormal: ||P^T P - I||_F = " +
                           std::to_string(err));
  }
}

BlockState BlockState::initial(DenseMatrix weights) {
  const std::size_t m = std::min(weights.rows(), weights.cols());
  const std::size_t n = std::max(weights.rows(), weights.cols());
  BlockState s{std::move(weights), DenseMatrix(m, n), std::nullopt,
               Assignment::kFullRank, 1.0, 0};
  return s;
}

std::size_t BlockState::m() const {
  return std::min(weights.rows(), weights.cols());
}

std::size_t BlockState::n() const {
  return std::max(weights.rows(), weights.cols());
}

std::size_t BlockState::state_scalars() const {
  return momentum.size() + (projector ? projector->p.size() : 0);
}

void BlockState::check_shapes() const {
  if (projector && projector->dim() != m()) {
    throw InvalidState("projector has " + std::to_string(projector->dim()) +
                       " rows, block needs " + std::to_string(m()));
  }
  const std::size_t want_rows =
      assignment == Assignment::kLowRank
          ? (projector ? projector->rank() : 0)
          : m();
  if (assignment == Assignment::kLowRank && !projector) {
    throw InvalidState("low-rank block without projector");
  }
  if (momentum.rows() != want_rows || momentum.cols() != n()) {
    throw InvalidState("momentum shape does not match assignment");
  }
}

DenseMatrix orient(const BlockState& state, const DenseMatrix& grad) {
  linalg::require_same_shape(state.weights, grad, "orient");
  return state.transposed() ? grad.transpose() : grad;
}

void apply_update(BlockState& state, const DenseMatrix& direction, double eta) {
  DenseMatrix& w = state.weights;
  if (state.transposed()) {
    if (direction.rows() != w.cols() || direction.cols() != w.rows()) {
      throw InvalidInput("apply_update: direction shape mismatch");
    }
    for (std::size_t i = 0; i < w.rows(); ++i) {
      for (std::size_t j = 0; j < w.cols(); ++j) w(i, j) -= eta * direction(j, i);
    }
  } else {
    linalg::require_same_shape(w, direction, "apply_update");
    auto wd = w.data();
    auto dd = direction.data();
    for (std::size_t i = 0; i < wd.size(); ++i) wd[i] -= eta * dd[i];
  }
}

void accumulate_momentum(DenseMatrix& momentum, const DenseMatrix& increment,
                         double beta, bool damped) {
  linalg::require_same_shape(momentum, increment, "accumulate_momentum");
  const double scale = damped ? 1.0 - beta : 1.0;
  auto md = momentum.data();
  auto id = increment.data();
  for (std::size_t i = 0; i < md.size(); ++i) md[i] = beta * md[i] + scale * id[i];
}

}  // namespace gum::optim
