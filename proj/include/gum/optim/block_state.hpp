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
#include <optional>

#include "gum/linalg/dense_matrix.hpp"

namespace gum::optim {

using linalg::DenseMatrix;

enum class Assignment { kLowRank, kFullRank };

// Columns must be orthonormal to this tolerance for a projector to be
// accepted from the GaLore rule.
inline constexpr double kProjectorTolerance = 1e-8;
// Looser bound applied to externally supplied projector rules.
inline constexpr double kProjectorRuleTolerance = 1e-6;

// m x r matrix with orthonormal columns.
struct Projector {
  DenseMatrix p;

  std::size_t dim() const { return p.rows(); }
  std::size_t rank() const { return p.cols(); }
  // ||P^T P - I||_F
  double orthonormality_error() const;
  // Throws InvalidProjector when orthonormality_error() > tolerance.
  void validate(double tolerance = kProjectorTolerance) const;
};

// Optimizer state of one parameter block.
//
// Weights keep the block's own shape. Everything else lives in the oriented
// frame where the block is m x n with m <= n (the transpose when the block
// is tall): the projector is m x r, the momentum r x n for a low-rank block
// and m x n for a full-rank one.
struct BlockState {
  DenseMatrix weights;
  DenseMatrix momentum;
  std::optional<Projector> projector;
  Assignment assignment = Assignment::kFullRank;
  // Full-rank probability for the current period.
  double q = 1.0;
  std::size_t period_index = 0;

  // Full-rank state with zero momentum and no projector.
  static BlockState initial(DenseMatrix weights);

  bool transposed() const { return weights.rows() > weights.cols(); }
  // Oriented dimensions.
  std::size_t m() const;
  std::size_t n() const;
  // Scalars held by the optimizer (momentum plus projector).
  std::size_t state_scalars() const;
  // Throws InvalidState if momentum/projector shapes disagree with the
  // assignment.
  void check_shapes() const;
};

// Gradient in the block's oriented frame.
DenseMatrix orient(const BlockState& state, const DenseMatrix& grad);

// weights -= eta * direction, with `direction` in the oriented frame.
void apply_update(BlockState& state, const DenseMatrix& direction, double eta);

// momentum = beta * momentum + increment, or with (1 - beta) on the
// increment when damped. All methods share this so reductions between them
// are exact.
void accumulate_momentum(DenseMatrix& momentum, const DenseMatrix& increment,
                         double beta, bool damped);

}  // namespace gum::optim
