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
#include <vector>

#include "gum/optim/block_state.hpp"
#include "gum/optim/config.hpp"
#include "gum/random.hpp"

namespace gum::optim {

// Full-parameter Muon:
//   M <- beta M + G;  W <- W - eta msign(M)
// Assignment and projector are ignored. Throws InvalidInput on a shape
// mismatch.
BlockState muon_step(BlockState state, const DenseMatrix& grad,
                     const GumConfig& cfg, std::size_t step = 0);

// Top-r left singular vectors of `grad`. Throws InvalidInput if r is zero
// or exceeds min(rows, cols).
Projector galore_projector(const DenseMatrix& grad, std::size_t r);

// Independent Bernoulli(q) draw per block.
std::vector<Assignment> sample_assignments(std::size_t n_blocks, double q,
                                           Rng& rng);
// Independent Bernoulli(q_l) draw for block l.
std::vector<Assignment> sample_assignments(std::span<const double> q_per_block,
                                           Rng& rng);
// Exactly `gamma` full-rank blocks chosen uniformly without replacement.
std::vector<Assignment> sample_exactly(std::size_t n_blocks, std::size_t gamma,
                                       Rng& rng);

// Momentum increments, oriented frame. Low-rank: P^T G / (1 - q), r x n.
DenseMatrix low_rank_increment(const DenseMatrix& oriented_grad,
                               const Projector& projector, double q);
// Full-rank: (G - P P^T G) / q, or (G - (1 - q) P P^T G) / q when
// `compensated`.
DenseMatrix full_rank_increment(const DenseMatrix& oriented_grad,
                                const Projector& projector, double q,
                                bool compensated);

// Full-space gradient estimate whose Muon trajectory is the step's
// trajectory (oriented frame, m x n):
//   full-rank: full_rank_increment(G)
//   low-rank:  P P^T G / (1 - q), or P P^T G when `compensated`.
// Within a period a block keeps one branch and its momentum restarts, and
// msign is scale invariant, so a per-branch constant factor does not change
// the iterates; with it, the estimate has mean G in both variants.
DenseMatrix effective_gradient(const DenseMatrix& oriented_grad,
                               const Projector& projector, double q,
                               Assignment assignment, bool compensated);

// Low-rank GUM update:
//   R <- beta R + P^T G / (1 - q);  W <- W - eta P msign(R)
// Throws InvalidState without a projector or with a full-rank assignment.
BlockState gum_low_rank_step(BlockState state, const DenseMatrix& grad,
                             const GumConfig& cfg, std::size_t step = 0);

// Compensated full-rank GUM update:
//   R <- beta R + (G - P P^T G) / q;  W <- W - eta msign(R)
// Throws InvalidState for q == 0, a missing projector, or a low-rank
// assignment.
BlockState gum_full_rank_step(BlockState state, const DenseMatrix& grad,
                              const GumConfig& cfg, std::size_t step = 0);

// Period boundary for one block: installs the projector and assignment and
// restarts the momentum in the matching shape.
BlockState begin_period(BlockState state, Projector projector,
                        Assignment assignment, double q,
                        std::size_t period_index);

}  // namespace gum::optim
