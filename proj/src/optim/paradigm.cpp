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

#include "gum/optim/paradigm.hpp"

#include <cmath>

#include "gum/errors.hpp"
#include "gum/optim/updates.hpp"

namespace gum::optim {

using linalg::matmul;

Projector GaloreRule::operator()(const DenseMatrix& oriented_grad,
                                 std::size_t rank, Rng& /*rng*/) const {
  return galore_projector(oriented_grad, rank);
}

Projector RandomOrthonormalRule::operator()(const DenseMatrix& oriented_grad,
                                            std::size_t rank, Rng& rng) const {
  const std::size_t m = oriented_grad.rows();
  if (rank == 0 || rank > m) {
    throw InvalidInput("random projector: rank out of range");
  }
  // Gram-Schmidt on Gaussian columns, two passes; the Gaussian matrix has
  // full column rank with probability one.
  DenseMatrix q(m, rank);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < rank; ++j) q(i, j) = rng.normal();
  }
  for (std::size_t j = 0; j < rank; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        double dot = 0.0;
        for (std::size_t i = 0; i < m; ++i) dot += q(i, k) * q(i, j);
        for (std::size_t i = 0; i < m; ++i) q(i, j) -= dot * q(i, k);
      }
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) norm += q(i, j) * q(i, j);
    norm = std::sqrt(norm);
    if (norm == 0.0) throw InvalidState("random projector: degenerate draw");
    for (std::size_t i = 0; i < m; ++i) q(i, j) /= norm;
  }
  return Projector{std::move(q)};
}

MuonBase::MuonBase(double beta, bool damped, linalg::MsignMode mode,
                   linalg::NewtonSchulzCoeffs coeffs)
    : beta_(beta), damped_(damped), mode_(mode), coeffs_(coeffs) {}

DenseMatrix MuonBase::step(DenseMatrix& state,
                           const DenseMatrix& increment) const {
  accumulate_momentum(state, increment, beta_, damped_);
  return linalg::msign(state, mode_, coeffs_);
}

MomentumSgdBase::MomentumSgdBase(double beta, bool damped)
    : beta_(beta), damped_(damped) {}

DenseMatrix MomentumSgdBase::step(DenseMatrix& state,
                                  const DenseMatrix& increment) const {
  accumulate_momentum(state, increment, beta_, damped_);
  return state;
}

BlockState unbiased_paradigm_step(BlockState state, const DenseMatrix& grad,
                                  const ProjectorRule& rule,
                                  const BaseOptimizer& base, double q,
                                  Rng& rng, const ParadigmSettings& settings) {
  const DenseMatrix g = orient(state, grad);
  const bool full = state.assignment == Assignment::kFullRank;
  if (full ? !(q > 0.0 && q <= 1.0) : !(q >= 0.0 && q < 1.0)) {
    throw InvalidState(full ? "full-rank block sampled with q = 0"
                            : "low-rank block sampled with q = 1");
  }
  if (!state.projector || settings.refresh_each_step) {
    Projector p = rule(g, settings.rank, rng);
    p.validate(kProjectorRuleTolerance);
    if (p.dim() != state.m()) {
      throw InvalidProjector("projector rule returned the wrong row count");
    }
    state.projector = std::move(p);
  } else {
    state.projector->validate(kProjectorRuleTolerance);
  }
  state.q = q;
  state.check_shapes();

  const Projector& p = *state.projector;
  if (full) {
    const DenseMatrix inc =
        full_rank_increment(g, p, q, settings.compensated_variant);
    apply_update(state, base.step(state.momentum, inc), settings.eta);
  } else {
    const DenseMatrix inc = low_rank_increment(g, p, q);
    apply_update(state, matmul(p.p, base.step(state.momentum, inc)),
                 settings.eta);
  }
  return state;
}

}  // namespace gum::optim
