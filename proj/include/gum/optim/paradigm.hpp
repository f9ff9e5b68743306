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
#include <string_view>

#include "gum/linalg/matrix_sign.hpp"
#include "gum/optim/block_state.hpp"
#include "gum/random.hpp"

namespace gum::optim {

// Chooses the m x r projector for a block from its oriented gradient.
class ProjectorRule {
 public:
  virtual ~ProjectorRule() = default;
  virtual std::string_view name() const = 0;
  virtual Projector operator()(const DenseMatrix& oriented_grad,
                               std::size_t rank, Rng& rng) const = 0;
};

// Top-r left singular vectors (galore_projector).
class GaloreRule final : public ProjectorRule {
 public:
  std::string_view name() const override { return "galore"; }
  Projector operator()(const DenseMatrix& oriented_grad, std::size_t rank,
                       Rng& rng) const override;
};

// Haar-distributed orthonormal columns, independent of the gradient.
class RandomOrthonormalRule final : public ProjectorRule {
 public:
  std::string_view name() const override { return "random"; }
  Projector operator()(const DenseMatrix& oriented_grad, std::size_t rank,
                       Rng& rng) const override;
};

// Stateful base optimizer applied to the (possibly projected) gradient.
// Must commute with left multiplication by an orthonormal P:
//   P * direction(state(X)) == direction(state(P X)).
class BaseOptimizer {
 public:
  virtual ~BaseOptimizer() = default;
  virtual std::string_view name() const = 0;
  // Updates `state` with `increment` and returns the update direction.
  virtual DenseMatrix step(DenseMatrix& state,
                           const DenseMatrix& increment) const = 0;
};

class MuonBase final : public BaseOptimizer {
 public:
  MuonBase(double beta, bool damped, linalg::MsignMode mode,
           linalg::NewtonSchulzCoeffs coeffs = {});
  std::string_view name() const override { return "muon"; }
  DenseMatrix step(DenseMatrix& state,
                   const DenseMatrix& increment) const override;

 private:
  double beta_;
  bool damped_;
  linalg::MsignMode mode_;
  linalg::NewtonSchulzCoeffs coeffs_;
};

// Heavy-ball momentum; direction is the buffer itself.
class MomentumSgdBase final : public BaseOptimizer {
 public:
  MomentumSgdBase(double beta, bool damped);
  std::string_view name() const override { return "momentum_sgd"; }
  DenseMatrix step(DenseMatrix& state,
                   const DenseMatrix& increment) const override;

 private:
  double beta_;
  bool damped_;
};

struct ParadigmSettings {
  double eta = 0.01;
  std::size_t rank = 1;
  bool compensated_variant = false;
  // Draw a new projector every call instead of only when none is present.
  bool refresh_each_step = false;
};

// One step of the unbiased projected paradigm. The block's assignment
// selects the branch:
//   full-rank: state <- base(state, (G - P P^T G) / q),  W -= eta * dir
//   low-rank:  state <- base(state, P^T G / (1 - q)),    W -= eta * P dir
// A projector is drawn from `rule` when the block has none or when
// refresh_each_step is set. Throws InvalidProjector when the projector fails
// Property I at kProjectorRuleTolerance and InvalidState when the
// assignment is impossible for q.
BlockState unbiased_paradigm_step(BlockState state, const DenseMatrix& grad,
                                  const ProjectorRule& rule,
                                  const BaseOptimizer& base, double q,
                                  Rng& rng, const ParadigmSettings& settings);

}  // namespace gum::optim
