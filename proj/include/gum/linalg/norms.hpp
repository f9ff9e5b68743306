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

#include "gum/linalg/dense_matrix.hpp"

namespace gum::linalg {

// Largest singular value.
double spectral_norm(const DenseMatrix& m);

// Sum of singular values (nuclear norm).
double trace_norm(const DenseMatrix& m);

// ||m||_F^2 / ||m||_op^2, clamped to [1, min(rows, cols)].
// Throws InvalidInput for the zero matrix.
double stable_rank(const DenseMatrix& m);

}  // namespace gum::linalg
