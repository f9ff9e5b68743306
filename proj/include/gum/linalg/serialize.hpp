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

#include <filesystem>
#include <iosfwd>

#include "gum/linalg/dense_matrix.hpp"

namespace gum::linalg {

// Binary layout: rows and cols as 8-byte little-endian unsigned integers,
// followed by rows * cols IEEE-754 doubles, little-endian, row-major.
void write_matrix(std::ostream& out, const DenseMatrix& m);
DenseMatrix read_matrix(std::istream& in);

void save_matrix(const std::filesystem::path& path, const DenseMatrix& m);
DenseMatrix load_matrix(const std::filesystem::path& path);

}  // namespace gum::linalg
