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

#include "gum/linalg/serialize.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "gum/errors.hpp"

namespace gum::linalg {
namespace {

static_assert(sizeof(double) == 8);

void put_u64(std::ostream& out, std::uint64_t x) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(x >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (in.gcount() != 8) throw InvalidInput("read_matrix: truncated stream");
  std::uint64_t x = 0;
  for (int i = 0; i < 8; ++i) x |= std::uint64_t{bytes[i]} << (8 * i);
  return x;
}

// Guards against absurd headers in corrupt files.
constexpr std::uint64_t kMaxEntries = std::uint64_t{1} << 32;

}  // namespace

void write_matrix(std::ostream& out, const DenseMatrix& m) {
  put_u64(out, m.rows());
  put_u64(out, m.cols());
  for (double x : m.data()) put_u64(out, std::bit_cast<std::uint64_t>(x));
}

DenseMatrix read_matrix(std::istream& in) {
  const std::uint64_t rows = get_u64(in);
  const std::uint64_t cols = get_u64(in);
  if (rows == 0 || cols == 0 || rows > kMaxEntries / cols) {
    throw InvalidInput("read_matrix: invalid dimensions");
  }
  std::vector<double> data(rows * cols);
  for (double& x : data) x = std::bit_cast<double>(get_u64(in));
  return DenseMatrix(rows, cols, std::move(data));
}

void save_matrix(const std::filesystem::path& path, const DenseMatrix& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("save_matrix: cannot open " + path.string());
  write_matrix(out, m);
  if (!out) throw InvalidInput("save_matrix: write failed for " + path.string());
}

DenseMatrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("load_matrix: cannot open " + path.string());
  return read_matrix(in);
}

}  // namespace gum::linalg
