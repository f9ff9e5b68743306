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

#include "gum/metrics/trace.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "gum/errors.hpp"

namespace gum::metrics {
namespace {

double parse_double(const std::string& s, std::size_t line) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(x)) {
    throw InvalidInput("trace line " + std::to_string(line) + ": bad number '" +
                       s + "'");
  }
  return x;
}

std::size_t parse_size(const std::string& s, std::size_t line) {
  std::size_t x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidInput("trace line " + std::to_string(line) +
                       ": bad integer '" + s + "'");
  }
  return x;
}

std::optional<double> parse_optional(const std::string& s, std::size_t line) {
  if (s.empty()) return std::nullopt;
  return parse_double(s, line);
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace) {
    out << r.step << ',' << format_double(r.loss) << ','
        << format_double(r.grad_trace_norm) << ','
        << (r.chi_residual ? format_double(*r.chi_residual) : "") << ','
        << (r.stable_rank_mean ? format_double(*r.stable_rank_mean) : "")
        << ',' << r.memory_scalars << ',' << r.assignment_bits << '\n';
  }
}

std::vector<TraceRecord> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != kTraceHeader) {
    throw InvalidInput("trace: missing or unexpected header");
  }
  std::vector<TraceRecord> trace;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 7) {
      throw InvalidInput("trace line " + std::to_string(line_no) +
                         ": expected 7 fields");
    }
    TraceRecord r;
    r.step = parse_size(f[0], line_no);
    r.loss = parse_double(f[1], line_no);
    r.grad_trace_norm = parse_double(f[2], line_no);
    r.chi_residual = parse_optional(f[3], line_no);
    r.stable_rank_mean = parse_optional(f[4], line_no);
    r.memory_scalars = parse_size(f[5], line_no);
    r.assignment_bits = f[6];
    if (r.assignment_bits.find_first_not_of("01") != std::string::npos) {
      throw InvalidInput("trace line " + std::to_string(line_no) +
                         ": bad assignment bits");
    }
    if (!trace.empty() && r.step <= trace.back().step) {
      throw InvalidInput("trace line " + std::to_string(line_no) +
                         ": step not increasing");
    }
    trace.push_back(std::move(r));
  }
  return trace;
}

}  // namespace gum::metrics
