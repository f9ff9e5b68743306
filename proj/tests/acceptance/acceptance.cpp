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

// Acceptance checks. Prints one PASS/FAIL line per check and exits
// nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gum/harness/config.hpp"
#include "gum/harness/runner.hpp"
#include "gum/harness/verification.hpp"
#include "gum/linalg/matrix_sign.hpp"
#include "gum/linalg/svd.hpp"
#include "gum/metrics/diagnostics.hpp"
#include "gum/metrics/trace.hpp"
#include "gum/optim/memory.hpp"
#include "gum/optim/updates.hpp"
#include "gum/problems/noisy_linear_regression.hpp"
#include "support/matrices.hpp"

namespace {

using namespace gum;
using harness::ExperimentConfig;
using harness::RunResult;
using linalg::DenseMatrix;
using nlohmann::json;

constexpr std::size_t kThreadsA = 1;
constexpr std::size_t kThreadsB = 4;

// Counterexample
constexpr std::size_t kCounterexampleSteps = 2000;
constexpr double kGaloreFloor = 0.5;
constexpr double kGumToMuonRatio = 2.0;
constexpr double kCounterexampleSeconds = 60.0;
// Unbiasedness
constexpr std::size_t kUnbiasedTriples = 20;
constexpr std::size_t kUnbiasedDraws = 100000;
constexpr double kUnbiasedSeconds = 30.0;
// Commutativity
constexpr std::size_t kCommutePairs = 100;
constexpr double kCommuteTolerance = 1e-9;
// Reduction identities
constexpr std::size_t kReductionSteps = 200;
// Memory algebra
constexpr std::size_t kMemoryTriples = 50;
constexpr double kMemoryTolerance = 1.0;
// msign oracle
constexpr std::size_t kMsignCases = 100;
constexpr double kExactTolerance = 1e-9;
constexpr double kNewtonSchulzFactor = 0.05;
// Adversarial spectrum
constexpr double kSpectrumTolerance = 1e-8;
// Gradient-norm decay
constexpr std::size_t kDecayShort = 1000;
constexpr std::size_t kDecayLong = 4000;
// Determinism: compare_traces uses 1e-12 relative per field.

const std::vector<std::uint64_t> kSeeds = {1, 2, 3};

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const Outcome& o) {
  std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name,
              o.detail.c_str());
  std::fflush(stdout);
  failures += !o.pass;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

ExperimentConfig nlr_config(const std::string& method, const std::string& noise) {
  json opt = {{"period", 50}, {"momentum", 0.9}, {"step_size", 0.01},
              {"msign", "exact"}};
  if (method == "gum") {
    opt["rank"] = problems::kNlrGumRank;
    opt["q"] = problems::kNlrGumQ;
  } else if (method == "galore_muon") {
    opt["rank"] = problems::kNlrGaloreRank;
  }
  return harness::parse_experiment_config(
      {{"problem",
        {{"name", "noisy_linear_regression"},
         {"n", 20},
         {"r_noise", 12},
         {"sigma", 100},
         {"seed", problems::kNlrDefaultSeed},
         {"noise", noise}}},
       {"method", method},
       {"optimizer", opt},
       {"total_steps", kCounterexampleSteps},
       {"trace", {{"every", 1}, {"chi_every", 20}}}});
}

json mbq_problem(double sigma) {
  return {{"name", "multi_block_quadratic"},
          {"shapes", {{16, 24}, {24, 16}, {20, 20}, {12, 32}}},
          {"noise_sigma", sigma},
          {"seed", 7}};
}

ExperimentConfig mbq_config(const std::string& method, const json& opt,
                            std::size_t steps, std::size_t every) {
  return harness::parse_experiment_config(
      {{"problem", mbq_problem(0.1)},
       {"method", method},
       {"optimizer", opt},
       {"total_steps", steps},
       {"trace", {{"every", every}, {"chi_every", 50}}}});
}

struct Run {
  std::string label;
  ExperimentConfig cfg;
  std::uint64_t seed;
  RunResult result;
};

std::vector<Run> recorded;

RunResult run(const std::string& label, const ExperimentConfig& cfg,
              std::uint64_t seed) {
  const auto problem = harness::make_problem(cfg);
  RunResult r = harness::run_experiment(cfg, *problem, seed, {.threads = kThreadsA});
  recorded.push_back({label, cfg, seed, r});
  return r;
}

Outcome counterexample() {
  const auto t0 = std::chrono::steady_clock::now();
  bool galore_ok = true;
  bool ratio_ok = true;
  std::ostringstream d;
  for (std::uint64_t seed : kSeeds) {
    const RunResult galore = run("nlr galore_muon", nlr_config("galore_muon", "bernoulli"), seed);
    const RunResult gum = run("nlr gum", nlr_config("gum", "bernoulli"), seed);
    const RunResult muon = run("nlr muon", nlr_config("muon", "bernoulli"), seed);
    const double initial = galore.trace.front().loss;
    double galore_min = initial;
    for (const auto& row : galore.trace) galore_min = std::min(galore_min, row.loss);
    const bool complete = !galore.blew_up && !gum.blew_up && !muon.blew_up;
    const double g = gum.trace.back().loss;
    const double m = muon.trace.back().loss;
    galore_ok = galore_ok && complete && galore_min > kGaloreFloor * initial;
    ratio_ok = ratio_ok && complete && g <= kGumToMuonRatio * m;
    d << "seed " << seed << " galore min/initial " << fmt(galore_min / initial)
      << ", gum " << fmt(g) << " vs muon " << fmt(m) << "; ";
  }
  const double elapsed = seconds_since(t0);
  // Same runs with symmetric noise, for reference only.
  double rademacher_galore = 0;
  for (std::uint64_t seed : kSeeds) {
    const auto cfg = nlr_config("galore_muon", "rademacher");
    const auto problem = harness::make_problem(cfg);
    const RunResult r = harness::run_experiment(cfg, *problem, seed);
    double lo = r.trace.front().loss;
    for (const auto& row : r.trace) lo = std::min(lo, row.loss);
    rademacher_galore = std::max(rademacher_galore, lo / r.trace.front().loss);
  }
  d << "galore clause " << (galore_ok ? "holds" : "fails") << ", ratio clause "
    << (ratio_ok ? "holds" : "fails") << ", " << fmt(elapsed)
    << " s; with +-1 noise galore min/initial " << fmt(rademacher_galore);
  return {galore_ok && ratio_ok && elapsed < kCounterexampleSeconds, d.str()};
}

Outcome unbiasedness() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = harness::verify_unbiased(kUnbiasedTriples, kUnbiasedDraws, 2024);
  const double elapsed = seconds_since(t0);
  std::size_t passed = 0;
  double worst = 0;
  for (const auto& t : rep.trials) {
    passed += t.pass;
    worst = std::max(worst, t.error / t.standard_error);
  }
  std::ostringstream d;
  d << passed << "/" << rep.trials.size() << " within "
    << rep.tolerance_in_standard_errors << " SE (worst " << fmt(worst)
    << " SE), " << fmt(elapsed) << " s";
  return {rep.all_pass && rep.trials.size() == 2 * kUnbiasedTriples &&
              elapsed < kUnbiasedSeconds,
          d.str()};
}

Outcome commutativity() {
  Rng rng(31);
  double worst = 0;
  const linalg::NewtonSchulzCoeffs presets[] = {
      linalg::NewtonSchulzCoeffs::classic_quintic(),
      linalg::NewtonSchulzCoeffs::muon_quintic()};
  for (std::size_t i = 0; i < kCommutePairs; ++i) {
    const std::size_t k = rng.uniform_int(2, 8);
    const std::size_t m = k + rng.uniform_int(0, 10);
    const std::size_t n = rng.uniform_int(2, 12);
    const DenseMatrix p = testing::random_orthonormal(m, k, rng);
    const DenseMatrix x = testing::gaussian(k, n, rng);
    for (const auto& c : presets) {
      const DenseMatrix lhs = linalg::newton_schulz(linalg::matmul(p, x), c);
      const DenseMatrix rhs = linalg::matmul(p, linalg::newton_schulz(x, c));
      worst = std::max(worst, linalg::frobenius_norm(lhs - rhs) /
                                  linalg::frobenius_norm(rhs));
    }
  }
  return {worst <= kCommuteTolerance,
          "worst relative discrepancy " + fmt(worst) + " over " +
              std::to_string(kCommutePairs) + " pairs, 2 coefficient sets"};
}

bool same_trajectory(const RunResult& a, const RunResult& b) {
  if (a.trace.size() != b.trace.size() || a.blew_up || b.blew_up) return false;
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    if (a.trace[i].step != b.trace[i].step || a.trace[i].loss != b.trace[i].loss ||
        a.trace[i].grad_trace_norm != b.trace[i].grad_trace_norm ||
        a.trace[i].stable_rank_mean != b.trace[i].stable_rank_mean) {
      return false;
    }
  }
  for (std::size_t l = 0; l < a.final_blocks.size(); ++l) {
    if (a.final_blocks[l].weights != b.final_blocks[l].weights) return false;
  }
  return true;
}

Outcome reductions() {
  const json base = {{"period", 10}, {"rank", 4}, {"step_size", 0.02}};
  json none = base;
  none["full_rank_layers"] = 0;
  json all = base;
  all["full_rank_layers"] = 4;
  all["compensated_variant"] = true;
  json restart = base;
  restart["restart_momentum"] = true;
  json single_period = all;
  single_period["period"] = kReductionSteps;
  json plain = base;
  plain["period"] = kReductionSteps;

  bool galore_ok = true;
  bool muon_ok = true;
  for (std::uint64_t seed : kSeeds) {
    const RunResult g0 = run("mbq gum gamma=0", mbq_config("gum", none, kReductionSteps, 1), seed);
    const RunResult gm = run("mbq galore_muon", mbq_config("galore_muon", base, kReductionSteps, 1), seed);
    galore_ok = galore_ok && same_trajectory(g0, gm);
    for (std::size_t i = 0; i < g0.trace.size() && galore_ok; ++i) {
      galore_ok = g0.trace[i].chi_residual == gm.trace[i].chi_residual &&
                  g0.trace[i].memory_scalars == gm.trace[i].memory_scalars;
    }
    const RunResult gn = run("mbq gum gamma=N", mbq_config("gum", all, kReductionSteps, 1), seed);
    const RunResult mr = run("mbq muon restart", mbq_config("muon", restart, kReductionSteps, 1), seed);
    const RunResult g1 = run("mbq gum one period", mbq_config("gum", single_period, kReductionSteps, 1), seed);
    const RunResult mp = run("mbq muon", mbq_config("muon", plain, kReductionSteps, 1), seed);
    muon_ok = muon_ok && same_trajectory(gn, mr) && same_trajectory(g1, mp);
  }
  return {galore_ok && muon_ok,
          std::string("gamma=0 vs galore_muon ") + (galore_ok ? "identical" : "differs") +
              ", gamma=N compensated vs muon " + (muon_ok ? "identical" : "differs") +
              ", " + std::to_string(kReductionSteps) + " steps x 3 seeds"};
}

Outcome memory_algebra() {
  Rng rng(17);
  double worst = 0;
  std::size_t tried = 0;
  while (tried < kMemoryTriples) {
    const std::size_t m = rng.uniform_int(4, 4096);
    const std::size_t r = rng.uniform_int(2, m);
    const std::size_t rp = rng.uniform_int(1, r - 1);
    const double q = 2.0 * static_cast<double>(r - rp) / static_cast<double>(m - rp);
    if (q > 1.0) continue;
    ++tried;
    const double galore = optim::memory_footprint(m, m, r, 0.0).galore;
    const double gum = optim::memory_footprint(m, m, rp, q).gum_expected;
    worst = std::max(worst, std::abs(gum - galore));
  }
  return {worst <= kMemoryTolerance,
          "worst |gum_expected - galore| " + fmt(worst) + " scalars over " +
              std::to_string(kMemoryTriples) + " triples"};
}

Outcome msign_oracle() {
  Rng rng(61);
  double worst_exact = 0;
  double worst_ratio = 0;
  for (std::size_t i = 0; i < kMsignCases; ++i) {
    const std::size_t rows = rng.uniform_int(2, 12);
    const std::size_t cols = rng.uniform_int(2, 12);
    const std::size_t k = std::min(rows, cols);
    const DenseMatrix g = testing::gaussian(rows, cols, rng);
    for (double s : linalg::svd_thin(linalg::msign_exact(g)).s) {
      worst_exact = std::max(worst_exact, std::abs(s - 1.0));
    }
    const double top = std::exp(rng.uniform() * 4.0 - 2.0);
    std::vector<double> spectrum(k);
    for (std::size_t j = 0; j < k; ++j) {
      spectrum[j] = j == 0 ? top : j + 1 == k ? top / 10 : top * std::pow(10.0, -rng.uniform());
    }
    std::sort(spectrum.rbegin(), spectrum.rend());
    const DenseMatrix c = testing::with_singular_values(rows, cols, spectrum, rng);
    const double err = linalg::frobenius_norm(linalg::newton_schulz(c) - linalg::msign_exact(c));
    worst_ratio = std::max(worst_ratio, err / (kNewtonSchulzFactor * std::sqrt(double(k))));
  }
  return {worst_exact <= kExactTolerance && worst_ratio <= 1.0,
          "exact: worst |s - 1| " + fmt(worst_exact) +
              "; newton_schulz: worst error / bound " + fmt(worst_ratio) + " over " +
              std::to_string(kMsignCases) + " cases"};
}

Outcome adversarial_spectrum() {
  const problems::NoisyLinearRegression p = problems::nlr_reference_instance();
  const DenseMatrix x0 = DenseMatrix::zeros(p.n(), p.n());
  const DenseMatrix stochastic = problems::nlr_grad(p, x0, 1.0);
  const DenseMatrix truth = problems::nlr_true_grad(p, x0);
  const optim::Projector proj = optim::galore_projector(stochastic, problems::kNlrGaloreRank);
  const DenseMatrix captured =
      linalg::matmul(proj.p, linalg::matmul_tn(proj.p, truth));
  const double ratio = linalg::frobenius_norm(captured) / linalg::frobenius_norm(truth);
  return {ratio <= kSpectrumTolerance,
          "||P P^T grad f(0)|| / ||grad f(0)|| = " + fmt(ratio)};
}

Outcome gradient_decay() {
  const json opt = {{"period", 25}, {"rank", 4}, {"full_rank_layers", 1},
                    {"momentum", 0.9}, {"step_size", 0.02},
                    {"step_schedule", {{"inverse_sqrt", 500}}}};
  bool ok = true;
  std::ostringstream d;
  for (std::uint64_t seed : kSeeds) {
    const RunResult r = run("mbq gum long", mbq_config("gum", opt, kDecayLong, 10), seed);
    double at_short = INFINITY;
    double at_long = INFINITY;
    for (const auto& row : r.trace) {
      if (row.step <= kDecayShort) at_short = std::min(at_short, row.grad_trace_norm);
      at_long = std::min(at_long, row.grad_trace_norm);
    }
    ok = ok && !r.blew_up && r.steps_completed == kDecayLong && at_long < at_short;
    d << "seed " << seed << " " << fmt(at_short) << " -> " << fmt(at_long) << "; ";
  }
  d << "running min at T=" << kDecayShort << " -> T=" << kDecayLong;
  return {ok, d.str()};
}

std::string csv(const std::vector<metrics::TraceRecord>& trace) {
  std::ostringstream out;
  metrics::write_trace_csv(out, trace);
  return out.str();
}

Outcome determinism() {
  std::size_t matched = 0;
  std::string first_bad;
  for (const Run& r : recorded) {
    const auto problem = harness::make_problem(r.cfg);
    const RunResult again =
        harness::run_experiment(r.cfg, *problem, r.seed, {.threads = kThreadsB});
    const bool ok = !harness::compare_traces(r.result.trace, again.trace) &&
                    csv(r.result.trace) == csv(again.trace);
    matched += ok;
    if (!ok && first_bad.empty()) {
      first_bad = r.label + " seed " + std::to_string(r.seed);
    }
  }
  std::string d = std::to_string(matched) + "/" + std::to_string(recorded.size()) +
                  " runs identical at " + std::to_string(kThreadsA) + " and " +
                  std::to_string(kThreadsB) + " threads";
  if (!first_bad.empty()) d += "; first difference: " + first_bad;
  return {matched == recorded.size() && !recorded.empty(), d};
}

}  // namespace

int main() {
  report(1, "counterexample reproduction", counterexample());
  report(2, "unbiasedness", unbiasedness());
  report(3, "commutativity", commutativity());
  report(4, "reduction identities", reductions());
  report(5, "memory algebra", memory_algebra());
  report(6, "exact-msign oracle", msign_oracle());
  report(7, "adversarial spectrum", adversarial_spectrum());
  report(8, "gradient-norm decay", gradient_decay());
  report(9, "determinism", determinism());
  return failures == 0 ? 0 : 1;
}
