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

#include "gum/harness/runner.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gum/errors.hpp"
#include "gum/metrics/diagnostics.hpp"
#include "gum/optim/checkpoint.hpp"
#include "gum/optim/paradigm.hpp"

namespace gum::harness {

using linalg::DenseMatrix;
using metrics::TraceRecord;

namespace {

struct BlowUp {
  std::size_t step;
};

optim::RngStreams streams_for(const ExperimentConfig& cfg, std::uint64_t seed) {
  optim::RngStreams s = optim::RngStreams::from_seed(seed);
  if (cfg.seeds.gradient) s.gradient = Rng(*cfg.seeds.gradient);
  if (cfg.seeds.assignment) s.assignment = Rng(*cfg.seeds.assignment);
  return s;
}

bool has_assignments(optim::Method m) {
  return m == optim::Method::kGum || m == optim::Method::kUnbiasedGeneric;
}

std::string assignment_bits(std::span<const optim::BlockState> blocks) {
  std::string bits;
  for (const auto& b : blocks) {
    bits += b.assignment == optim::Assignment::kFullRank ? '1' : '0';
  }
  return bits;
}

std::optional<double> projection_residual(
    std::span<const DenseMatrix> grads,
    std::span<const optim::BlockState> blocks) {
  std::vector<DenseMatrix> unprojected;
  std::vector<DenseMatrix> projected;
  for (std::size_t l = 0; l < blocks.size(); ++l) {
    if (!blocks[l].projector) return std::nullopt;
    const DenseMatrix& p = blocks[l].projector->p;
    DenseMatrix g = optim::orient(blocks[l], grads[l]);
    projected.push_back(linalg::matmul(p, linalg::matmul_tn(p, g)));
    unprojected.push_back(std::move(g));
  }
  double total = 0;
  for (const auto& g : unprojected) total += linalg::frobenius_norm_squared(g);
  if (total == 0) return std::nullopt;
  return metrics::chi_residual(unprojected, projected);
}

class TraceBuilder {
 public:
  explicit TraceBuilder(const problems::Problem& problem)
      : problem_(problem),
        f_star_(problem.optimal_value().value_or(0.0)) {}

  double shifted_loss(std::span<const DenseMatrix> w) const {
    return problem_.loss(w) - f_star_;
  }

  TraceRecord record(std::size_t step, double loss,
                     std::span<const optim::BlockState> blocks,
                     std::size_t memory, std::optional<double> chi,
                     bool bits) const {
    std::vector<DenseMatrix> w;
    w.reserve(blocks.size());
    for (const auto& b : blocks) w.push_back(b.weights);
    TraceRecord r;
    r.step = step;
    r.loss = loss;
    r.grad_trace_norm = metrics::trace_norm_sum(problem_.true_gradients(w));
    r.chi_residual = chi;
    const metrics::StableRankSummary sr = metrics::stable_rank_trace(blocks);
    r.stable_ranks = sr.per_block;
    r.stable_rank_mean = sr.mean;
    r.memory_scalars = memory;
    if (bits) r.assignment_bits = assignment_bits(blocks);
    return r;
  }

 private:
  const problems::Problem& problem_;
  double f_star_;
};

bool diverged(double loss) { return !std::isfinite(loss) || loss > kBlowUpLoss; }

}  // namespace

std::unique_ptr<problems::Problem> make_problem(const ExperimentConfig& cfg) {
  return problems::problem_from_json(cfg.problem);
}

std::unique_ptr<optim::Optimizer> make_experiment_optimizer(
    const ExperimentConfig& cfg, const problems::Problem& problem,
    std::size_t threads) {
  const optim::GumConfig o = resolved_optimizer(cfg);
  std::vector<DenseMatrix> w0 = problem.initial_point();
  switch (cfg.method) {
    case optim::Method::kMuon:
      return std::make_unique<optim::MuonOptimizer>(std::move(w0), o, threads,
                                                    cfg.restart_momentum);
    case optim::Method::kUnbiasedGeneric: {
      std::unique_ptr<optim::ProjectorRule> rule;
      if (cfg.projector_rule == "random") {
        rule = std::make_unique<optim::RandomOrthonormalRule>();
      } else {
        rule = std::make_unique<optim::GaloreRule>();
      }
      std::unique_ptr<optim::BaseOptimizer> base;
      if (cfg.base_optimizer == "momentum_sgd") {
        base = std::make_unique<optim::MomentumSgdBase>(o.momentum, o.use_damping);
      } else {
        base = std::make_unique<optim::MuonBase>(o.momentum, o.use_damping,
                                                 o.msign_mode, o.newton_schulz);
      }
      return std::make_unique<optim::GenericUnbiasedOptimizer>(
          std::move(w0), o, threads, std::move(rule), std::move(base),
          cfg.refresh_each_step);
    }
    default:
      return optim::make_optimizer(cfg.method, std::move(w0), o, threads);
  }
}

RunResult run_experiment(const ExperimentConfig& cfg,
                         const problems::Problem& problem, std::uint64_t seed,
                         const RunOptions& options) {
  auto opt = make_experiment_optimizer(cfg, problem, options.threads);
  optim::RngStreams rngs = streams_for(cfg, seed);
  const std::string hash = config_hash(cfg);
  const bool bits = has_assignments(cfg.method);
  const std::size_t period = cfg.optimizer.period;
  const TraceBuilder builder(problem);

  RunResult result;
  result.seed = seed;
  result.eta = cfg.optimizer.step_size;

  std::size_t step = 0;
  if (options.resume_from) {
    optim::Checkpoint ckpt = optim::load_checkpoint(*options.resume_from);
    if (ckpt.config_hash != hash) {
      throw InvalidInput("checkpoint was written by config " + ckpt.config_hash +
                         ", this config is " + hash);
    }
    if (ckpt.method != optim::method_name(cfg.method)) {
      throw InvalidInput("checkpoint method " + ckpt.method + " does not match");
    }
    if (ckpt.step_in_period != 0) {
      throw InvalidInput("checkpoint is not at a period boundary");
    }
    if (ckpt.blocks.size() != opt->blocks().size()) {
      throw InvalidInput("checkpoint block count does not match the problem");
    }
    for (std::size_t l = 0; l < ckpt.blocks.size(); ++l) {
      if (!ckpt.blocks[l].weights.same_shape(opt->blocks()[l].weights)) {
        throw InvalidInput("checkpoint block " + std::to_string(l) +
                           " has the wrong shape");
      }
    }
    if (ckpt.global_step > cfg.total_steps) {
      throw InvalidInput("checkpoint is past total_steps");
    }
    opt->mutable_blocks() = std::move(ckpt.blocks);
    opt->set_period_index(ckpt.period_index);
    rngs = std::move(ckpt.rngs);
    step = ckpt.global_step;
  } else {
    const double loss0 = builder.shifted_loss(problem.initial_point());
    result.trace.push_back(builder.record(0, loss0, opt->blocks(),
                                          opt->state_scalars(), std::nullopt,
                                          false));
    if (diverged(loss0)) {
      result.blew_up = true;
      return result;
    }
  }

  auto save = [&](std::size_t global_step) {
    if (!options.checkpoint_dir) return;
    optim::Checkpoint ckpt;
    ckpt.blocks = opt->blocks();
    ckpt.period_index = opt->period_index();
    ckpt.global_step = global_step;
    ckpt.config_hash = hash;
    ckpt.method = std::string(optim::method_name(cfg.method));
    ckpt.rngs = rngs;
    optim::save_checkpoint(*options.checkpoint_dir, ckpt);
  };

  const optim::StepObserver observer = [&](const optim::StepEvent& ev) {
    std::vector<DenseMatrix> w;
    w.reserve(ev.blocks.size());
    for (const auto& b : ev.blocks) w.push_back(b.weights);
    const double loss = builder.shifted_loss(w);
    if (diverged(loss)) throw BlowUp{ev.step};
    result.steps_completed = ev.step;
    if (ev.step % cfg.trace_every != 0 && ev.step != cfg.total_steps) return;
    std::optional<double> chi;
    if (ev.step % cfg.chi_every == 0) chi = projection_residual(ev.gradients, ev.blocks);
    std::size_t memory = 0;
    for (const auto& b : ev.blocks) memory += b.state_scalars();
    result.trace.push_back(builder.record(ev.step, loss, ev.blocks, memory, chi, bits));
  };

  result.steps_completed = step;
  try {
    while (step < cfg.total_steps) {
      const std::size_t steps = std::min(period, cfg.total_steps - step);
      opt->run_period(problem, rngs, step, steps, observer);
      step += steps;
      const bool periodic = cfg.checkpoint_every_periods > 0 &&
                            opt->period_index() % cfg.checkpoint_every_periods == 0;
      if (periodic || step == cfg.total_steps) save(step);
    }
  } catch (const BlowUp&) {
    result.blew_up = true;
  }
  result.final_blocks = opt->blocks();
  return result;
}

RunResult run_tuned(const ExperimentConfig& cfg,
                    const problems::Problem& problem, std::uint64_t seed,
                    const RunOptions& options) {
  if (cfg.eta_grid.empty()) return run_experiment(cfg, problem, seed, options);
  RunOptions probe = options;
  probe.checkpoint_dir.reset();
  probe.resume_from.reset();
  std::vector<std::pair<double, double>> scores;
  double best_eta = cfg.eta_grid.front();
  double best_score = std::numeric_limits<double>::infinity();
  for (double eta : cfg.eta_grid) {
    ExperimentConfig c = cfg;
    c.optimizer.step_size = eta;
    c.eta_grid.clear();
    const RunResult r = run_experiment(c, problem, seed, probe);
    const double score = r.blew_up || r.trace.empty()
                             ? std::numeric_limits<double>::infinity()
                             : r.trace.back().loss;
    scores.emplace_back(eta, score);
    if (score < best_score) {
      best_score = score;
      best_eta = eta;
    }
  }
  ExperimentConfig c = cfg;
  c.optimizer.step_size = best_eta;
  c.eta_grid.clear();
  RunResult best = run_experiment(c, problem, seed, options);
  best.grid_scores = std::move(scores);
  return best;
}

namespace {

bool reals_match(double a, double b) {
  if (a == b) return true;
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= 1e-12 * scale;
}

std::string opt_text(const std::optional<double>& v) {
  return v ? metrics::format_double(*v) : std::string();
}

}  // namespace

std::optional<GoldenMismatch> compare_traces(
    const std::vector<TraceRecord>& expected,
    const std::vector<TraceRecord>& actual) {
  const std::size_t rows = std::min(expected.size(), actual.size());
  for (std::size_t i = 0; i < rows; ++i) {
    const TraceRecord& e = expected[i];
    const TraceRecord& a = actual[i];
    const std::size_t row = i + 1;
    if (e.step != a.step) {
      return GoldenMismatch{row, "step", std::to_string(e.step), std::to_string(a.step)};
    }
    if (!reals_match(e.loss, a.loss)) {
      return GoldenMismatch{row, "loss", metrics::format_double(e.loss),
                            metrics::format_double(a.loss)};
    }
    if (!reals_match(e.grad_trace_norm, a.grad_trace_norm)) {
      return GoldenMismatch{row, "grad_trace_norm",
                            metrics::format_double(e.grad_trace_norm),
                            metrics::format_double(a.grad_trace_norm)};
    }
    auto optional_match = [](const std::optional<double>& x,
                             const std::optional<double>& y) {
      if (x.has_value() != y.has_value()) return false;
      return !x || reals_match(*x, *y);
    };
    if (!optional_match(e.chi_residual, a.chi_residual)) {
      return GoldenMismatch{row, "chi_residual", opt_text(e.chi_residual),
                            opt_text(a.chi_residual)};
    }
    if (!optional_match(e.stable_rank_mean, a.stable_rank_mean)) {
      return GoldenMismatch{row, "stable_rank_mean", opt_text(e.stable_rank_mean),
                            opt_text(a.stable_rank_mean)};
    }
    if (e.memory_scalars != a.memory_scalars) {
      return GoldenMismatch{row, "memory_scalars", std::to_string(e.memory_scalars),
                            std::to_string(a.memory_scalars)};
    }
    if (e.assignment_bits != a.assignment_bits) {
      return GoldenMismatch{row, "assignment_bits", e.assignment_bits,
                            a.assignment_bits};
    }
  }
  if (expected.size() != actual.size()) {
    return GoldenMismatch{0, "rows", std::to_string(expected.size()),
                          std::to_string(actual.size())};
  }
  return std::nullopt;
}

}  // namespace gum::harness
