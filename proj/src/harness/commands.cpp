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

#include "gum/harness/commands.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "gum/errors.hpp"
#include "gum/harness/config.hpp"
#include "gum/harness/runner.hpp"
#include "gum/harness/verification.hpp"
#include "gum/metrics/diagnostics.hpp"
#include "gum/metrics/trace.hpp"
#include "gum/optim/checkpoint.hpp"
#include "gum/optim/memory.hpp"
#include "gum/parallel.hpp"

namespace gum::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw InvalidInput("cannot write " + path.string());
}

void write_json(const fs::path& path, const json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

std::vector<metrics::TraceRecord> read_trace_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open trace " + path.string());
  return metrics::read_trace_csv(in);
}

json summary_json(const RunResult& r, const ExperimentConfig& cfg,
                  const std::vector<metrics::TraceRecord>& trace) {
  json s = {{"seed", r.seed},
            {"method", std::string(optim::method_name(cfg.method))},
            {"config_hash", config_hash(cfg)},
            {"step_size", r.eta},
            {"steps_completed", r.steps_completed},
            {"total_steps", cfg.total_steps},
            {"blew_up", r.blew_up}};
  if (!trace.empty()) {
    s["initial_loss"] = trace.front().loss;
    s["final_loss"] = trace.back().loss;
    s["min_grad_trace_norm"] = metrics::grad_norm_trace(trace).final_min;
  }
  if (!r.grid_scores.empty()) {
    json grid = json::array();
    for (const auto& [eta, score] : r.grid_scores) {
      grid.push_back({{"eta", eta},
                      {"final_loss", std::isfinite(score) ? json(score) : json(nullptr)}});
    }
    s["eta_grid"] = grid;
  }
  return s;
}

int run_command(const RunCommand& cmd, const char* problem_name,
                std::ostream& log) {
  ExperimentConfig cfg;
  std::unique_ptr<problems::Problem> problem;
  try {
    cfg = load_experiment_config(cmd.config);
    problem = make_problem(cfg);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  if (problem->name() != problem_name) {
    log << "error: this command runs the " << problem_name
        << " problem, the config names " << problem->name() << "\n";
    return kExitConfigError;
  }
  if (cmd.resume && !cfg.eta_grid.empty()) {
    log << "error: --resume cannot be combined with eta_grid\n";
    return kExitConfigError;
  }
  const fs::path out = cmd.out ? *cmd.out
                       : !cfg.output_dir.empty() ? fs::path(cfg.output_dir)
                                                 : fs::path("out");
  const std::vector<std::uint64_t> seeds =
      cmd.seed ? std::vector{*cmd.seed} : cfg.seeds.masters;
  const std::size_t threads = bench_threads();

  int status = kExitOk;
  try {
    write_json(out / "config.json", to_json(cfg));
    for (std::uint64_t seed : seeds) {
      const fs::path dir = out / ("seed_" + std::to_string(seed));
      RunOptions options;
      options.threads = threads;
      options.checkpoint_dir = dir / "checkpoint";
      std::vector<metrics::TraceRecord> trace;
      if (cmd.resume) {
        const fs::path from = *cmd.resume / ("seed_" + std::to_string(seed));
        options.resume_from = from / "checkpoint";
        const std::size_t resumed_at =
            optim::load_checkpoint(*options.resume_from).global_step;
        for (auto& row : read_trace_file(from / "trace.csv")) {
          if (row.step <= resumed_at) trace.push_back(std::move(row));
        }
      }
      RunResult result = run_tuned(cfg, *problem, seed, options);
      for (auto& row : result.trace) trace.push_back(std::move(row));
      fs::create_directories(dir);
      {
        std::ofstream csv(dir / "trace.csv", std::ios::binary);
        metrics::write_trace_csv(csv, trace);
        if (!csv) throw InvalidInput("cannot write " + (dir / "trace.csv").string());
      }
      write_json(dir / "summary.json", summary_json(result, cfg, trace));
      log << "seed " << seed << ": " << result.steps_completed << " steps";
      if (!trace.empty()) {
        log << ", final loss " << metrics::format_double(trace.back().loss);
      }
      log << "\n";
      if (result.blew_up) {
        log << "error: seed " << seed << " diverged after step "
            << result.steps_completed << "\n";
        status = kExitNumericalFailure;
      }
    }
  } catch (const InvalidInput& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const fs::filesystem_error& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return status;
}

std::vector<std::pair<std::size_t, std::size_t>> parse_shapes(const json& doc) {
  const json& list = doc.is_object() ? doc.at("shapes") : doc;
  if (!list.is_array() || list.empty()) {
    throw InvalidInput("shapes must be a non-empty array");
  }
  std::vector<std::pair<std::size_t, std::size_t>> shapes;
  for (const json& s : list) {
    if (!s.is_array() || s.size() != 2) {
      throw InvalidInput("each shape must be a pair [m, n]");
    }
    const auto m = s.at(0).get<std::int64_t>();
    const auto n = s.at(1).get<std::int64_t>();
    if (m <= 0 || n <= 0) throw InvalidInput("shape dimensions must be positive");
    shapes.emplace_back(static_cast<std::size_t>(m), static_cast<std::size_t>(n));
  }
  return shapes;
}

json counts_json(const optim::MemoryCounts& c) {
  return {{"full_training", c.full_training},
          {"galore", c.galore},
          {"gum_expected", c.gum_expected},
          {"gum_worst_case", c.gum_worst_case}};
}

}  // namespace

int cmd_run_synthetic(const RunCommand& cmd, std::ostream& log) {
  return run_command(cmd, "noisy_linear_regression", log);
}

int cmd_run_blockwise(const RunCommand& cmd, std::ostream& log) {
  return run_command(cmd, "multi_block_quadratic", log);
}

int cmd_verify_unbiased(const VerifyUnbiasedCommand& cmd, std::ostream& out,
                        std::ostream& log) {
  UnbiasedReport report;
  try {
    report = verify_unbiased(cmd.trials, cmd.draws, cmd.seed, cmd.q);
  } catch (const InvalidInput& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  const json doc = to_json(report);
  try {
    if (cmd.out) {
      write_json(*cmd.out, doc);
    } else {
      out << doc.dump(2) << "\n";
    }
  } catch (const InvalidInput& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  std::size_t passed = 0;
  for (const auto& t : report.trials) passed += t.pass;
  log << passed << "/" << report.trials.size() << " checks within "
      << report.tolerance_in_standard_errors << " standard errors\n";
  return report.all_pass ? kExitOk : kExitVerificationFailure;
}

int cmd_memory_report(const MemoryReportCommand& cmd, std::ostream& out,
                      std::ostream& log) {
  json doc;
  try {
    std::ifstream in(cmd.shapes);
    if (!in) throw InvalidInput("cannot open shapes file " + cmd.shapes.string());
    json shapes_doc;
    try {
      shapes_doc = json::parse(in);
    } catch (const json::exception& e) {
      throw InvalidInput("shapes file: " + std::string(e.what()));
    }
    std::vector<std::pair<std::size_t, std::size_t>> shapes;
    try {
      shapes = parse_shapes(shapes_doc);
    } catch (const json::exception& e) {
      throw InvalidInput("shapes file: " + std::string(e.what()));
    }
    if (cmd.gamma > shapes.size()) {
      throw InvalidInput("gamma " + std::to_string(cmd.gamma) + " exceeds the " +
                         std::to_string(shapes.size()) + " blocks");
    }
    if (cmd.rank_prime > cmd.rank) {
      throw InvalidInput("rank-prime must not exceed rank");
    }
    const double q =
        static_cast<double>(cmd.gamma) / static_cast<double>(shapes.size());
    const optim::MemoryReport report =
        optim::memory_report(shapes, cmd.rank, cmd.rank_prime, q);
    json blocks = json::array();
    for (std::size_t l = 0; l < shapes.size(); ++l) {
      json b = counts_json(report.per_block[l]);
      b["m"] = shapes[l].first;
      b["n"] = shapes[l].second;
      if (cmd.rank_prime < cmd.rank) {
        const std::size_t m = std::min(shapes[l].first, shapes[l].second);
        const std::size_t n = std::max(shapes[l].first, shapes[l].second);
        b["equal_memory_q"] = optim::equal_memory_q(m, n, cmd.rank, cmd.rank_prime);
      }
      blocks.push_back(b);
    }
    doc = {{"rank", cmd.rank},
           {"rank_prime", cmd.rank_prime},
           {"gamma", cmd.gamma},
           {"q", q},
           {"blocks", blocks},
           {"total", counts_json(report.total)},
           {"gum_expected_le_galore",
            report.total.gum_expected <= report.total.galore}};
    if (cmd.out) {
      write_json(*cmd.out, doc);
    } else {
      out << doc.dump(2) << "\n";
    }
  } catch (const InvalidInput& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  log << "galore " << doc["total"]["galore"].get<double>() << ", gum expected "
      << doc["total"]["gum_expected"].get<double>() << ", gum worst case "
      << doc["total"]["gum_worst_case"].get<double>() << "\n";
  return kExitOk;
}

int cmd_analyze_spectrum(const AnalyzeSpectrumCommand& cmd, std::ostream& log) {
  try {
    const optim::Checkpoint ckpt = optim::load_checkpoint(cmd.checkpoint);
    const fs::path out = cmd.out ? *cmd.out : cmd.checkpoint;
    json spectra = json::array();
    std::string csv = "block,rows,cols,stable_rank\n";
    const metrics::StableRankSummary sr = metrics::stable_rank_trace(ckpt.blocks);
    for (std::size_t l = 0; l < ckpt.blocks.size(); ++l) {
      const auto& b = ckpt.blocks[l];
      spectra.push_back(
          metrics::to_json(metrics::spectrum_snapshot(b, l, ckpt.global_step)));
      csv += std::to_string(l) + "," + std::to_string(b.weights.rows()) + "," +
             std::to_string(b.weights.cols()) + "," +
             (sr.per_block[l] ? metrics::format_double(*sr.per_block[l]) : "") +
             "\n";
    }
    write_json(out / "spectra.json", spectra);
    write_text(out / "stable_rank.csv", csv);
    log << "wrote spectra for " << ckpt.blocks.size() << " blocks to "
        << out.string() << "\n";
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const fs::filesystem_error& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitOk;
}

int cmd_golden_check(const GoldenCheckCommand& cmd, std::ostream& log) {
  ExperimentConfig cfg;
  std::unique_ptr<problems::Problem> problem;
  std::vector<metrics::TraceRecord> reference;
  try {
    cfg = load_experiment_config(cmd.config);
    problem = make_problem(cfg);
    reference = read_trace_file(cmd.reference);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  const std::uint64_t seed = cmd.seed ? *cmd.seed : cfg.seeds.masters.front();
  RunResult result;
  try {
    RunOptions options;
    options.threads = bench_threads();
    result = run_tuned(cfg, *problem, seed, options);
  } catch (const InvalidInput& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kExitNumericalFailure;
  }
  if (const auto mismatch = compare_traces(reference, result.trace)) {
    if (mismatch->row == 0) {
      log << "mismatch: reference has " << mismatch->expected
          << " rows, run produced " << mismatch->actual << "\n";
    } else {
      log << "mismatch at row " << mismatch->row << " field "
          << mismatch->field << ": expected " << mismatch->expected << ", got "
          << mismatch->actual << "\n";
    }
    return kExitVerificationFailure;
  }
  log << "golden trace matches (" << reference.size() << " rows)\n";
  return kExitOk;
}

}  // namespace gum::harness
