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

#include "gum/harness/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include "gum/errors.hpp"
#include "gum/problems/problem.hpp"

namespace gum::harness {

using nlohmann::json;

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidInput("config: " + msg);
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  require(obj.is_object(), where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    require(allowed.count(key) > 0, "unknown key '" + key + "' in " + where);
  }
}

const char* msign_name(linalg::MsignMode m) {
  return m == linalg::MsignMode::kExactOracle ? "exact" : "newton_schulz";
}

linalg::NewtonSchulzCoeffs parse_coeffs(const json& j) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "classic_quintic") return linalg::NewtonSchulzCoeffs::classic_quintic();
    if (name == "muon_quintic") return linalg::NewtonSchulzCoeffs::muon_quintic();
    if (name == "cubic") return linalg::NewtonSchulzCoeffs::cubic();
    require(false, "unknown newton_schulz preset '" + name + "'");
  }
  check_keys(j, {"a", "b", "c", "iterations"}, "newton_schulz");
  linalg::NewtonSchulzCoeffs c;
  c.a = j.at("a").get<double>();
  c.b = j.at("b").get<double>();
  c.c = j.at("c").get<double>();
  c.iterations = j.at("iterations").get<int>();
  return c;
}

void parse_optimizer(const json& j, ExperimentConfig& cfg) {
  check_keys(j,
             {"period", "rank", "full_rank_layers", "q", "per_block_q",
              "momentum", "step_size", "step_schedule", "compensated_variant",
              "use_damping", "msign", "newton_schulz", "sampling",
              "projector_rule", "base_optimizer", "refresh_each_step",
              "restart_momentum"},
             "optimizer");
  optim::GumConfig& o = cfg.optimizer;
  o.period = j.value("period", o.period);
  o.rank = j.value("rank", o.rank);
  o.full_rank_layers = j.value("full_rank_layers", o.full_rank_layers);
  if (j.contains("q") && !j.at("q").is_null()) o.q_override = j.at("q").get<double>();
  o.per_block_q = j.value("per_block_q", o.per_block_q);
  o.momentum = j.value("momentum", o.momentum);
  o.step_size = j.value("step_size", o.step_size);
  if (j.contains("step_schedule")) {
    const json& s = j.at("step_schedule");
    if (s.is_array()) {
      o.step_schedule = s.get<std::vector<double>>();
    } else {
      check_keys(s, {"inverse_sqrt"}, "step_schedule");
      cfg.decay_scale = s.at("inverse_sqrt").get<double>();
      require(std::isfinite(*cfg.decay_scale) && *cfg.decay_scale > 0,
              "inverse_sqrt scale must be positive");
    }
  }
  o.compensated_variant = j.value("compensated_variant", o.compensated_variant);
  o.use_damping = j.value("use_damping", o.use_damping);
  const std::string msign = j.value("msign", std::string("newton_schulz"));
  require(msign == "newton_schulz" || msign == "exact",
          "msign must be newton_schulz or exact");
  o.msign_mode = msign == "exact" ? linalg::MsignMode::kExactOracle
                                  : linalg::MsignMode::kNewtonSchulz;
  if (j.contains("newton_schulz")) o.newton_schulz = parse_coeffs(j.at("newton_schulz"));
  const std::string sampling = j.value("sampling", std::string("bernoulli"));
  require(sampling == "bernoulli" || sampling == "exact_gamma",
          "sampling must be bernoulli or exact_gamma");
  o.sampling = sampling == "exact_gamma" ? optim::SamplingMode::kExactGamma
                                         : optim::SamplingMode::kBernoulli;
  cfg.projector_rule = j.value("projector_rule", cfg.projector_rule);
  cfg.base_optimizer = j.value("base_optimizer", cfg.base_optimizer);
  cfg.refresh_each_step = j.value("refresh_each_step", cfg.refresh_each_step);
  cfg.restart_momentum = j.value("restart_momentum", cfg.restart_momentum);
  require(cfg.projector_rule == "galore" || cfg.projector_rule == "random",
          "projector_rule must be galore or random");
  require(cfg.base_optimizer == "muon" || cfg.base_optimizer == "momentum_sgd",
          "base_optimizer must be muon or momentum_sgd");
}

void parse_seeds(const json& j, Seeds& seeds) {
  check_keys(j, {"master", "gradient", "assignment"}, "seeds");
  if (j.contains("master")) {
    const json& m = j.at("master");
    seeds.masters = m.is_array() ? m.get<std::vector<std::uint64_t>>()
                                 : std::vector{m.get<std::uint64_t>()};
    require(!seeds.masters.empty(), "seeds.master must not be empty");
  }
  if (j.contains("gradient")) seeds.gradient = j.at("gradient").get<std::uint64_t>();
  if (j.contains("assignment")) {
    seeds.assignment = j.at("assignment").get<std::uint64_t>();
  }
}

void validate(const ExperimentConfig& cfg,
              const std::vector<std::pair<std::size_t, std::size_t>>& shapes) {
  require(cfg.total_steps >= 1, "total_steps must be at least 1");
  require(cfg.trace_every >= 1, "trace.every must be at least 1");
  require(cfg.chi_every >= 1, "trace.chi_every must be at least 1");
  for (double eta : cfg.eta_grid) {
    require(std::isfinite(eta) && eta > 0, "eta_grid entries must be positive");
  }
  require(cfg.eta_grid.empty() || cfg.optimizer.step_schedule.empty(),
          "eta_grid cannot be combined with a step_schedule table");
  const optim::GumConfig& o = cfg.optimizer;
  if (cfg.method == optim::Method::kGaloreMuon) {
    require(o.full_rank_layers == 0 && o.q() == 0.0 && o.per_block_q.empty(),
            "galore_muon requires full_rank_layers = 0 and no q");
  }
  o.validate_shapes(shapes);
}

}  // namespace

ExperimentConfig parse_experiment_config(const json& doc) {
  ExperimentConfig cfg;
  try {
    check_keys(doc,
               {"problem", "method", "optimizer", "total_steps", "seeds",
                "trace", "eta_grid", "checkpoint", "output_dir"},
               "config");
    cfg.problem = doc.at("problem");
    const auto problem = problems::problem_from_json(cfg.problem);
    cfg.problem = problem->to_json();
    cfg.method = optim::parse_method(doc.value("method", std::string("gum")));
    if (doc.contains("optimizer")) parse_optimizer(doc.at("optimizer"), cfg);
    cfg.total_steps = doc.value("total_steps", cfg.total_steps);
    if (doc.contains("seeds")) parse_seeds(doc.at("seeds"), cfg.seeds);
    if (doc.contains("trace")) {
      const json& t = doc.at("trace");
      check_keys(t, {"every", "chi_every"}, "trace");
      cfg.trace_every = t.value("every", cfg.trace_every);
      cfg.chi_every = t.value("chi_every", cfg.chi_every);
    }
    cfg.eta_grid = doc.value("eta_grid", cfg.eta_grid);
    if (doc.contains("checkpoint")) {
      const json& c = doc.at("checkpoint");
      check_keys(c, {"every_periods"}, "checkpoint");
      cfg.checkpoint_every_periods = c.value("every_periods", std::size_t{0});
    }
    cfg.output_dir = doc.value("output_dir", cfg.output_dir);
    const auto shapes = problem->block_shapes();
    cfg.optimizer.num_blocks = shapes.size();
    validate(cfg, shapes);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("config: cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput("config: " + path.string() + ": " + e.what());
  }
  return parse_experiment_config(doc);
}

json to_json(const ExperimentConfig& cfg) {
  const optim::GumConfig& o = cfg.optimizer;
  json opt = {
      {"period", o.period},
      {"rank", o.rank},
      {"full_rank_layers", o.full_rank_layers},
      {"momentum", o.momentum},
      {"step_size", o.step_size},
      {"compensated_variant", o.compensated_variant},
      {"use_damping", o.use_damping},
      {"msign", msign_name(o.msign_mode)},
      {"newton_schulz",
       {{"a", o.newton_schulz.a},
        {"b", o.newton_schulz.b},
        {"c", o.newton_schulz.c},
        {"iterations", o.newton_schulz.iterations}}},
      {"sampling", o.sampling == optim::SamplingMode::kExactGamma
                       ? "exact_gamma"
                       : "bernoulli"},
      {"projector_rule", cfg.projector_rule},
      {"base_optimizer", cfg.base_optimizer},
      {"refresh_each_step", cfg.refresh_each_step},
      {"restart_momentum", cfg.restart_momentum},
  };
  opt["q"] = o.q_override ? json(*o.q_override) : json(nullptr);
  if (!o.per_block_q.empty()) opt["per_block_q"] = o.per_block_q;
  if (!o.step_schedule.empty()) opt["step_schedule"] = o.step_schedule;
  if (cfg.decay_scale) opt["step_schedule"] = {{"inverse_sqrt", *cfg.decay_scale}};

  json seeds = {{"master", cfg.seeds.masters}};
  if (cfg.seeds.gradient) seeds["gradient"] = *cfg.seeds.gradient;
  if (cfg.seeds.assignment) seeds["assignment"] = *cfg.seeds.assignment;

  json doc = {{"problem", cfg.problem},
              {"method", std::string(optim::method_name(cfg.method))},
              {"optimizer", opt},
              {"total_steps", cfg.total_steps},
              {"seeds", seeds},
              {"trace", {{"every", cfg.trace_every}, {"chi_every", cfg.chi_every}}},
              {"eta_grid", cfg.eta_grid},
              {"checkpoint", {{"every_periods", cfg.checkpoint_every_periods}}}};
  if (!cfg.output_dir.empty()) doc["output_dir"] = cfg.output_dir;
  return doc;
}

std::string config_hash(const ExperimentConfig& cfg) {
  json doc = to_json(cfg);
  doc.erase("output_dir");
  doc.erase("total_steps");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : doc.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

optim::GumConfig resolved_optimizer(const ExperimentConfig& cfg) {
  optim::GumConfig o = cfg.optimizer;
  if (cfg.decay_scale) {
    o.step_schedule.resize(cfg.total_steps);
    for (std::size_t t = 0; t < cfg.total_steps; ++t) {
      o.step_schedule[t] =
          o.step_size / std::sqrt(1.0 + static_cast<double>(t) / *cfg.decay_scale);
    }
  }
  return o;
}

}  // namespace gum::harness
