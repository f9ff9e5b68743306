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

#include "gum/optim/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "gum/errors.hpp"
#include "gum/linalg/serialize.hpp"

namespace gum::optim {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kFormat = "gum-checkpoint/1";

std::string block_file(std::size_t index, const char* what) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "block_%03zu_%s.bin", index, what);
  return buf;
}

const char* assignment_name(Assignment a) {
  return a == Assignment::kFullRank ? "full_rank" : "low_rank";
}

Assignment parse_assignment(const std::string& s) {
  if (s == "full_rank") return Assignment::kFullRank;
  if (s == "low_rank") return Assignment::kLowRank;
  throw InvalidInput("checkpoint: unknown assignment '" + s + "'");
}

}  // namespace

void save_checkpoint(const fs::path& dir, const Checkpoint& ckpt) {
  fs::create_directories(dir);
  json manifest;
  manifest["format"] = kFormat;
  manifest["method"] = ckpt.method;
  manifest["period_index"] = ckpt.period_index;
  manifest["step_in_period"] = ckpt.step_in_period;
  manifest["global_step"] = ckpt.global_step;
  manifest["config_hash"] = ckpt.config_hash;
  manifest["rng_state"] = {{"gradient", ckpt.rngs.gradient.serialize()},
                           {"assignment", ckpt.rngs.assignment.serialize()},
                           {"projector", ckpt.rngs.projector.serialize()}};
  json assignments = json::array();
  json blocks = json::array();
  for (std::size_t i = 0; i < ckpt.blocks.size(); ++i) {
    const BlockState& b = ckpt.blocks[i];
    assignments.push_back(assignment_name(b.assignment));
    json entry = {{"weights", block_file(i, "weights")},
                  {"momentum", block_file(i, "momentum")},
                  {"q", b.q},
                  {"period_index", b.period_index}};
    linalg::save_matrix(dir / block_file(i, "weights"), b.weights);
    linalg::save_matrix(dir / block_file(i, "momentum"), b.momentum);
    if (b.projector) {
      entry["projector"] = block_file(i, "projector");
      linalg::save_matrix(dir / block_file(i, "projector"), b.projector->p);
    } else {
      entry["projector"] = nullptr;
      fs::remove(dir / block_file(i, "projector"));
    }
    blocks.push_back(std::move(entry));
  }
  manifest["assignments"] = std::move(assignments);
  manifest["blocks"] = std::move(blocks);

  std::ofstream out(dir / "manifest.json");
  if (!out) throw InvalidInput("checkpoint: cannot write " + dir.string());
  out << manifest.dump(2) << '\n';
}

Checkpoint load_checkpoint(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw InvalidInput("checkpoint: no manifest in " + dir.string());
  Checkpoint ckpt;
  try {
    const json manifest = json::parse(in);
    if (manifest.at("format").get<std::string>() != kFormat) {
      throw InvalidInput("checkpoint: unsupported format");
    }
    ckpt.method = manifest.value("method", std::string());
    ckpt.period_index = manifest.at("period_index").get<std::size_t>();
    ckpt.step_in_period = manifest.at("step_in_period").get<std::size_t>();
    ckpt.global_step = manifest.at("global_step").get<std::size_t>();
    ckpt.config_hash = manifest.at("config_hash").get<std::string>();
    const json& rng = manifest.at("rng_state");
    ckpt.rngs.gradient = Rng::deserialize(rng.at("gradient").get<std::string>());
    ckpt.rngs.assignment =
        Rng::deserialize(rng.at("assignment").get<std::string>());
    ckpt.rngs.projector =
        Rng::deserialize(rng.at("projector").get<std::string>());
    const json& assignments = manifest.at("assignments");
    const json& blocks = manifest.at("blocks");
    if (assignments.size() != blocks.size()) {
      throw InvalidInput("checkpoint: assignments and blocks disagree");
    }
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const json& e = blocks[i];
      BlockState b = BlockState::initial(
          linalg::load_matrix(dir / e.at("weights").get<std::string>()));
      b.momentum = linalg::load_matrix(dir / e.at("momentum").get<std::string>());
      if (!e.at("projector").is_null()) {
        b.projector = Projector{
            linalg::load_matrix(dir / e.at("projector").get<std::string>())};
      }
      b.assignment = parse_assignment(assignments[i].get<std::string>());
      b.q = e.at("q").get<double>();
      b.period_index = e.at("period_index").get<std::size_t>();
      b.check_shapes();
      ckpt.blocks.push_back(std::move(b));
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("checkpoint: malformed manifest: ") +
                       e.what());
  } catch (const InvalidState& e) {
    throw InvalidInput(std::string("checkpoint: inconsistent block: ") +
                       e.what());
  }
  return ckpt;
}

}  // namespace gum::optim
