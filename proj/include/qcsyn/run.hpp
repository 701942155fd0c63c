// Copyright 2026 The qcsyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcsyn/config.hpp"
#include "qcsyn/metrics.hpp"

namespace qcsyn {

/// Hash of everything that defines an experiment: the canonical config
/// without the seed list and the output location.
inline std::string experiment_hash(RunConfig cfg) {
  cfg.seeds.clear();
  cfg.output_dir = "-";
  return config_hash(cfg);
}

/// `<command>-<hash8>-s<seed>`
inline std::string run_id(const std::string& command, const RunConfig& cfg, std::uint64_t seed) {
  return command + "-" + experiment_hash(cfg) + "-s" + std::to_string(seed);
}

/// Writes `content` to `path`, creating parent directories. Refuses paths
/// that escape `root`.
inline void write_artifact(const std::filesystem::path& root, const std::filesystem::path& path,
                           const std::string& content) {
  namespace fs = std::filesystem;
  const auto abs_root = fs::weakly_canonical(fs::absolute(root));
  const auto abs_path = fs::weakly_canonical(fs::absolute(path));
  const auto rel = abs_path.lexically_relative(abs_root);
  if (rel.empty() || *rel.begin() == "..") {
    throw std::runtime_error("refusing to write " + path.string() + " outside " + root.string());
  }
  fs::create_directories(abs_path.parent_path());
  std::ofstream out(abs_path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + abs_path.string() + " for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing " + abs_path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

struct SeedOutcome {
  std::uint64_t seed = 0;
  bool ok = false;
  std::optional<double> metric;  // final trailing-mean Lambda, when defined
  std::string error;
};

struct MultiSeedSummary {
  std::vector<SeedOutcome> seeds;
  std::optional<MeanStd> metric;
  bool partial = false;
  bool single_seed = false;
};

/// Runs `body` once per seed of `cfg`, then aggregates the per-seed metric
/// (population std; 0 for one seed). A throwing seed is recorded and marks
/// the summary partial.
inline MultiSeedSummary run_multi_seed(
    const RunConfig& cfg, const std::function<std::optional<double>(std::uint64_t)>& body) {
  if (cfg.seeds.empty()) throw std::invalid_argument("run_multi_seed: no seeds");
  MultiSeedSummary summary;
  std::vector<double> values;
  for (const auto seed : cfg.seeds) {
    SeedOutcome o;
    o.seed = seed;
    try {
      o.metric = body(seed);
      o.ok = true;
      if (o.metric) values.push_back(*o.metric);
    } catch (const std::exception& e) {
      o.error = e.what();
      summary.partial = true;
    }
    summary.seeds.push_back(std::move(o));
  }
  summary.single_seed = cfg.seeds.size() == 1;
  if (!values.empty()) summary.metric = mean_std(values);
  return summary;
}

inline nlohmann::json to_json(const MultiSeedSummary& s) {
  nlohmann::json seeds = nlohmann::json::array();
  for (const auto& o : s.seeds) {
    nlohmann::json j = {{"seed", o.seed}, {"ok", o.ok}};
    if (o.metric) j["trailing_lambda_mean"] = *o.metric;
    if (!o.ok) j["error"] = o.error;
    seeds.push_back(std::move(j));
  }
  nlohmann::json j = {{"seeds", seeds}, {"partial", s.partial}, {"single_seed", s.single_seed}};
  if (s.metric) {
    j["mean"] = s.metric->mean;
    j["std"] = s.metric->std;
  }
  return j;
}

}  // namespace qcsyn
