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

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "qcsyn/metrics.hpp"

namespace qcsyn {

/// Shortest decimal text that reads back to the same double. Logs depend on
/// this being stable to stay byte-reproducible.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  if (res.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

/// One row of the per-episode CSV log.
struct EpisodeRecord {
  std::string run_id;
  std::size_t episode = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::optional<std::size_t> lambda;  // absent for fixed targets
  std::size_t max_length = 0;
  bool success = false;
  std::size_t gates_used = 0;
  double total_reward = 0.0;
  double final_fidelity = 0.0;
  std::string circuit;  // semicolon-joined circuit text

  EpisodeOutcome outcome() const {
    return {lambda.value_or(0), max_length, gates_used, success, final_fidelity};
  }
};

inline constexpr const char* kEpisodeCsvHeader =
    "run_id,episode,seed,n,lambda,L,outcome,n_g,total_reward,final_fidelity,circuit";

inline std::string to_csv_row(const EpisodeRecord& r) {
  std::string s;
  s += r.run_id;
  s += ',' + std::to_string(r.episode);
  s += ',' + std::to_string(r.seed);
  s += ',' + std::to_string(r.n);
  s += ',' + (r.lambda ? std::to_string(*r.lambda) : std::string());
  s += ',' + std::to_string(r.max_length);
  s += r.success ? ",success" : ",truncated";
  s += ',' + std::to_string(r.gates_used);
  s += ',' + format_double(r.total_reward);
  s += ',' + format_double(r.final_fidelity);
  s += ',' + r.circuit;
  return s;
}

inline void write_episode_csv(std::ostream& out, std::span<const EpisodeRecord> records) {
  out << kEpisodeCsvHeader << '\n';
  for (const auto& r : records) out << to_csv_row(r) << '\n';
}

/// Parses one row written by to_csv_row.
inline EpisodeRecord parse_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (int i = 0; i < 10; ++i) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) throw std::invalid_argument("episode CSV: too few fields");
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  fields.push_back(line.substr(start));
  EpisodeRecord r;
  r.run_id = fields[0];
  r.episode = std::stoul(fields[1]);
  r.seed = std::stoull(fields[2]);
  r.n = std::stoul(fields[3]);
  if (!fields[4].empty()) r.lambda = std::stoul(fields[4]);
  r.max_length = std::stoul(fields[5]);
  if (fields[6] != "success" && fields[6] != "truncated") {
    throw std::invalid_argument("episode CSV: bad outcome '" + fields[6] + "'");
  }
  r.success = fields[6] == "success";
  r.gates_used = std::stoul(fields[7]);
  r.total_reward = std::stod(fields[8]);
  r.final_fidelity = std::stod(fields[9]);
  r.circuit = fields[10];
  return r;
}

}  // namespace qcsyn
