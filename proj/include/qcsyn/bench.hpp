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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qcsyn/agent.hpp"
#include "qcsyn/environment.hpp"
#include "qcsyn/episode_log.hpp"
#include "qcsyn/gateset.hpp"
#include "qcsyn/metrics.hpp"
#include "qcsyn/quantum_state.hpp"
#include "qcsyn/rng.hpp"
#include "qcsyn/target_gen.hpp"

namespace qcsyn {

struct EvaluationLevel {
  std::string name;
  std::vector<std::size_t> lambdas;
};

inline std::vector<EvaluationLevel> evaluation_levels() {
  return {{"easy", {1, 2, 3, 4, 5}}, {"medium", {6, 7, 8, 9, 10}}, {"hard", {11, 12, 13, 14, 15}}};
}

inline EvaluationLevel evaluation_level(const std::string& name) {
  for (auto& l : evaluation_levels()) {
    if (l.name == name) return l;
  }
  throw std::invalid_argument("unknown evaluation level '" + name + "' (easy, medium, hard)");
}

/// A well-known two-qubit state with its minimal Clifford+T depth from the
/// ground state.
struct NamedState {
  std::string id;     // command-line name
  std::string label;  // ket notation
  std::vector<Complex> amplitudes;
  std::string level;
  std::size_t minimal_depth = 0;

  QuantumState state() const { return QuantumState(amplitudes); }
};

inline std::vector<NamedState> well_known_states() {
  const double r = 1.0 / std::numbers::sqrt2;
  const Complex o{0.0, 0.0};
  const Complex p{r, 0.0};
  const Complex m{-r, 0.0};
  const Complex h{0.5, 0.0};
  const Complex one{1.0, 0.0};
  return {
      {"ket-00", "|00>", {one, o, o, o}, "easy", 0},
      {"uniform", "(|00>+|01>+|10>+|11>)/2", {h, h, h, h}, "easy", 2},
      {"bell-phi-plus", "(|00>+|11>)/sqrt2", {p, o, o, p}, "easy", 2},
      {"ket-01", "|01>", {o, one, o, o}, "medium", 4},
      {"ket-10", "|10>", {o, o, one, o}, "medium", 4},
      {"bell-phi-minus", "(|00>-|11>)/sqrt2", {p, o, o, m}, "medium", 4},
      {"ket-11", "|11>", {o, o, o, one}, "hard", 5},
      {"bell-psi-plus", "(|01>+|10>)/sqrt2", {o, p, p, o}, "hard", 5},
      {"bell-psi-minus", "(|01>-|10>)/sqrt2", {o, p, m, o}, "hard", 7},
  };
}

inline NamedState named_state(const std::string& id) {
  for (auto& s : well_known_states()) {
    if (s.id == id) return s;
  }
  std::string known;
  for (const auto& s : well_known_states()) known += (known.empty() ? "" : ", ") + s.id;
  throw std::invalid_argument("unknown state '" + id + "' (known: " + known + ")");
}

/// One evaluation episode.
struct BenchRow {
  std::string agent;
  std::string target;  // level name or state id
  std::optional<std::size_t> lambda;
  std::size_t episode = 0;
  std::uint64_t seed = 0;
  std::size_t max_length = 0;
  bool success = false;
  std::size_t gates_used = 0;
  double final_fidelity = 0.0;
  std::string circuit;
};

/// Aggregate over the rows sharing (agent, target).
struct BenchGroup {
  std::string agent;
  std::string target;
  std::size_t episodes = 0;
  double mean_gates = 0.0;
  double std_gates = 0.0;
  double success_rate = 0.0;
  /// Lambda statistics, only when every row carries lambda >= 1.
  std::optional<MeanStd> lambda_pct;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<BenchGroup> groups;
};

/// Groups rows by (agent, target) in first-appearance order and recomputes
/// every statistic from the raw rows.
inline std::vector<BenchGroup> aggregate_rows(std::span<const BenchRow> rows) {
  std::vector<BenchGroup> groups;
  std::vector<std::vector<const BenchRow*>> members;
  for (const auto& r : rows) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const BenchGroup& g) {
      return g.agent == r.agent && g.target == r.target;
    });
    if (it == groups.end()) {
      BenchGroup g;
      g.agent = r.agent;
      g.target = r.target;
      groups.push_back(std::move(g));
      members.emplace_back();
      it = groups.end() - 1;
    }
    members[static_cast<std::size_t>(it - groups.begin())].push_back(&r);
  }
  for (std::size_t i = 0; i < groups.size(); ++i) {
    std::vector<double> ng;
    std::vector<double> lam;
    std::size_t wins = 0;
    bool has_lambda = true;
    for (const auto* r : members[i]) {
      ng.push_back(static_cast<double>(r->gates_used));
      wins += r->success ? 1 : 0;
      if (r->lambda && *r->lambda > 0) {
        lam.push_back(reconstructed_depth(r->gates_used, *r->lambda));
      } else {
        has_lambda = false;
      }
    }
    const auto ms = mean_std(ng);
    groups[i].episodes = members[i].size();
    groups[i].mean_gates = ms.mean;
    groups[i].std_gates = ms.std;
    groups[i].success_rate = static_cast<double>(wins) / static_cast<double>(members[i].size());
    if (has_lambda) groups[i].lambda_pct = mean_std(lam);
  }
  return groups;
}

inline BenchReport make_report(std::vector<BenchRow> rows) {
  BenchReport rep;
  rep.groups = aggregate_rows(rows);
  rep.rows = std::move(rows);
  return rep;
}

namespace detail {

inline BenchRow run_bench_episode(Agent& agent, const EnvConfig& cfg, std::uint64_t seed) {
  Environment env(cfg);
  Rng env_rng(derive_seed(seed, 0));
  Rng agent_rng(derive_seed(seed, 1));
  const auto s = run_episode(env, agent, env_rng, agent_rng);
  BenchRow row;
  row.agent = agent.name();
  row.seed = seed;
  row.max_length = env.max_length();
  row.success = s.success;
  row.gates_used = s.gates_used;
  row.final_fidelity = s.final_fidelity;
  row.circuit = env.action_space().join_circuit(s.actions);
  return row;
}

}  // namespace detail

/// Runs `agent` once on each of `n_targets` random targets whose lambda is
/// drawn uniformly from the level, as fixed-target episodes of length
/// `max_length`. Episode i uses seed derive_seed(master_seed, i).
inline BenchReport eval_random_targets(Agent& agent, const EvaluationLevel& level,
                                       std::size_t n_targets, std::uint64_t master_seed,
                                       std::size_t max_length = 30, double sfe = 0.001,
                                       std::size_t n = 2, const GateSet& gateset = clifford_t()) {
  if (level.lambdas.empty()) throw std::invalid_argument("eval_random_targets: empty level");
  const ActionSpace space(gateset, n);
  std::vector<BenchRow> rows;
  for (std::size_t i = 0; i < n_targets; ++i) {
    const std::uint64_t seed = derive_seed(master_seed, i);
    Rng target_rng(derive_seed(seed, 2));
    const std::size_t lambda = level.lambdas[target_rng.uniform_index(level.lambdas.size())];
    auto trace = generate_target(space, lambda, target_rng);
    EnvConfig cfg;
    cfg.n = n;
    cfg.gateset = gateset;
    cfg.sfe = sfe;
    cfg.target_mode = FixedTarget{std::move(trace.target), max_length};
    auto row = detail::run_bench_episode(agent, cfg, seed);
    row.target = level.name;
    row.lambda = lambda;
    row.episode = i;
    rows.push_back(std::move(row));
  }
  return make_report(std::move(rows));
}

/// Runs `agent` `episodes_per_state` times on each named state. Lambda
/// statistics use the state's minimal depth and are omitted for depth 0.
inline BenchReport eval_named_states(Agent& agent, std::span<const NamedState> states,
                                     std::size_t episodes_per_state, std::uint64_t master_seed,
                                     std::size_t max_length = 30, double sfe = 0.001) {
  std::vector<BenchRow> rows;
  for (std::size_t si = 0; si < states.size(); ++si) {
    const auto& st = states[si];
    EnvConfig cfg;
    cfg.n = 2;
    cfg.sfe = sfe;
    cfg.target_mode = FixedTarget{st.state(), max_length};
    for (std::size_t e = 0; e < episodes_per_state; ++e) {
      const std::uint64_t seed = derive_seed(derive_seed(master_seed, si), e);
      auto row = detail::run_bench_episode(agent, cfg, seed);
      row.target = st.id;
      row.lambda = st.minimal_depth;
      row.episode = e;
      rows.push_back(std::move(row));
    }
  }
  return make_report(std::move(rows));
}

struct ModalCircuit {
  std::vector<std::string> circuit;  // empty when no episode succeeded
  double probability_pct = 0.0;
  std::size_t successes = 0;
  std::size_t episodes = 0;
};

/// Most frequent successful circuit over `episodes` runs and its share of
/// all runs in percent. Ties go to the lexicographically smallest circuit
/// text.
inline ModalCircuit modal_circuit(Agent& agent, const NamedState& target, std::size_t episodes,
                                  std::uint64_t master_seed, std::size_t max_length = 30,
                                  double sfe = 0.001) {
  EnvConfig cfg;
  cfg.n = 2;
  cfg.sfe = sfe;
  cfg.target_mode = FixedTarget{target.state(), max_length};
  std::map<std::string, std::size_t> counts;
  ModalCircuit out;
  out.episodes = episodes;
  for (std::size_t e = 0; e < episodes; ++e) {
    const auto row = detail::run_bench_episode(agent, cfg, derive_seed(master_seed, e));
    if (!row.success) continue;
    ++counts[row.circuit];
    ++out.successes;
  }
  const std::string* best = nullptr;
  std::size_t best_count = 0;
  for (const auto& [text, count] : counts) {  // std::map iterates in lexicographic order
    if (count > best_count) {
      best = &text;
      best_count = count;
    }
  }
  if (best == nullptr) return out;
  std::size_t start = 0;
  while (start <= best->size()) {
    const auto semi = best->find(';', start);
    const auto end = semi == std::string::npos ? best->size() : semi;
    if (end > start) out.circuit.push_back(best->substr(start, end - start));
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  out.probability_pct = 100.0 * static_cast<double>(best_count) / static_cast<double>(episodes);
  return out;
}

inline nlohmann::json to_json(const BenchGroup& g) {
  nlohmann::json j = {{"agent", g.agent},
                      {"target", g.target},
                      {"episodes", g.episodes},
                      {"mean_n_g", g.mean_gates},
                      {"std_n_g", g.std_gates},
                      {"success_rate", g.success_rate}};
  if (g.lambda_pct) {
    j["lambda_mean"] = g.lambda_pct->mean;
    j["lambda_std"] = g.lambda_pct->std;
  }
  return j;
}

inline nlohmann::json to_json(const BenchReport& r) {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : r.groups) groups.push_back(to_json(g));
  return {{"groups", groups}, {"episodes", r.rows.size()}};
}

inline constexpr const char* kBenchCsvHeader =
    "agent,target,lambda,episode,seed,L,outcome,n_g,final_fidelity,circuit";

inline std::string to_csv_row(const BenchRow& r) {
  std::string s = r.agent + ',' + r.target + ',';
  s += r.lambda ? std::to_string(*r.lambda) : std::string();
  s += ',' + std::to_string(r.episode) + ',' + std::to_string(r.seed) + ',' +
       std::to_string(r.max_length);
  s += r.success ? ",success," : ",truncated,";
  s += std::to_string(r.gates_used) + ',' + format_double(r.final_fidelity) + ',' + r.circuit;
  return s;
}

}  // namespace qcsyn
