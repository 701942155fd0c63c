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

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qcsyn/agent.hpp"
#include "qcsyn/bench.hpp"
#include "qcsyn/config.hpp"
#include "qcsyn/environment.hpp"
#include "qcsyn/episode_log.hpp"
#include "qcsyn/metrics.hpp"
#include "qcsyn/oracle.hpp"
#include "qcsyn/policy.hpp"
#include "qcsyn/ppo.hpp"
#include "qcsyn/run.hpp"
#include "qcsyn/target_gen.hpp"

namespace qcsyn::cli {

namespace fs = std::filesystem;
using nlohmann::json;

/// Flag values collected by CLI11 before they are merged into a RunConfig.
struct Overrides {
  std::string config;
  std::vector<std::uint64_t> seeds;
  std::optional<std::string> output_dir;
  std::vector<std::string> sets;
  bool json_out = false;
  bool plot_data = false;

  std::optional<std::size_t> n, lambda, max_length, total_steps, episodes, targets, max_len;
  std::optional<std::string> target_file, reward, level, agent;
  std::optional<double> sfe, learning_rate;
  std::vector<std::size_t> sweep_lambdas;
  std::vector<std::string> sweep_rewards, states, checkpoints;
};

inline RunConfig build_config(const Overrides& o) {
  RunConfig cfg;
  if (!o.config.empty() && o.config != "default") {
    apply_config_text(cfg, read_text_file(o.config));
  }
  if (const char* env_dir = std::getenv("QCSYN_OUTPUT_DIR"); env_dir && *env_dir) {
    cfg.output_dir = env_dir;
  }
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got " + kv);
    set_config_value(cfg, detail::trim(kv.substr(0, eq)), kv.substr(eq + 1));
  }
  if (o.n) cfg.env.n = *o.n;
  if (o.lambda) cfg.env.lambda = *o.lambda;
  if (o.target_file) cfg.env.target_file = *o.target_file;
  if (o.max_length) cfg.env.max_length = *o.max_length;
  if (o.sfe) cfg.env.sfe = *o.sfe;
  if (o.reward) cfg.env.reward = *o.reward;
  if (o.learning_rate) cfg.ppo.learning_rate = *o.learning_rate;
  if (o.total_steps) cfg.ppo.total_steps = *o.total_steps;
  if (o.episodes) cfg.bench.episodes = *o.episodes;
  if (o.targets) cfg.bench.targets = *o.targets;
  if (o.max_len) cfg.bench.max_len = *o.max_len;
  if (o.level) cfg.bench.level = *o.level;
  if (o.agent) cfg.bench.agent = *o.agent;
  if (!o.states.empty()) cfg.bench.states = o.states;
  if (!o.checkpoints.empty()) {
    cfg.bench.checkpoints = o.checkpoints;
    if (!o.agent) cfg.bench.agent = "checkpoint";
  }
  if (!o.sweep_lambdas.empty()) cfg.sweep.lambdas = o.sweep_lambdas;
  if (!o.sweep_rewards.empty()) cfg.sweep.rewards = o.sweep_rewards;
  if (!o.seeds.empty()) cfg.seeds = o.seeds;
  if (o.output_dir) cfg.output_dir = *o.output_dir;
  validate_config(cfg);
  return cfg;
}

inline EnvConfig make_env_config(const RunConfig& cfg) {
  EnvConfig env;
  env.n = cfg.env.n;
  env.sfe = cfg.env.sfe;
  env.reward = parse_reward_kind(cfg.env.reward);
  env.change_epsilon = cfg.env.change_epsilon;
  if (cfg.env.target_file) {
    auto state = state_from_json(json::parse(read_text_file(*cfg.env.target_file)));
    env.target_mode = FixedTarget{std::move(state), cfg.env.max_length};
  } else {
    env.target_mode = RandomTarget{cfg.effective_lambda()};
  }
  return env;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline std::string config_echo(const RunConfig& cfg) {
  return "# config_hash = " + experiment_hash(cfg) + "\n" + print_config(cfg);
}

struct Context {
  std::ostream& out;
  std::ostream& err;
};

// ---------------------------------------------------------------------------
// gen-target

inline int cmd_gen_target(const RunConfig& cfg, Context& ctx) {
  if (cfg.env.target_file) throw ConfigError("gen-target needs env.lambda, not a target file");
  const ActionSpace space(clifford_t(), cfg.env.n);
  json all = json::array();
  for (const auto seed : cfg.seeds) {
    Rng rng(derive_seed(seed, 0));
    TargetGenOptions opts;
    opts.change_epsilon = cfg.env.change_epsilon;
    const auto trace = generate_target(space, cfg.effective_lambda(), rng, opts);
    all.push_back({{"n", cfg.env.n},
                   {"lambda", cfg.effective_lambda()},
                   {"seed", seed},
                   {"restarts", trace.restarts},
                   {"circuit", space.format_circuit(trace.accepted_actions)},
                   {"amplitudes", state_to_json(trace.target)}});
  }
  ctx.out << (all.size() == 1 ? all[0] : all).dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainSeedResult {
  std::string run_id;
  MeanStd trailing;
  std::size_t window = 0;
  std::size_t episodes = 0;
};

inline TrainSeedResult train_one_seed(const RunConfig& cfg, std::uint64_t seed) {
  const EnvConfig env = make_env_config(cfg);
  PPOConfig ppo = cfg.ppo;
  ppo.seed = seed;
  const std::string id = run_id("train", cfg, seed);
  const fs::path root = cfg.output_dir;
  const fs::path dir = root / id;
  TrainOptions opts;
  opts.run_id = id;
  opts.on_checkpoint = [&](const PolicyParams& p, std::size_t step) {
    json j = params_to_json(p);
    j["config_hash"] = experiment_hash(cfg);
    j["step"] = step;
    write_artifact(root, dir / "checkpoints" / ("step-" + std::to_string(step) + ".json"),
                   j.dump() + "\n");
  };
  const auto result = train(env, ppo, opts);

  std::ostringstream csv;
  write_episode_csv(csv, result.episodes);
  write_artifact(root, dir / "config.txt", config_echo(cfg));
  write_artifact(root, dir / "episodes.csv", csv.str());

  json ckpt = params_to_json(result.params);
  ckpt["config_hash"] = experiment_hash(cfg);
  ckpt["config"] = print_config(cfg);
  ckpt["step"] = ppo.total_steps;
  write_artifact(root, dir / "checkpoint.json", ckpt.dump() + "\n");

  TrainSeedResult r;
  r.run_id = id;
  r.episodes = result.episodes.size();
  json metrics = {{"config_hash", experiment_hash(cfg)},
                  {"run_id", id},
                  {"seed", seed},
                  {"episodes", result.episodes.size()},
                  {"steps", ppo.total_steps}};
  const auto outcomes = result.outcomes();
  std::size_t wins = 0;
  for (const auto& o : outcomes) wins += o.success ? 1 : 0;
  metrics["success_rate"] =
      outcomes.empty() ? 0.0 : static_cast<double>(wins) / static_cast<double>(outcomes.size());
  if (env.lambda() && !outcomes.empty()) {
    r.window = std::min(kDefaultMetricWindow, outcomes.size());
    r.trailing = trailing_mean(outcomes, r.window);
    metrics["trailing_lambda_mean"] = r.trailing.mean;
    metrics["trailing_lambda_std"] = r.trailing.std;
    metrics["window"] = r.window;
  }
  write_artifact(root, dir / "metrics.json", dump(metrics));
  return r;
}

inline int cmd_train(const RunConfig& base, Context& ctx, bool json_out, bool plot_data) {
  std::vector<std::string> rewards = base.sweep.rewards;
  if (rewards.empty()) rewards.push_back(base.env.reward);
  std::vector<std::optional<std::size_t>> lambdas;
  for (auto l : base.sweep.lambdas) lambdas.emplace_back(l);
  if (lambdas.empty()) lambdas.push_back(base.env.lambda);
  if (!base.sweep.lambdas.empty() && base.env.target_file) {
    throw ConfigError("sweep.lambdas cannot be combined with env.target_file");
  }

  json report = json::array();
  bool partial = false;
  for (const auto& reward : rewards) {
    for (const auto& lambda : lambdas) {
      RunConfig cfg = base;
      cfg.sweep = {};
      cfg.env.reward = reward;
      cfg.env.lambda = lambda;
      std::map<std::uint64_t, TrainSeedResult> per_seed;
      const auto summary = run_multi_seed(cfg, [&](std::uint64_t seed) -> std::optional<double> {
        auto r = train_one_seed(cfg, seed);
        per_seed[seed] = r;
        if (r.window == 0) return std::nullopt;
        return r.trailing.mean;
      });
      partial = partial || summary.partial;
      json s = to_json(summary);
      s["command"] = "train";
      s["config_hash"] = experiment_hash(cfg);
      s["n"] = cfg.env.n;
      s["reward"] = reward;
      if (!cfg.env.target_file) s["lambda"] = cfg.effective_lambda();
      s["window"] = kDefaultMetricWindow;
      write_artifact(cfg.output_dir,
                     fs::path(cfg.output_dir) / ("train-" + experiment_hash(cfg) + "-summary.json"),
                     dump(s));
      report.push_back(s);
      if (!json_out) {
        ctx.out << "train n=" << cfg.env.n << " reward=" << reward;
        if (!cfg.env.target_file) ctx.out << " lambda=" << cfg.effective_lambda();
        ctx.out << " seeds=" << cfg.seeds.size();
        if (summary.metric) {
          ctx.out << "  trailing Lambda = " << format_double(summary.metric->mean) << " +- "
                  << format_double(summary.metric->std) << " %";
        }
        if (summary.partial) ctx.out << "  (partial: some seeds failed)";
        ctx.out << '\n';
        for (const auto& o : summary.seeds) {
          if (!o.ok) ctx.err << "  seed " << o.seed << " failed: " << o.error << '\n';
        }
      }
    }
  }
  if (plot_data) {
    // Reward comparison (both reward kinds) and the Lambda-vs-lambda
    // landscape share one row layout.
    std::string reward_csv = "reward,n,lambda,seeds,lambda_mean,lambda_std\n";
    std::string landscape_csv = "n,lambda,reward,seeds,lambda_mean,lambda_std\n";
    for (const auto& s : report) {
      if (!s.contains("mean") || !s.contains("lambda")) continue;
      const auto seeds = std::to_string(s["seeds"].size());
      const auto mean = format_double(s["mean"].get<double>());
      const auto sd = format_double(s["std"].get<double>());
      const auto n = std::to_string(s["n"].get<std::size_t>());
      const auto lam = std::to_string(s["lambda"].get<std::size_t>());
      const auto rew = s["reward"].get<std::string>();
      reward_csv += rew + ',' + n + ',' + lam + ',' + seeds + ',' + mean + ',' + sd + '\n';
      landscape_csv += n + ',' + lam + ',' + rew + ',' + seeds + ',' + mean + ',' + sd + '\n';
    }
    RunConfig tag = base;
    const fs::path dir = fs::path(base.output_dir) / ("train-" + experiment_hash(tag) + "-plots");
    write_artifact(base.output_dir, dir / "reward_comparison.csv", reward_csv);
    write_artifact(base.output_dir, dir / "lambda_landscape.csv", landscape_csv);
    if (!json_out) ctx.out << "plot data: " << dir.string() << '\n';
  }
  if (json_out) ctx.out << report.dump(2) << '\n';
  return partial ? 1 : 0;
}

// ---------------------------------------------------------------------------
// agents for eval / bench

inline std::vector<std::unique_ptr<Agent>> make_agents(const RunConfig& cfg) {
  std::vector<std::unique_ptr<Agent>> agents;
  const GateSet gs = clifford_t();
  if (cfg.bench.agent == "random") {
    agents.push_back(std::make_unique<RandomAgent>(gs, cfg.env.n));
  } else if (cfg.bench.agent == "oracle") {
    agents.push_back(std::make_unique<OracleAgent>(gs, cfg.env.n));
  } else {
    if (cfg.bench.checkpoints.empty()) {
      throw ConfigError("bench.agent = checkpoint needs at least one --checkpoint");
    }
    for (const auto& path : cfg.bench.checkpoints) {
      auto params = params_from_json(json::parse(read_text_file(path)));
      const std::size_t expected_input = std::size_t{4} << cfg.env.n;
      if (params.shape().input != expected_input) {
        throw ConfigError("checkpoint " + path + " expects observations of length " +
                          std::to_string(params.shape().input) + ", environment produces " +
                          std::to_string(expected_input));
      }
      agents.push_back(
          std::make_unique<PolicyAgent>(std::move(params), false, fs::path(path).stem().string()));
    }
  }
  return agents;
}

inline void write_bench_outputs(const RunConfig& cfg, const std::string& command,
                                std::uint64_t seed, const BenchReport& rep, json extra) {
  const std::string id = run_id(command, cfg, seed);
  const fs::path dir = fs::path(cfg.output_dir) / id;
  json j = to_json(rep);
  j["config_hash"] = experiment_hash(cfg);
  j["run_id"] = id;
  j["seed"] = seed;
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  std::string csv = std::string(kBenchCsvHeader) + "\n";
  for (const auto& r : rep.rows) csv += to_csv_row(r) + "\n";
  write_artifact(cfg.output_dir, dir / "config.txt", config_echo(cfg));
  write_artifact(cfg.output_dir, dir / "report.json", dump(j));
  write_artifact(cfg.output_dir, dir / "episodes.csv", csv);
}

inline void print_groups(std::ostream& out, const BenchReport& rep) {
  for (const auto& g : rep.groups) {
    out << "  " << g.agent << " on " << g.target << ": n_g = " << format_double(g.mean_gates)
        << " +- " << format_double(g.std_gates) << ", success " << format_double(g.success_rate);
    if (g.lambda_pct) out << ", Lambda " << format_double(g.lambda_pct->mean) << " %";
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// eval

inline int cmd_eval(const RunConfig& cfg, const std::optional<std::string>& state_id, Context& ctx,
                    bool json_out) {
  if (cfg.bench.agent != "checkpoint") throw ConfigError("eval needs --checkpoint");
  json all = json::array();
  for (const auto seed : cfg.seeds) {
    auto agents = make_agents(cfg);
    std::vector<BenchRow> rows;
    for (auto& agent : agents) {
      if (state_id) {
        const auto st = named_state(*state_id);
        const std::vector<NamedState> one{st};
        auto rep = eval_named_states(*agent, one, cfg.bench.episodes, seed, cfg.env.max_length,
                                     cfg.env.sfe);
        rows.insert(rows.end(), rep.rows.begin(), rep.rows.end());
        continue;
      }
      const EnvConfig env = make_env_config(cfg);
      Environment e(env);
      Rng env_rng(derive_seed(seed, 0));
      Rng agent_rng(derive_seed(seed, 1));
      for (std::size_t ep = 0; ep < cfg.bench.episodes; ++ep) {
        const auto s = run_episode(e, *agent, env_rng, agent_rng);
        BenchRow row;
        row.agent = agent->name();
        row.target = cfg.env.target_file ? fs::path(*cfg.env.target_file).stem().string()
                                         : "lambda-" + std::to_string(cfg.effective_lambda());
        row.lambda = e.lambda();
        row.episode = ep;
        row.seed = seed;
        row.max_length = e.max_length();
        row.success = s.success;
        row.gates_used = s.gates_used;
        row.final_fidelity = s.final_fidelity;
        row.circuit = e.action_space().join_circuit(s.actions);
        rows.push_back(std::move(row));
      }
    }
    const auto rep = make_report(std::move(rows));
    write_bench_outputs(cfg, "eval", seed, rep, json::object());
    all.push_back(to_json(rep));
    if (!json_out) {
      ctx.out << "eval seed " << seed << '\n';
      print_groups(ctx.out, rep);
    }
  }
  if (json_out) ctx.out << all.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// bench-levels

inline int cmd_bench_levels(const RunConfig& cfg, Context& ctx, bool json_out, bool plot_data) {
  std::vector<EvaluationLevel> levels;
  if (cfg.bench.level == "all") {
    levels = evaluation_levels();
  } else {
    levels.push_back(evaluation_level(cfg.bench.level));
  }
  json all = json::array();
  std::string levels_csv = "seed,agent,level,targets,mean_n_g,std_n_g,success_rate\n";
  for (const auto seed : cfg.seeds) {
    auto agents = make_agents(cfg);
    std::vector<BenchRow> rows;
    for (const auto& level : levels) {
      for (auto& agent : agents) {
        // Every agent sees the same targets for a level.
        auto rep = eval_random_targets(*agent, level, cfg.bench.targets,
                                       derive_seed(seed, 16 + level.lambdas.front()),
                                       cfg.bench.max_len, cfg.env.sfe, cfg.env.n);
        rows.insert(rows.end(), rep.rows.begin(), rep.rows.end());
      }
    }
    const auto rep = make_report(std::move(rows));
    for (const auto& g : rep.groups) {
      levels_csv += std::to_string(seed) + ',' + g.agent + ',' + g.target + ',' +
                    std::to_string(g.episodes) + ',' + format_double(g.mean_gates) + ',' +
                    format_double(g.std_gates) + ',' + format_double(g.success_rate) + '\n';
    }
    write_bench_outputs(cfg, "bench-levels", seed, rep, {{"max_len", cfg.bench.max_len}});
    all.push_back(to_json(rep));
    if (!json_out) {
      ctx.out << "bench-levels seed " << seed << " (L = " << cfg.bench.max_len << ")\n";
      print_groups(ctx.out, rep);
    }
  }
  if (plot_data) {
    const fs::path p = fs::path(cfg.output_dir) /
                       ("bench-levels-" + experiment_hash(cfg) + "-plots") / "levels.csv";
    write_artifact(cfg.output_dir, p, levels_csv);
    if (!json_out) ctx.out << "plot data: " << p.string() << '\n';
  }
  if (json_out) ctx.out << all.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// bench-states

inline int cmd_bench_states(const RunConfig& cfg, Context& ctx, bool json_out, bool plot_data) {
  std::vector<NamedState> states;
  if (cfg.bench.states.empty()) {
    states = well_known_states();
  } else {
    for (const auto& id : cfg.bench.states) states.push_back(named_state(id));
  }
  json all = json::array();
  std::string states_csv =
      "seed,agent,state,minimal_depth,episodes,mean_n_g,std_n_g,success_rate\n";
  for (const auto seed : cfg.seeds) {
    auto agents = make_agents(cfg);
    std::vector<BenchRow> rows;
    json modal = json::array();
    for (auto& agent : agents) {
      auto rep = eval_named_states(*agent, states, cfg.bench.episodes, seed, cfg.bench.max_len,
                                   cfg.env.sfe);
      rows.insert(rows.end(), rep.rows.begin(), rep.rows.end());
      for (std::size_t i = 0; i < states.size(); ++i) {
        const auto m = modal_circuit(*agent, states[i], cfg.bench.episodes, derive_seed(seed, 1000 + i),
                                     cfg.bench.max_len, cfg.env.sfe);
        modal.push_back({{"agent", agent->name()},
                         {"state", states[i].id},
                         {"circuit", m.circuit},
                         {"generation_probability", m.probability_pct}});
      }
    }
    const auto rep = make_report(std::move(rows));
    for (const auto& g : rep.groups) {
      const auto st = named_state(g.target);
      states_csv += std::to_string(seed) + ',' + g.agent + ',' + g.target + ',' +
                    std::to_string(st.minimal_depth) + ',' + std::to_string(g.episodes) + ',' +
                    format_double(g.mean_gates) + ',' + format_double(g.std_gates) + ',' +
                    format_double(g.success_rate) + '\n';
    }
    write_bench_outputs(cfg, "bench-states", seed, rep,
                        {{"modal_circuits", modal}, {"max_len", cfg.bench.max_len}});
    json j = to_json(rep);
    j["modal_circuits"] = modal;
    all.push_back(j);
    if (!json_out) {
      ctx.out << "bench-states seed " << seed << " (L = " << cfg.bench.max_len << ")\n";
      print_groups(ctx.out, rep);
    }
  }
  if (plot_data) {
    const fs::path p = fs::path(cfg.output_dir) /
                       ("bench-states-" + experiment_hash(cfg) + "-plots") / "states.csv";
    write_artifact(cfg.output_dir, p, states_csv);
    if (!json_out) ctx.out << "plot data: " << p.string() << '\n';
  }
  if (json_out) ctx.out << all.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// oracle

struct OracleArgs {
  std::optional<std::string> state;
  std::optional<std::string> amplitudes_file;
  std::optional<std::string> amplitudes;
  std::size_t max_depth = 8;
  bool no_dedup = false;
};

inline int cmd_oracle(const RunConfig& cfg, const OracleArgs& a, Context& ctx) {
  const int given = (a.state ? 1 : 0) + (a.amplitudes_file ? 1 : 0) + (a.amplitudes ? 1 : 0);
  if (given != 1) {
    throw ConfigError("oracle: give exactly one of --state, --amplitudes-file, --amplitudes");
  }
  std::optional<QuantumState> target;
  if (a.state) {
    target = named_state(*a.state).state();
  } else if (a.amplitudes_file) {
    target = state_from_json(json::parse(read_text_file(*a.amplitudes_file)));
  } else {
    target = state_from_json(json::parse(*a.amplitudes));
  }
  const ActionSpace space(clifford_t(), target->qubits());
  OracleOptions opts;
  opts.sfe = cfg.env.sfe;
  opts.dedup = !a.no_dedup;
  const auto result = min_depth_search(*target, space, a.max_depth, opts);
  json j = {{"depth", result.min_depth ? json(*result.min_depth) : json(nullptr)},
            {"found", result.found()},
            {"circuit", space.format_circuit(result.circuit)},
            {"states_explored", result.states_explored},
            {"frontier_sizes", result.frontier_sizes}};
  ctx.out << j.dump(2) << '\n';
  return result.found() ? 0 : 3;
}

// ---------------------------------------------------------------------------

/// Entry point shared by the qcsyn binary and the tests.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"qcsyn: reinforcement-learning environment and tools for Clifford+T state "
               "preparation"};
  app.require_subcommand(1);
  Overrides o;
  OracleArgs oracle_args;
  std::optional<std::string> eval_state;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Config file, or 'default'");
    sub->add_option("--seed", o.seeds, "Seed (repeatable)")->take_all();
    sub->add_option("--output-dir", o.output_dir, "Directory for run artifacts");
    sub->add_option("--set", o.sets, "Override a config key: key=value (repeatable)");
    sub->add_flag("--json", o.json_out, "Print machine-readable JSON");
    sub->add_option("--n", o.n, "Qubit count");
    sub->add_option("--sfe", o.sfe, "Success threshold on 1 - F");
  };

  auto* gen = app.add_subcommand("gen-target", "Generate a random target state");
  common(gen);
  gen->add_option("--lambda", o.lambda, "Circuit depth");

  auto* train_cmd = app.add_subcommand("train", "Train PPO agents");
  common(train_cmd);
  train_cmd->add_option("--lambda", o.lambda, "Target circuit depth");
  train_cmd->add_option("--target-file", o.target_file, "Fixed target (JSON amplitudes)");
  train_cmd->add_option("--max-length", o.max_length, "Episode length for a fixed target");
  train_cmd->add_option("--reward", o.reward, "step_penalty or distance");
  train_cmd->add_option("--total-steps", o.total_steps, "Environment steps per run");
  train_cmd->add_option("--learning-rate", o.learning_rate, "SGD step size");
  train_cmd->add_option("--sweep-lambdas", o.sweep_lambdas, "Train one run set per lambda")
      ->delimiter(',');
  train_cmd->add_option("--sweep-rewards", o.sweep_rewards, "Train one run set per reward kind")
      ->delimiter(',');
  train_cmd->add_flag("--plot-data", o.plot_data, "Emit reward-comparison and landscape CSVs");

  auto* eval_cmd = app.add_subcommand("eval", "Run a trained agent");
  common(eval_cmd);
  eval_cmd->add_option("--checkpoint", o.checkpoints, "Checkpoint JSON")->required();
  eval_cmd->add_option("--lambda", o.lambda, "Random targets of this depth");
  eval_cmd->add_option("--target-file", o.target_file, "Fixed target (JSON amplitudes)");
  eval_cmd->add_option("--state", eval_state, "Named well-known state");
  eval_cmd->add_option("--max-length", o.max_length, "Episode length for fixed targets");
  eval_cmd->add_option("--episodes", o.episodes, "Episodes per seed");

  auto* levels_cmd = app.add_subcommand("bench-levels", "Evaluate on random targets per level");
  common(levels_cmd);
  levels_cmd->add_option("--agent", o.agent, "random, oracle or checkpoint");
  levels_cmd->add_option("--checkpoint", o.checkpoints, "Checkpoint JSON (repeatable)");
  levels_cmd->add_option("--level", o.level, "easy, medium, hard or all");
  levels_cmd->add_option("--targets", o.targets, "Targets per level");
  levels_cmd->add_option("--max-len", o.max_len, "Episode length");
  levels_cmd->add_flag("--plot-data", o.plot_data, "Emit the per-level CSV");

  auto* states_cmd = app.add_subcommand("bench-states", "Evaluate on the well-known states");
  common(states_cmd);
  states_cmd->add_option("--agent", o.agent, "random, oracle or checkpoint");
  states_cmd->add_option("--checkpoint", o.checkpoints, "Checkpoint JSON (repeatable)");
  states_cmd->add_option("--state", o.states, "Named state (repeatable; default all)");
  states_cmd->add_option("--episodes", o.episodes, "Episodes per state");
  states_cmd->add_option("--max-len", o.max_len, "Episode length");
  states_cmd->add_flag("--plot-data", o.plot_data, "Emit the per-state CSV");

  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force minimal circuit search");
  common(oracle_cmd);
  oracle_cmd->add_option("--state", oracle_args.state, "Named well-known state");
  oracle_cmd->add_option("--amplitudes-file", oracle_args.amplitudes_file, "Target JSON file");
  oracle_cmd->add_option("--amplitudes", oracle_args.amplitudes, "Target JSON text");
  oracle_cmd->add_option("--max-depth", oracle_args.max_depth, "Deepest layer to search");
  oracle_cmd->add_flag("--no-dedup", oracle_args.no_dedup, "Disable state deduplication");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  Context ctx{out, err};
  try {
    const RunConfig cfg = build_config(o);
    if (*gen) return cmd_gen_target(cfg, ctx);
    if (*train_cmd) return cmd_train(cfg, ctx, o.json_out, o.plot_data);
    if (*eval_cmd) return cmd_eval(cfg, eval_state, ctx, o.json_out);
    if (*levels_cmd) return cmd_bench_levels(cfg, ctx, o.json_out, o.plot_data);
    if (*states_cmd) return cmd_bench_states(cfg, ctx, o.json_out, o.plot_data);
    if (*oracle_cmd) return cmd_oracle(cfg, oracle_args, ctx);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace qcsyn::cli
