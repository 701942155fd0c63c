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
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qcsyn/environment.hpp"
#include "qcsyn/episode_log.hpp"
#include "qcsyn/gateset.hpp"
#include "qcsyn/oracle.hpp"
#include "qcsyn/policy.hpp"
#include "qcsyn/rng.hpp"

namespace qcsyn {

/// Anything that picks actions from observations. Agents draw randomness
/// only from the Rng they are handed.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string name() const = 0;
  /// Called with the first observation of every episode.
  virtual void begin_episode(const Observation& /*first*/) {}
  virtual Action act(const Observation& obs, Rng& rng) = 0;
};

/// Uniform over both action heads, no learning.
class RandomAgent final : public Agent {
 public:
  RandomAgent(const GateSet& gateset, std::size_t n) : space_(gateset, n) {}
  std::string name() const override { return "random"; }
  Action act(const Observation&, Rng& rng) override { return space_.sample_uniform(rng); }

 private:
  ActionSpace space_;
};

inline std::unique_ptr<Agent> random_policy(const GateSet& gateset, std::size_t n) {
  return std::make_unique<RandomAgent>(gateset, n);
}

/// Samples (or takes the argmax of) the two categorical heads of a policy
/// network.
class PolicyAgent final : public Agent {
 public:
  explicit PolicyAgent(PolicyParams params, bool greedy = false, std::string name = "ppo")
      : params_(std::move(params)), greedy_(greedy), name_(std::move(name)) {}

  std::string name() const override { return name_; }

  Action act(const Observation& obs, Rng& rng) override {
    const auto out = policy_forward(params_, obs.values);
    const auto pg = softmax(out.gate_logits);
    const auto pp = softmax(out.perm_logits);
    if (greedy_) {
      return {argmax(pg), argmax(pp)};
    }
    Action a;
    a.gate_index = sample_categorical(pg, rng);
    a.perm_index = sample_categorical(pp, rng);
    return a;
  }

  const PolicyParams& params() const noexcept { return params_; }

 private:
  static std::size_t argmax(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (v[i] > v[best]) best = i;
    }
    return best;
  }

  PolicyParams params_;
  bool greedy_;
  std::string name_;
};

/// Plays a fixed action list, then repeats its last action.
class ScriptedAgent final : public Agent {
 public:
  explicit ScriptedAgent(std::vector<Action> script, std::string name = "scripted")
      : script_(std::move(script)), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  void begin_episode(const Observation&) override { pos_ = 0; }
  Action act(const Observation&, Rng&) override {
    if (script_.empty()) return Action{};
    const Action a = script_[std::min(pos_, script_.size() - 1)];
    ++pos_;
    return a;
  }

 private:
  std::vector<Action> script_;
  std::size_t pos_ = 0;
  std::string name_;
};

/// Reads the target from the first observation, finds a minimal circuit
/// with the brute-force oracle and replays it. When the circuit is empty
/// (the target is the ground state) or exhausted, it applies I on the first
/// permutation, which preserves the state.
class OracleAgent final : public Agent {
 public:
  OracleAgent(const GateSet& gateset, std::size_t n, std::size_t max_depth = 8,
              OracleOptions options = {})
      : space_(gateset, n), max_depth_(max_depth), options_(options) {}

  std::string name() const override { return "oracle"; }

  void begin_episode(const Observation& first) override {
    pos_ = 0;
    auto target = QuantumState::normalized(decode_observation(first).second);
    const auto key = canonical_key(target);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      auto result = min_depth_search(target, space_, max_depth_, options_);
      it = cache_.emplace(key, std::move(result.circuit)).first;
    }
    circuit_ = &it->second;
  }

  Action act(const Observation&, Rng&) override {
    if (circuit_ == nullptr || pos_ >= circuit_->size()) {
      ++pos_;
      return Action{space_.gateset().find("I") < space_.gate_count() ? space_.gateset().find("I")
                                                                     : 0,
                    0};
    }
    return (*circuit_)[pos_++];
  }

 private:
  ActionSpace space_;
  std::size_t max_depth_;
  OracleOptions options_;
  std::unordered_map<CanonicalKey, std::vector<Action>, CanonicalKeyHash> cache_;
  const std::vector<Action>* circuit_ = nullptr;
  std::size_t pos_ = 0;
};

/// Summary of one finished episode.
struct EpisodeSummary {
  bool success = false;
  std::size_t steps = 0;
  std::size_t gates_used = 0;
  double total_reward = 0.0;
  double final_fidelity = 0.0;
  std::vector<Action> actions;
};

/// Resets `env` (drawing a target from `env_rng` in random-target mode) and
/// lets `agent` act until the episode ends.
inline EpisodeSummary run_episode(Environment& env, Agent& agent, Rng& env_rng, Rng& agent_rng) {
  Observation obs = env.reset(env_rng);
  agent.begin_episode(obs);
  StepResult r;
  do {
    r = env.step(agent.act(obs, agent_rng));
    obs = std::move(r.observation);
  } while (!r.done());
  EpisodeSummary s;
  s.success = r.status == EpisodeStatus::Success;
  s.steps = env.steps();
  s.gates_used = *r.info.gates_used;
  s.total_reward = env.total_reward();
  s.final_fidelity = r.info.fidelity;
  s.actions = env.actions_taken();
  return s;
}

}  // namespace qcsyn
