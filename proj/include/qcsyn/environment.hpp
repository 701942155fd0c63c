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

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qcsyn/gateset.hpp"
#include "qcsyn/quantum_state.hpp"
#include "qcsyn/rng.hpp"
#include "qcsyn/target_gen.hpp"

namespace qcsyn {

enum class RewardKind { StepPenalty, Distance };

inline std::string_view to_string(RewardKind k) noexcept {
  return k == RewardKind::StepPenalty ? "step_penalty" : "distance";
}

inline RewardKind parse_reward_kind(std::string_view s) {
  if (s == "step_penalty" || s == "step-penalty") return RewardKind::StepPenalty;
  if (s == "distance") return RewardKind::Distance;
  throw std::invalid_argument("unknown reward kind '" + std::string(s) +
                              "' (expected step_penalty or distance)");
}

/// Step-penalty reward: L - l - 1 on success, -1 otherwise.
inline double reward_step_penalty(double fidelity, std::size_t l, std::size_t max_length,
                                  double sfe) {
  if (1.0 - fidelity < sfe) {
    return static_cast<double>(max_length) - static_cast<double>(l) - 1.0;
  }
  return -1.0;
}

/// Distance reward: as the step penalty, except that the truncation step
/// (l == L without success) is penalized by floor(L/2) * (1 - F).
inline double reward_distance(double fidelity, std::size_t l, std::size_t max_length,
                              double sfe) {
  if (1.0 - fidelity < sfe) {
    return static_cast<double>(max_length) - static_cast<double>(l) - 1.0;
  }
  if (l == max_length) {
    return -static_cast<double>(max_length / 2) * (1.0 - fidelity);
  }
  return -1.0;
}

inline double compute_reward(RewardKind kind, double fidelity, std::size_t l,
                             std::size_t max_length, double sfe) {
  return kind == RewardKind::StepPenalty ? reward_step_penalty(fidelity, l, max_length, sfe)
                                         : reward_distance(fidelity, l, max_length, sfe);
}

struct FixedTarget {
  QuantumState state;
  std::size_t max_length;
};

struct RandomTarget {
  std::size_t lambda;
};

struct EnvConfig {
  std::size_t n = 2;
  GateSet gateset = clifford_t();
  std::variant<RandomTarget, FixedTarget> target_mode = RandomTarget{5};
  double sfe = 0.001;
  RewardKind reward = RewardKind::StepPenalty;
  /// Forwarded to target generation.
  double change_epsilon = 0.001;

  void validate() const {
    if (n == 0) throw std::invalid_argument("EnvConfig: n must be >= 1");
    if (!(sfe > 0.0 && sfe < 1.0)) throw std::invalid_argument("EnvConfig: sfe must be in (0, 1)");
    if (const auto* r = std::get_if<RandomTarget>(&target_mode)) {
      if (r->lambda < 1) throw std::invalid_argument("EnvConfig: lambda must be >= 1");
    } else {
      const auto& f = std::get<FixedTarget>(target_mode);
      if (f.max_length < 1) throw std::invalid_argument("EnvConfig: max length must be >= 1");
      if (f.state.qubits() != n) {
        throw std::invalid_argument("EnvConfig: target has " + std::to_string(f.state.qubits()) +
                                    " qubits, environment has " + std::to_string(n));
      }
    }
  }

  /// L: fixed, or 2 * lambda for random targets.
  std::size_t max_length() const {
    if (const auto* r = std::get_if<RandomTarget>(&target_mode)) return 2 * r->lambda;
    return std::get<FixedTarget>(target_mode).max_length;
  }

  std::optional<std::size_t> lambda() const {
    if (const auto* r = std::get_if<RandomTarget>(&target_mode)) return r->lambda;
    return std::nullopt;
  }
};

/// [Re(v); Im(v); Re(target); Im(target)], length 2^(n+2).
struct Observation {
  std::vector<double> values;

  std::size_t qubits() const noexcept {
    std::size_t n = 0;
    while ((std::size_t{4} << n) < values.size()) ++n;
    return n;
  }
};

inline Observation encode_observation(const QuantumState& current, const QuantumState& target) {
  if (current.qubits() != target.qubits()) {
    throw std::invalid_argument("encode_observation: qubit counts differ");
  }
  const std::size_t d = current.dimension();
  Observation obs;
  obs.values.resize(4 * d);
  const auto v = current.amplitudes();
  const auto t = target.amplitudes();
  for (std::size_t i = 0; i < d; ++i) {
    obs.values[i] = v[i].real();
    obs.values[d + i] = v[i].imag();
    obs.values[2 * d + i] = t[i].real();
    obs.values[3 * d + i] = t[i].imag();
  }
  return obs;
}

/// Splits an observation back into (current, target) amplitude vectors.
inline std::pair<std::vector<Complex>, std::vector<Complex>> decode_observation(
    const Observation& obs) {
  if (obs.values.size() < 8 || obs.values.size() % 4 != 0) {
    throw std::invalid_argument("decode_observation: bad observation length");
  }
  const std::size_t d = obs.values.size() / 4;
  std::vector<Complex> cur(d), tgt(d);
  for (std::size_t i = 0; i < d; ++i) {
    cur[i] = {obs.values[i], obs.values[d + i]};
    tgt[i] = {obs.values[2 * d + i], obs.values[3 * d + i]};
  }
  return {std::move(cur), std::move(tgt)};
}

enum class EpisodeStatus { Running, Success, Truncated };

inline std::string_view to_string(EpisodeStatus s) noexcept {
  switch (s) {
    case EpisodeStatus::Running: return "running";
    case EpisodeStatus::Success: return "success";
    case EpisodeStatus::Truncated: return "truncated";
  }
  return "running";
}

struct StepInfo {
  double fidelity = 0.0;
  std::size_t l = 0;
  /// Set once the episode ends.
  std::optional<std::size_t> gates_used;
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  EpisodeStatus status = EpisodeStatus::Running;
  StepInfo info;

  bool done() const noexcept { return status != EpisodeStatus::Running; }
};

/// One episode at a time of the circuit-building MDP. Not thread-safe; use
/// one instance per worker.
class Environment {
 public:
  explicit Environment(EnvConfig config)
      : config_((config.validate(), std::move(config))),
        space_(config_.gateset, config_.n),
        current_(ground_state(config_.n)),
        target_(std::holds_alternative<FixedTarget>(config_.target_mode)
                    ? std::get<FixedTarget>(config_.target_mode).state
                    : ground_state(config_.n)) {}

  /// Starts a new episode. In random-target mode a fresh target is drawn
  /// from `rng`; a fixed target is reused. No success check happens here,
  /// even when the target equals the initial state.
  Observation reset(Rng& rng) {
    if (const auto* r = std::get_if<RandomTarget>(&config_.target_mode)) {
      TargetGenOptions opts;
      opts.change_epsilon = config_.change_epsilon;
      auto trace = generate_target(space_, r->lambda, rng, opts);
      target_ = std::move(trace.target);
      target_circuit_ = std::move(trace.accepted_actions);
    }
    current_ = ground_state(config_.n);
    actions_.clear();
    status_ = EpisodeStatus::Running;
    started_ = true;
    total_reward_ = 0.0;
    fidelity_ = fidelity_pure(current_, target_);
    return observation();
  }

  StepResult step(const Action& action) {
    if (!started_) throw std::logic_error("Environment::step: reset() must be called first");
    if (status_ != EpisodeStatus::Running) {
      throw std::logic_error("Environment::step: episode already finished (" +
                             std::string(to_string(status_)) + "); call reset()");
    }
    if (!space_.contains(action)) {
      throw std::out_of_range("Environment::step: action (" + std::to_string(action.gate_index) +
                              ", " + std::to_string(action.perm_index) + ") out of bounds");
    }
    if (space_.applicable(action)) current_ = space_.apply(current_, action);
    actions_.push_back(action);
    const std::size_t l = actions_.size();
    const std::size_t max_len = config_.max_length();
    fidelity_ = fidelity_pure(current_, target_);

    StepResult result;
    if (1.0 - fidelity_ < config_.sfe) {
      status_ = EpisodeStatus::Success;
    } else if (l >= max_len) {
      status_ = EpisodeStatus::Truncated;
    }
    result.reward = compute_reward(config_.reward, fidelity_, l, max_len, config_.sfe);
    total_reward_ += result.reward;
    result.status = status_;
    result.info.fidelity = fidelity_;
    result.info.l = l;
    if (status_ != EpisodeStatus::Running) {
      result.info.gates_used = status_ == EpisodeStatus::Success ? l : max_len;
    }
    result.observation = observation();
    return result;
  }

  Observation observation() const { return encode_observation(current_, target_); }

  const EnvConfig& config() const noexcept { return config_; }
  const ActionSpace& action_space() const noexcept { return space_; }
  std::size_t max_length() const { return config_.max_length(); }
  std::optional<std::size_t> lambda() const { return config_.lambda(); }
  std::size_t observation_size() const noexcept { return std::size_t{4} << config_.n; }

  const QuantumState& current() const noexcept { return current_; }
  const QuantumState& target() const noexcept { return target_; }
  /// Witness circuit of the current random target; empty for fixed targets.
  const std::vector<Action>& target_circuit() const noexcept { return target_circuit_; }
  const std::vector<Action>& actions_taken() const noexcept { return actions_; }
  std::size_t steps() const noexcept { return actions_.size(); }
  EpisodeStatus status() const noexcept { return status_; }
  double fidelity() const noexcept { return fidelity_; }
  double total_reward() const noexcept { return total_reward_; }

 private:
  EnvConfig config_;
  ActionSpace space_;
  QuantumState current_;
  QuantumState target_;
  std::vector<Action> target_circuit_;
  std::vector<Action> actions_;
  EpisodeStatus status_ = EpisodeStatus::Running;
  bool started_ = false;
  double fidelity_ = 0.0;
  double total_reward_ = 0.0;
};

}  // namespace qcsyn
