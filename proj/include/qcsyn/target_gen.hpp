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
#include <stdexcept>
#include <string>
#include <vector>

#include "qcsyn/gateset.hpp"
#include "qcsyn/quantum_state.hpp"
#include "qcsyn/rng.hpp"

namespace qcsyn {

struct TargetGenOptions {
  /// A gate is accepted only if 1 - F >= change_epsilon against every state
  /// visited so far.
  double change_epsilon = 0.001;
  /// Total samples allowed before giving up. 0 selects 10 * lambda * 2|G|.
  std::size_t attempt_cap = 0;
};

struct GenerationTrace {
  QuantumState target;
  std::vector<Action> accepted_actions;
  std::vector<QuantumState> visited_states;
  std::size_t restarts = 0;
  std::size_t samples = 0;
};

class TargetGenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Random target of circuit depth `lambda`.
///
/// Starting from |0...0>, uniform actions are sampled and applied
/// tentatively. A candidate is kept only if it differs (1 - F >= epsilon)
/// from every state visited so far, the initial state included. After 2|G|
/// consecutive rejections the whole generation restarts from the ground
/// state. Rejected samples still consume random numbers. A gate wider than
/// the register counts as a rejection.
inline GenerationTrace generate_target(const ActionSpace& space, std::size_t lambda, Rng& rng,
                                       const TargetGenOptions& options = {}) {
  if (lambda == 0) throw std::invalid_argument("generate_target: lambda must be >= 1");
  if (!(options.change_epsilon > 0.0 && options.change_epsilon < 1.0)) {
    throw std::invalid_argument("generate_target: change_epsilon must be in (0, 1)");
  }
  const std::size_t restart_after = 2 * space.gate_count();
  const std::size_t cap =
      options.attempt_cap != 0 ? options.attempt_cap : 10 * lambda * restart_after;

  const QuantumState initial = ground_state(space.qubits());
  std::vector<Action> accepted;
  std::vector<QuantumState> visited{initial};
  std::size_t failures = 0;
  std::size_t restarts = 0;
  std::size_t samples = 0;

  while (accepted.size() < lambda) {
    if (samples == cap) {
      throw TargetGenerationError(
          "generate_target: no depth-" + std::to_string(lambda) + " target after " +
          std::to_string(cap) + " samples (" + std::to_string(restarts) +
          " restarts, best depth " + std::to_string(accepted.size()) + ")");
    }
    ++samples;
    const Action a = space.sample_uniform(rng);
    bool changes = space.applicable(a);
    const QuantumState candidate = changes ? space.apply(visited.back(), a) : visited.back();
    for (const auto& prior : visited) {
      if (!changes) break;
      if (1.0 - fidelity_pure(candidate, prior) < options.change_epsilon) {
        changes = false;
        break;
      }
    }
    if (changes) {
      accepted.push_back(a);
      visited.push_back(candidate);
      failures = 0;
      continue;
    }
    if (++failures == restart_after) {
      accepted.clear();
      visited.assign(1, initial);
      failures = 0;
      ++restarts;
    }
  }
  QuantumState target = visited.back();
  return {std::move(target), std::move(accepted), std::move(visited), restarts, samples};
}

inline GenerationTrace generate_target(std::size_t n, std::size_t lambda, const GateSet& gateset,
                                       Rng& rng, const TargetGenOptions& options = {}) {
  return generate_target(ActionSpace(gateset, n), lambda, rng, options);
}

}  // namespace qcsyn
