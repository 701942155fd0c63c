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
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_set>
#include <utility>
#include <vector>

#include "qcsyn/gateset.hpp"
#include "qcsyn/quantum_state.hpp"

namespace qcsyn {

/// Quantized, global-phase-normalized amplitudes. States equal up to a
/// global phase share a key.
struct CanonicalKey {
  std::vector<std::int64_t> components;

  friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;
};

struct CanonicalKeyHash {
  std::size_t operator()(const CanonicalKey& k) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto c : k.components) {
      h ^= static_cast<std::uint64_t>(c);
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

/// Rotates the first amplitude with magnitude above `tol` onto the positive
/// real axis, then rounds every component to a multiple of `grid`.
inline CanonicalKey canonical_key(const QuantumState& s, double tol = 1e-6, double grid = 1e-6) {
  const auto amps = s.amplitudes();
  Complex phase{1.0, 0.0};
  for (const auto& a : amps) {
    if (std::abs(a) > tol) {
      phase = std::conj(a) / std::abs(a);
      break;
    }
  }
  CanonicalKey key;
  key.components.reserve(2 * amps.size());
  for (const auto& a : amps) {
    const Complex r = a * phase;
    key.components.push_back(static_cast<std::int64_t>(std::llround(r.real() / grid)));
    key.components.push_back(static_cast<std::int64_t>(std::llround(r.imag() / grid)));
  }
  return key;
}

struct OracleOptions {
  double sfe = 0.001;
  bool dedup = true;
  double key_tol = 1e-6;
  double key_grid = 1e-6;
};

struct SearchResult {
  /// Absent when nothing within max_depth reaches the target.
  std::optional<std::size_t> min_depth;
  std::vector<Action> circuit;
  std::size_t states_explored = 0;
  /// frontier_sizes[d] is the number of states kept at depth d.
  std::vector<std::size_t> frontier_sizes;

  bool found() const noexcept { return min_depth.has_value(); }
};

/// Layered breadth-first search from |0...0> for the shortest circuit
/// reaching `target` (1 - F < sfe). With dedup on, a state is expanded only
/// the first time its canonical key is seen. Nodes are expanded in insertion
/// order and actions in gate-major, perm-minor order, and the first match
/// wins, so the witness is deterministic.
inline SearchResult min_depth_search(const QuantumState& target, const ActionSpace& space,
                                     std::size_t max_depth, const OracleOptions& options = {}) {
  if (target.qubits() != space.qubits()) {
    throw std::invalid_argument("min_depth_search: target has " +
                                std::to_string(target.qubits()) + " qubits, search space " +
                                std::to_string(space.qubits()));
  }
  struct Node {
    QuantumState state;
    std::size_t parent;
    Action action;
  };
  constexpr std::size_t kRoot = static_cast<std::size_t>(-1);
  const auto reached = [&](const QuantumState& s) {
    return 1.0 - fidelity_pure(s, target) < options.sfe;
  };

  SearchResult result;
  std::vector<Node> nodes;
  nodes.push_back({ground_state(space.qubits()), kRoot, Action{}});
  result.states_explored = 1;
  result.frontier_sizes.push_back(1);
  if (reached(nodes.front().state)) {
    result.min_depth = 0;
    return result;
  }

  std::unordered_set<CanonicalKey, CanonicalKeyHash> seen;
  if (options.dedup) {
    seen.insert(canonical_key(nodes.front().state, options.key_tol, options.key_grid));
  }
  const auto actions = space.all_actions();

  const auto witness = [&](std::size_t leaf) {
    std::vector<Action> circuit;
    for (std::size_t i = leaf; nodes[i].parent != kRoot; i = nodes[i].parent) {
      circuit.push_back(nodes[i].action);
    }
    return std::vector<Action>(circuit.rbegin(), circuit.rend());
  };

  std::size_t layer_begin = 0;
  std::size_t layer_end = 1;
  for (std::size_t depth = 1; depth <= max_depth; ++depth) {
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (const auto& a : actions) {
        QuantumState child = space.apply(nodes[i].state, a);
        ++result.states_explored;
        if (options.dedup &&
            !seen.insert(canonical_key(child, options.key_tol, options.key_grid)).second) {
          continue;
        }
        const bool hit = reached(child);
        nodes.push_back({std::move(child), i, a});
        if (hit) {
          result.frontier_sizes.push_back(nodes.size() - layer_end);
          result.min_depth = depth;
          result.circuit = witness(nodes.size() - 1);
          return result;
        }
      }
    }
    result.frontier_sizes.push_back(nodes.size() - layer_end);
    layer_begin = layer_end;
    layer_end = nodes.size();
    if (layer_begin == layer_end) break;
  }
  return result;
}

inline SearchResult min_depth_search(const QuantumState& target, const GateSet& gateset,
                                     std::size_t n, std::size_t max_depth,
                                     const OracleOptions& options = {}) {
  return min_depth_search(target, ActionSpace(gateset, n), max_depth, options);
}

struct Verification {
  bool reached = false;
  double fidelity = 0.0;
};

/// Replays `circuit` from the ground state and compares with `target`.
inline Verification verify_circuit(std::span<const Action> circuit, const QuantumState& target,
                                   const ActionSpace& space, double sfe = 0.001) {
  if (target.qubits() != space.qubits()) {
    throw std::invalid_argument("verify_circuit: qubit counts differ");
  }
  const QuantumState final_state = space.replay(ground_state(space.qubits()), circuit);
  const double f = fidelity_pure(final_state, target);
  return {1.0 - f < sfe, f};
}

}  // namespace qcsyn
