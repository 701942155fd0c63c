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
#include <compare>
#include <cstddef>
#include <numbers>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qcsyn/quantum_state.hpp"
#include "qcsyn/rng.hpp"

namespace qcsyn {

struct Gate {
  std::string name;
  GateMatrix matrix;

  std::size_t arity() const noexcept { return matrix.arity(); }
};

/// Ordered gate vocabulary. The position of a gate in the list is its action
/// index.
class GateSet {
 public:
  explicit GateSet(std::vector<Gate> gates) : gates_(std::move(gates)) {
    if (gates_.empty()) throw std::invalid_argument("GateSet: empty gate list");
    for (std::size_t i = 0; i < gates_.size(); ++i) {
      if (gates_[i].name.empty() ||
          gates_[i].name.find_first_of(" \t\n;,") != std::string::npos) {
        throw std::invalid_argument("GateSet: invalid gate name '" + gates_[i].name + "'");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (gates_[i].name == gates_[j].name) {
          throw std::invalid_argument("GateSet: duplicate gate name " + gates_[i].name);
        }
      }
      n_max_ = std::max(n_max_, gates_[i].arity());
    }
  }

  std::size_t size() const noexcept { return gates_.size(); }
  std::size_t n_max() const noexcept { return n_max_; }
  const Gate& operator[](std::size_t i) const { return gates_.at(i); }
  std::span<const Gate> gates() const noexcept { return gates_; }

  /// Index of the gate called `name`, or size() if absent.
  std::size_t find(std::string_view name) const noexcept {
    for (std::size_t i = 0; i < gates_.size(); ++i) {
      if (gates_[i].name == name) return i;
    }
    return gates_.size();
  }

 private:
  std::vector<Gate> gates_;
  std::size_t n_max_ = 0;
};

/// I, H, S, CNOT, T in this order. CNOT's first wire is the control.
inline GateSet clifford_t() {
  const double r = 1.0 / std::numbers::sqrt2;
  const Complex one{1.0, 0.0};
  const Complex zero{0.0, 0.0};
  const Complex i_phase = std::polar(1.0, std::numbers::pi / 2.0);
  const Complex t_phase = std::polar(1.0, std::numbers::pi / 4.0);
  std::vector<Gate> gates;
  gates.push_back({"I", GateMatrix(1, {one, zero, zero, one})});
  gates.push_back({"H", GateMatrix(1, {Complex{r, 0}, Complex{r, 0}, Complex{r, 0}, Complex{-r, 0}})});
  gates.push_back({"S", GateMatrix(1, {one, zero, zero, i_phase})});
  gates.push_back({"CNOT", GateMatrix(2, {one, zero, zero, zero,  //
                                          zero, one, zero, zero,  //
                                          zero, zero, zero, one,  //
                                          zero, zero, one, zero})});
  gates.push_back({"T", GateMatrix(1, {one, zero, zero, t_phase})});
  return GateSet(std::move(gates));
}

/// C = n! / (n - n_max)!, the number of ordered n_max-tuples of distinct
/// qubits.
inline std::size_t combination_count(const GateSet& gateset, std::size_t n) {
  if (n < gateset.n_max()) {
    throw std::invalid_argument("combination_count: n = " + std::to_string(n) +
                                " is smaller than n_max = " +
                                std::to_string(gateset.n_max()));
  }
  std::size_t c = 1;
  for (std::size_t f = n - gateset.n_max() + 1; f <= n; ++f) c *= f;
  return c;
}

/// All ordered k-tuples of distinct indices from {0..n-1}, lexicographic.
inline std::vector<std::vector<std::size_t>> enumerate_permutations(std::size_t n,
                                                                    std::size_t k) {
  if (k == 0 || k > n) {
    throw std::invalid_argument("enumerate_permutations: need 1 <= k <= n (k = " +
                                std::to_string(k) + ", n = " + std::to_string(n) + ")");
  }
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> current;
  std::vector<bool> used(n, false);
  auto recurse = [&](auto&& self) -> void {
    if (current.size() == k) {
      out.push_back(current);
      return;
    }
    for (std::size_t q = 0; q < n; ++q) {
      if (used[q]) continue;
      used[q] = true;
      current.push_back(q);
      self(self);
      current.pop_back();
      used[q] = false;
    }
  };
  recurse(recurse);
  return out;
}

/// Multi-discrete action: a gate index and a qubit-permutation index.
struct Action {
  std::size_t gate_index = 0;
  std::size_t perm_index = 0;

  friend auto operator<=>(const Action&, const Action&) = default;
};

/// A decoded action: the gate to apply and the qubits it acts on.
struct GateApplication {
  const Gate* gate = nullptr;
  std::size_t gate_index = 0;
  std::vector<std::size_t> qubits;
};

/// The action space for a (GateSet, n) pair, with the permutation listing
/// precomputed. When n < n_max the permutations have length n and gates
/// wider than n are inapplicable.
class ActionSpace {
 public:
  ActionSpace(GateSet gateset, std::size_t n)
      : gateset_(std::move(gateset)),
        n_(n),
        perms_(enumerate_permutations(n, std::min(n, gateset_.n_max()))) {}

  const GateSet& gateset() const noexcept { return gateset_; }
  std::size_t qubits() const noexcept { return n_; }
  std::size_t gate_count() const noexcept { return gateset_.size(); }
  std::size_t perm_count() const noexcept { return perms_.size(); }
  std::size_t size() const noexcept { return gate_count() * perm_count(); }
  std::span<const std::vector<std::size_t>> permutations() const noexcept { return perms_; }

  bool contains(const Action& a) const noexcept {
    return a.gate_index < gate_count() && a.perm_index < perm_count();
  }

  /// In bounds and the gate fits on n qubits.
  bool applicable(const Action& a) const noexcept {
    return contains(a) && gateset_[a.gate_index].arity() <= n_;
  }

  /// Gate `gate_index` on the first (arity) qubits of permutation
  /// `perm_index`.
  GateApplication decode(const Action& a) const {
    if (!contains(a)) {
      throw std::out_of_range("decode_action: action (" + std::to_string(a.gate_index) +
                              ", " + std::to_string(a.perm_index) + ") out of bounds [" +
                              std::to_string(gate_count()) + ", " +
                              std::to_string(perm_count()) + ")");
    }
    const Gate& g = gateset_[a.gate_index];
    if (g.arity() > n_) {
      throw std::invalid_argument("decode_action: " + g.name + " needs " +
                                  std::to_string(g.arity()) + " qubits, space has " +
                                  std::to_string(n_));
    }
    const auto& perm = perms_[a.perm_index];
    return {&g, a.gate_index, std::vector<std::size_t>(perm.begin(), perm.begin() + g.arity())};
  }

  QuantumState apply(const QuantumState& state, const Action& a) const {
    const auto app = decode(a);
    return apply_gate(state, app.gate->matrix, app.qubits);
  }

  /// Enumerates every applicable action, gate index major and permutation index minor.
  std::vector<Action> all_actions() const {
    std::vector<Action> out;
    out.reserve(size());
    for (std::size_t g = 0; g < gate_count(); ++g) {
      if (gateset_[g].arity() > n_) continue;
      for (std::size_t p = 0; p < perm_count(); ++p) out.push_back({g, p});
    }
    return out;
  }

  Action sample_uniform(Rng& rng) const {
    Action a;
    a.gate_index = static_cast<std::size_t>(rng.uniform_index(gate_count()));
    a.perm_index = static_cast<std::size_t>(rng.uniform_index(perm_count()));
    return a;
  }

  /// Text form of one action, e.g. "H q0" or "CNOT q0 q1".
  std::string format(const Action& a) const {
    const auto app = decode(a);
    std::string s = app.gate->name;
    for (auto q : app.qubits) s += " q" + std::to_string(q);
    return s;
  }

  /// Parses a line produced by format(). Several permutation indices may
  /// decode to the same application; the smallest one is returned.
  Action parse(std::string_view line) const {
    std::istringstream in{std::string(line)};
    std::string name;
    if (!(in >> name)) throw std::invalid_argument("parse_action: empty line");
    const std::size_t g = gateset_.find(name);
    if (g == gateset_.size()) {
      throw std::invalid_argument("parse_action: unknown gate '" + name + "'");
    }
    std::vector<std::size_t> qubits;
    std::string tok;
    while (in >> tok) {
      if (tok.size() < 2 || tok[0] != 'q' ||
          tok.find_first_not_of("0123456789", 1) != std::string::npos) {
        throw std::invalid_argument("parse_action: bad qubit token '" + tok + "'");
      }
      qubits.push_back(std::stoul(tok.substr(1)));
    }
    if (qubits.size() != gateset_[g].arity()) {
      throw std::invalid_argument("parse_action: " + name + " takes " +
                                  std::to_string(gateset_[g].arity()) + " qubit(s)");
    }
    for (std::size_t p = 0; p < perms_.size(); ++p) {
      if (std::equal(qubits.begin(), qubits.end(), perms_[p].begin())) return {g, p};
    }
    throw std::invalid_argument("parse_action: qubits out of range or repeated in '" +
                                std::string(line) + "'");
  }

  std::vector<std::string> format_circuit(std::span<const Action> circuit) const {
    std::vector<std::string> lines;
    lines.reserve(circuit.size());
    for (const auto& a : circuit) lines.push_back(format(a));
    return lines;
  }

  std::vector<Action> parse_circuit(std::span<const std::string> lines) const {
    std::vector<Action> out;
    for (const auto& l : lines) {
      if (l.find_first_not_of(" \t\r") == std::string::npos) continue;
      out.push_back(parse(l));
    }
    return out;
  }

  /// Semicolon-joined circuit text used in CSV logs.
  std::string join_circuit(std::span<const Action> circuit) const {
    std::string s;
    for (std::size_t i = 0; i < circuit.size(); ++i) {
      if (i) s += ';';
      s += format(circuit[i]);
    }
    return s;
  }

  /// Replays `circuit` from `start`.
  QuantumState replay(const QuantumState& start, std::span<const Action> circuit) const {
    QuantumState s = start;
    for (const auto& a : circuit) s = apply(s, a);
    return s;
  }

 private:
  GateSet gateset_;
  std::size_t n_;
  std::vector<std::vector<std::size_t>> perms_;
};

inline GateApplication decode_action(const Action& action, const GateSet& gateset,
                                     std::size_t n) {
  // The gate pointer refers into `gateset`.
  const auto perms = enumerate_permutations(n, gateset.n_max());
  if (action.gate_index >= gateset.size() || action.perm_index >= perms.size()) {
    throw std::out_of_range("decode_action: action out of bounds");
  }
  const Gate& g = gateset[action.gate_index];
  const auto& perm = perms[action.perm_index];
  return {&g, action.gate_index, std::vector<std::size_t>(perm.begin(), perm.begin() + g.arity())};
}

inline Action sample_uniform_action(const GateSet& gateset, std::size_t n, Rng& rng) {
  Action a;
  a.gate_index = static_cast<std::size_t>(rng.uniform_index(gateset.size()));
  a.perm_index = static_cast<std::size_t>(rng.uniform_index(combination_count(gateset, n)));
  return a;
}

}  // namespace qcsyn
