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
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace qcsyn {

using Complex = std::complex<double>;

/// Tolerance for physical invariants (normalization, unitarity).
inline constexpr double kPhysicsTolerance = 1e-10;

/// Default cap on the number of qubits a dense state may hold.
inline constexpr std::size_t kDefaultMaxQubits = 20;

/// Largest gate arity apply_gate supports.
inline constexpr std::size_t kMaxGateArity = 4;

/// Dense pure state of n qubits.
///
/// Basis index i encodes qubit 0 as the most significant bit, so |q0 q1 ...>
/// reads left to right as the binary expansion of i. Instances are
/// immutable; every operation returns a fresh state.
class QuantumState {
 public:
  /// Takes ownership of `amplitudes`. The length must be a power of two and
  /// the vector must be normalized within kPhysicsTolerance.
  explicit QuantumState(std::vector<Complex> amplitudes)
      : n_(qubits_for_length(amplitudes.size())),
        amplitudes_(std::move(amplitudes)) {
    const double norm = squared_norm(amplitudes_);
    if (std::abs(norm - 1.0) > kPhysicsTolerance) {
      throw std::invalid_argument("QuantumState: amplitudes not normalized (|v|^2 = " +
                                  std::to_string(norm) + ")");
    }
  }

  /// Builds a state from an arbitrary non-zero vector, rescaling it to unit
  /// norm. Used for user-supplied targets written with rounded amplitudes.
  static QuantumState normalized(std::vector<Complex> amplitudes) {
    qubits_for_length(amplitudes.size());
    const double norm = squared_norm(amplitudes);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw std::invalid_argument("QuantumState: zero or non-finite vector");
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& a : amplitudes) a *= scale;
    return QuantumState(std::move(amplitudes));
  }

  std::size_t qubits() const noexcept { return n_; }
  std::size_t dimension() const noexcept { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  const Complex& operator[](std::size_t i) const { return amplitudes_.at(i); }

  double norm_squared() const noexcept { return squared_norm(amplitudes_); }

 private:
  static std::size_t qubits_for_length(std::size_t len) {
    if (len < 2 || (len & (len - 1)) != 0) {
      throw std::invalid_argument("QuantumState: length " + std::to_string(len) +
                                  " is not 2^n with n >= 1");
    }
    std::size_t n = 0;
    while ((std::size_t{1} << n) < len) ++n;
    return n;
  }

  static double squared_norm(std::span<const Complex> v) noexcept {
    double acc = 0.0;
    for (const auto& a : v) acc += std::norm(a);
    return acc;
  }

  std::size_t n_;
  std::vector<Complex> amplitudes_;
};

/// A k-qubit unitary stored as a row-major 2^k x 2^k matrix. The first wire
/// of the gate is the most significant bit of the row/column index.
class GateMatrix {
 public:
  GateMatrix(std::size_t arity, std::vector<Complex> entries)
      : arity_(arity), entries_(std::move(entries)) {
    if (arity_ == 0 || arity_ > kMaxGateArity) {
      throw std::invalid_argument("GateMatrix: arity must be in [1, " +
                                  std::to_string(kMaxGateArity) + "]");
    }
    const std::size_t dim = std::size_t{1} << arity_;
    if (entries_.size() != dim * dim) {
      throw std::invalid_argument("GateMatrix: expected " + std::to_string(dim * dim) +
                                  " entries");
    }
    // U^dagger U = I
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c) {
        Complex acc{0.0, 0.0};
        for (std::size_t k = 0; k < dim; ++k) {
          acc += std::conj(entries_[k * dim + r]) * entries_[k * dim + c];
        }
        const Complex expected{r == c ? 1.0 : 0.0, 0.0};
        if (std::abs(acc - expected) > kPhysicsTolerance) {
          throw std::invalid_argument("GateMatrix: matrix is not unitary");
        }
      }
    }
  }

  std::size_t arity() const noexcept { return arity_; }
  std::size_t dimension() const noexcept { return std::size_t{1} << arity_; }
  const Complex& at(std::size_t row, std::size_t col) const {
    return entries_.at(row * dimension() + col);
  }
  std::span<const Complex> entries() const noexcept { return entries_; }

 private:
  std::size_t arity_;
  std::vector<Complex> entries_;
};

/// |0...0> on n qubits.
inline QuantumState ground_state(std::size_t n,
                                 std::size_t max_qubits = kDefaultMaxQubits) {
  if (n == 0) throw std::invalid_argument("ground_state: n must be >= 1");
  if (n > max_qubits) {
    throw std::invalid_argument("ground_state: n = " + std::to_string(n) +
                                " exceeds the qubit cap " + std::to_string(max_qubits));
  }
  std::vector<Complex> amps(std::size_t{1} << n, Complex{0.0, 0.0});
  amps[0] = Complex{1.0, 0.0};
  return QuantumState(std::move(amps));
}

/// Computational basis state |bits>, where `bits` is read with qubit 0 as the
/// most significant bit.
inline QuantumState basis_state(std::size_t n, std::size_t bits) {
  auto g = ground_state(n);
  std::vector<Complex> amps(g.dimension(), Complex{0.0, 0.0});
  amps.at(bits) = Complex{1.0, 0.0};
  return QuantumState(std::move(amps));
}

/// Returns U|state> with `gate` acting on `qubits` (first entry is the gate's
/// first wire) and identity on every other qubit. O(2^n) per call.
inline QuantumState apply_gate(const QuantumState& state, const GateMatrix& gate,
                               std::span<const std::size_t> qubits) {
  const std::size_t n = state.qubits();
  const std::size_t k = gate.arity();
  if (qubits.size() != k) {
    throw std::invalid_argument("apply_gate: gate arity " + std::to_string(k) +
                                " but " + std::to_string(qubits.size()) + " qubits given");
  }
  std::size_t target_mask = 0;
  std::array<std::size_t, kMaxGateArity> bit{};
  for (std::size_t j = 0; j < k; ++j) {
    if (qubits[j] >= n) {
      throw std::out_of_range("apply_gate: qubit " + std::to_string(qubits[j]) +
                              " out of range for n = " + std::to_string(n));
    }
    bit[j] = std::size_t{1} << (n - 1 - qubits[j]);
    if (target_mask & bit[j]) {
      throw std::invalid_argument("apply_gate: duplicate qubit " +
                                  std::to_string(qubits[j]));
    }
    target_mask |= bit[j];
  }

  const std::size_t dim = gate.dimension();
  // offset[m] is the basis-index contribution of local index m, whose most
  // significant bit belongs to the first listed qubit.
  std::array<std::size_t, std::size_t{1} << kMaxGateArity> offset{};
  for (std::size_t m = 0; m < dim; ++m) {
    std::size_t off = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (m & (std::size_t{1} << (k - 1 - j))) off |= bit[j];
    }
    offset[m] = off;
  }

  const auto in = state.amplitudes();
  std::vector<Complex> out(in.size());
  std::array<Complex, std::size_t{1} << kMaxGateArity> local{};
  const auto u = gate.entries();
  for (std::size_t base = 0; base < in.size(); ++base) {
    if (base & target_mask) continue;
    for (std::size_t m = 0; m < dim; ++m) local[m] = in[base | offset[m]];
    for (std::size_t r = 0; r < dim; ++r) {
      Complex acc{0.0, 0.0};
      for (std::size_t c = 0; c < dim; ++c) acc += u[r * dim + c] * local[c];
      out[base | offset[r]] = acc;
    }
  }
  return QuantumState(std::move(out));
}

inline QuantumState apply_gate(const QuantumState& state, const GateMatrix& gate,
                               std::initializer_list<std::size_t> qubits) {
  return apply_gate(state, gate, std::span<const std::size_t>(qubits.begin(), qubits.size()));
}

/// <a|b>
inline Complex inner_product(const QuantumState& a, const QuantumState& b) {
  if (a.qubits() != b.qubits()) {
    throw std::invalid_argument("inner_product: qubit counts differ (" +
                                std::to_string(a.qubits()) + " vs " +
                                std::to_string(b.qubits()) + ")");
  }
  Complex acc{0.0, 0.0};
  const auto x = a.amplitudes();
  const auto y = b.amplitudes();
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

/// Pure-state fidelity |<a|b>|^2, clamped to [0, 1].
inline double fidelity_pure(const QuantumState& a, const QuantumState& b) {
  return std::clamp(std::norm(inner_product(a, b)), 0.0, 1.0);
}

/// Log serialization: [[re, im], ...] in basis-index order.
inline nlohmann::json state_to_json(const QuantumState& s) {
  auto arr = nlohmann::json::array();
  for (const auto& a : s.amplitudes()) arr.push_back({a.real(), a.imag()});
  return arr;
}

/// Inverse of state_to_json. Accepts plain reals as well as [re, im] pairs
/// and renormalizes, so hand-written targets such as 0.7071 are accepted.
inline QuantumState state_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("state JSON must be an array");
  std::vector<Complex> amps;
  amps.reserve(j.size());
  for (const auto& e : j) {
    if (e.is_number()) {
      amps.emplace_back(e.get<double>(), 0.0);
    } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      amps.emplace_back(e[0].get<double>(), e[1].get<double>());
    } else {
      throw std::invalid_argument("state JSON entries must be numbers or [re, im] pairs");
    }
  }
  return QuantumState::normalized(std::move(amps));
}

}  // namespace qcsyn
