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


#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "qcsyn/gateset.hpp"
#include "qcsyn/quantum_state.hpp"
#include "qcsyn/rng.hpp"
#include "test_support.hpp"

using namespace qcsyn;
using Catch::Approx;

namespace {

const GateSet kGates = clifford_t();
const GateMatrix& gate(const char* name) { return kGates[kGates.find(name)].matrix; }

}  // namespace

TEST_CASE("ground state amplitudes", "[quantum]") {
  const auto g1 = ground_state(1);
  REQUIRE(g1.dimension() == 2);
  CHECK(g1[0] == Complex{1.0, 0.0});
  CHECK(g1[1] == Complex{0.0, 0.0});

  const auto g2 = ground_state(2);
  REQUIRE(g2.dimension() == 4);
  CHECK(g2[0] == Complex{1.0, 0.0});
  for (std::size_t i = 1; i < 4; ++i) CHECK(g2[i] == Complex{0.0, 0.0});

  const auto g3 = ground_state(3);
  CHECK(g3.dimension() == 8);
  CHECK(g3[0] == Complex{1.0, 0.0});
}

TEST_CASE("ground state rejects bad sizes", "[quantum]") {
  CHECK_THROWS_AS(ground_state(0), std::invalid_argument);
  CHECK_THROWS_AS(ground_state(21), std::invalid_argument);
  CHECK_THROWS_AS(ground_state(5, 4), std::invalid_argument);
  CHECK_NOTHROW(ground_state(4, 4));
}

TEST_CASE("state construction validates length and norm", "[quantum]") {
  CHECK_THROWS_AS(QuantumState({Complex{1.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(QuantumState({Complex{1.0, 0.0}, {0, 0}, {0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(QuantumState({Complex{1.0, 0.0}, {1.0, 0.0}}), std::invalid_argument);
  const auto s = QuantumState::normalized({Complex{0.7071, 0.0}, Complex{0.7071, 0.0}});
  CHECK(s.norm_squared() == Approx(1.0).margin(1e-12));
  CHECK_THROWS_AS(QuantumState::normalized({Complex{0, 0}, Complex{0, 0}}), std::invalid_argument);
}

TEST_CASE("H on |0> gives the plus state", "[quantum]") {
  const auto s = apply_gate(ground_state(1), gate("H"), {0});
  const double r = 1.0 / std::numbers::sqrt2;
  CHECK(std::abs(s[0] - Complex{r, 0.0}) < 1e-12);
  CHECK(std::abs(s[1] - Complex{r, 0.0}) < 1e-12);
}

TEST_CASE("CNOT with control q0 maps |10> to |11>", "[quantum]") {
  const auto s = apply_gate(basis_state(2, 0b10), gate("CNOT"), {0, 1});
  CHECK(fidelity_pure(s, basis_state(2, 0b11)) == Approx(1.0).margin(1e-12));
  // Reversed wires: control q1 is |0>, nothing happens.
  const auto t = apply_gate(basis_state(2, 0b10), gate("CNOT"), {1, 0});
  CHECK(fidelity_pure(t, basis_state(2, 0b10)) == Approx(1.0).margin(1e-12));
  // Control q1 = 1 flips q0.
  const auto u = apply_gate(basis_state(2, 0b01), gate("CNOT"), {1, 0});
  CHECK(fidelity_pure(u, basis_state(2, 0b11)) == Approx(1.0).margin(1e-12));
}

TEST_CASE("qubit 0 is the most significant bit", "[quantum]") {
  const auto x = GateMatrix(1, {Complex{0, 0}, Complex{1, 0}, Complex{1, 0}, Complex{0, 0}});
  const auto s = apply_gate(ground_state(3), x, {0});
  CHECK(std::abs(s[0b100]) == Approx(1.0));
  const auto t = apply_gate(ground_state(3), x, {2});
  CHECK(std::abs(t[0b001]) == Approx(1.0));
}

TEST_CASE("apply_gate argument errors", "[quantum]") {
  const auto g = ground_state(2);
  CHECK_THROWS_AS(apply_gate(g, gate("H"), {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(apply_gate(g, gate("CNOT"), {0}), std::invalid_argument);
  CHECK_THROWS_AS(apply_gate(g, gate("H"), {2}), std::out_of_range);
  CHECK_THROWS_AS(apply_gate(g, gate("CNOT"), {1, 1}), std::invalid_argument);
}

TEST_CASE("gate matrices must be unitary", "[quantum]") {
  CHECK_THROWS_AS(GateMatrix(1, {Complex{1, 0}, Complex{1, 0}, Complex{0, 0}, Complex{1, 0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(GateMatrix(1, {Complex{1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(GateMatrix(0, {}), std::invalid_argument);
}

TEST_CASE("fidelity examples", "[quantum]") {
  Rng rng(7);
  const auto psi = testing::random_state(3, rng);
  CHECK(fidelity_pure(psi, psi) == Approx(1.0).margin(1e-12));
  CHECK(fidelity_pure(basis_state(2, 0), basis_state(2, 3)) == 0.0);
  CHECK(fidelity_pure(ground_state(1), apply_gate(ground_state(1), gate("H"), {0})) ==
        Approx(0.5).margin(1e-12));
  CHECK_THROWS_AS(fidelity_pure(ground_state(1), ground_state(2)), std::invalid_argument);
}

TEST_CASE("gate action identities on random states", "[quantum][property]") {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(5);
    const auto s = testing::random_state(n, rng);
    const std::size_t q = rng.uniform_index(n);
    for (const char* name : {"I", "H"}) {
      const auto back = apply_gate(apply_gate(s, gate(name), {q}), gate(name), {q});
      CHECK(testing::max_abs_diff(back, s) < 1e-10);
    }
    const auto ss = apply_gate(apply_gate(s, gate("S"), {q}), gate("S"), {q});
    const std::size_t bit = std::size_t{1} << (n - 1 - q);
    for (std::size_t i = 0; i < s.dimension(); ++i) {
      const Complex expected = (i & bit) ? -s[i] : s[i];
      CHECK(std::abs(ss[i] - expected) < 1e-10);
    }
    const auto tt = apply_gate(apply_gate(s, gate("T"), {q}), gate("T"), {q});
    CHECK(testing::max_abs_diff(tt, apply_gate(s, gate("S"), {q})) < 1e-10);
    if (n >= 2) {
      std::size_t c = rng.uniform_index(n);
      std::size_t t = rng.uniform_index(n - 1);
      if (t >= c) ++t;
      const auto back = apply_gate(apply_gate(s, gate("CNOT"), {c, t}), gate("CNOT"), {c, t});
      CHECK(testing::max_abs_diff(back, s) < 1e-10);
    }
  }
}

TEST_CASE("fidelity symmetry, phase and unitary invariance", "[quantum][property]") {
  Rng rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(4);
    const auto a = testing::random_state(n, rng);
    const auto b = testing::random_state(n, rng);
    const double f = fidelity_pure(a, b);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    CHECK(std::abs(f - fidelity_pure(b, a)) < 1e-10);
    const double theta = 2.0 * std::numbers::pi * rng.uniform01();
    CHECK(std::abs(f - fidelity_pure(a, testing::with_phase(b, theta))) < 1e-10);
    auto ua = a;
    auto ub = b;
    for (int k = 0; k < 6; ++k) {
      const auto& g = kGates[rng.uniform_index(kGates.size())];
      if (g.arity() > n) continue;
      std::vector<std::size_t> qs{rng.uniform_index(n)};
      if (g.arity() == 2) {
        std::size_t t = rng.uniform_index(n - 1);
        if (t >= qs[0]) ++t;
        qs.push_back(t);
      }
      ua = apply_gate(ua, g.matrix, qs);
      ub = apply_gate(ub, g.matrix, qs);
    }
    CHECK(std::abs(f - fidelity_pure(ua, ub)) < 1e-10);
  }
}

TEST_CASE("state JSON round trip", "[quantum]") {
  Rng rng(3);
  const auto s = testing::random_state(2, rng);
  const auto back = state_from_json(state_to_json(s));
  CHECK(testing::max_abs_diff(back, s) < 1e-12);
  const auto plain = state_from_json(nlohmann::json::parse("[0.7071, 0, 0, 0.7071]"));
  CHECK(std::abs(plain[0].real() - 1.0 / std::numbers::sqrt2) < 1e-12);
  CHECK_THROWS(state_from_json(nlohmann::json::parse("[\"a\", 1]")));
  CHECK_THROWS(state_from_json(nlohmann::json::parse("{}")));
}

TEST_CASE("rng is reproducible and bounded", "[rng]") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    differs |= x != c.next();
  }
  CHECK(differs);
  Rng r(5);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.uniform_index(7) < 7);
  }
  CHECK_THROWS(r.uniform_index(0));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
}
