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
#include <numbers>
#include <vector>

#include "qcsyn/environment.hpp"
#include "test_support.hpp"

using namespace qcsyn;
using Catch::Approx;

namespace {

QuantumState bell_phi_plus() {
  const double r = 1.0 / std::numbers::sqrt2;
  return QuantumState({Complex{r, 0}, {0, 0}, {0, 0}, Complex{r, 0}});
}

EnvConfig fixed(QuantumState target, std::size_t max_length,
                RewardKind reward = RewardKind::StepPenalty) {
  EnvConfig cfg;
  cfg.n = target.qubits();
  cfg.target_mode = FixedTarget{std::move(target), max_length};
  cfg.reward = reward;
  return cfg;
}

}  // namespace

TEST_CASE("observation layout", "[env]") {
  const auto o1 = encode_observation(ground_state(1), basis_state(1, 1));
  CHECK(o1.values == std::vector<double>{1, 0, 0, 0, 0, 1, 0, 0});
  const auto plus = apply_gate(ground_state(1), clifford_t()[1].matrix, {0});
  const auto o2 = encode_observation(plus, ground_state(1));
  const double r = 1.0 / std::numbers::sqrt2;
  const std::vector<double> expected{r, r, 0, 0, 1, 0, 0, 0};
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(o2.values[i] == Approx(expected[i]).margin(1e-12));
  for (std::size_t n : {1, 2, 3, 5, 10}) {
    const auto o = encode_observation(ground_state(n), ground_state(n));
    CHECK(o.values.size() == (std::size_t{1} << (n + 2)));
    CHECK(o.qubits() == n);
  }
  CHECK_THROWS_AS(encode_observation(ground_state(1), ground_state(2)), std::invalid_argument);
}

TEST_CASE("observation decodes to unit vectors", "[env][property]") {
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 1 + rng.uniform_index(4);
    const auto a = testing::random_state(n, rng);
    const auto b = testing::random_state(n, rng);
    const auto [cur, tgt] = decode_observation(encode_observation(a, b));
    double na = 0.0, nb = 0.0;
    for (const auto& x : cur) na += std::norm(x);
    for (const auto& x : tgt) nb += std::norm(x);
    CHECK(std::abs(na - 1.0) < 1e-10);
    CHECK(std::abs(nb - 1.0) < 1e-10);
  }
}

TEST_CASE("step penalty reward table", "[env][reward]") {
  CHECK(reward_step_penalty(1.0, 3, 10, 0.001) == 6.0);
  CHECK(reward_step_penalty(0.4, 3, 10, 0.001) == -1.0);
  CHECK(reward_step_penalty(1.0, 10, 10, 0.001) == -1.0);
  CHECK(reward_step_penalty(0.9995, 1, 4, 0.001) == 2.0);
  CHECK(reward_step_penalty(0.999, 1, 4, 0.001) == -1.0);
}

TEST_CASE("distance reward table", "[env][reward]") {
  CHECK(reward_distance(1.0, 3, 10, 0.001) == 6.0);
  CHECK(reward_distance(0.5, 10, 10, 0.001) == -2.5);
  CHECK(reward_distance(0.5, 4, 10, 0.001) == -1.0);
  CHECK(reward_distance(0.25, 7, 7, 0.001) == Approx(-3.0 * 0.75).margin(1e-15));
  CHECK(reward_distance(1.0, 10, 10, 0.001) == -1.0);
}

TEST_CASE("reward grid matches the closed forms", "[env][reward]") {
  for (std::size_t L = 1; L <= 12; ++L) {
    for (std::size_t l = 1; l <= L; ++l) {
      for (double f : {0.0, 0.25, 0.5, 0.9, 0.998, 0.999, 0.9991, 1.0}) {
        const bool ok = 1.0 - f < 0.001;
        const double sp = ok ? double(L) - double(l) - 1.0 : -1.0;
        const double dist = ok ? sp : (l == L ? -double(L / 2) * (1.0 - f) : -1.0);
        CHECK(compute_reward(RewardKind::StepPenalty, f, l, L, 0.001) == sp);
        CHECK(compute_reward(RewardKind::Distance, f, l, L, 0.001) == dist);
      }
    }
  }
}

TEST_CASE("reward kind names", "[env]") {
  CHECK(parse_reward_kind("step_penalty") == RewardKind::StepPenalty);
  CHECK(parse_reward_kind("distance") == RewardKind::Distance);
  CHECK(to_string(RewardKind::Distance) == "distance");
  CHECK_THROWS_AS(parse_reward_kind("fidelity"), std::invalid_argument);
}

TEST_CASE("Bell pair episode succeeds with reward 1", "[env]") {
  Environment env(fixed(bell_phi_plus(), 4));
  Rng rng(1);
  env.reset(rng);
  const auto s1 = env.step({1, 0});
  CHECK_FALSE(s1.done());
  CHECK(s1.reward == -1.0);
  CHECK_FALSE(s1.info.gates_used.has_value());
  const auto s2 = env.step({3, 0});
  CHECK(s2.status == EpisodeStatus::Success);
  CHECK(s2.info.fidelity >= 0.999);
  CHECK(s2.reward == 1.0);
  CHECK(s2.info.gates_used == 2u);
  CHECK(env.total_reward() == 0.0);
  CHECK_THROWS_AS(env.step({0, 0}), std::logic_error);
}

TEST_CASE("fixed target reset", "[env]") {
  Environment env(fixed(basis_state(2, 3), 10));
  CHECK_THROWS_AS(env.step({0, 0}), std::logic_error);
  Rng rng(1);
  const auto obs = env.reset(rng);
  const auto [cur, tgt] = decode_observation(obs);
  CHECK(cur[0] == Complex{1, 0});
  CHECK(tgt[3] == Complex{1, 0});
  CHECK(env.steps() == 0);
  CHECK(env.target_circuit().empty());
}

TEST_CASE("truncation after L failing steps", "[env]") {
  Environment env(fixed(basis_state(2, 3), 10));
  Rng rng(1);
  env.reset(rng);
  StepResult r;
  for (int i = 0; i < 10; ++i) {
    REQUIRE_FALSE(r.done());
    r = env.step({0, 0});
    CHECK(r.reward == -1.0);
  }
  CHECK(r.status == EpisodeStatus::Truncated);
  CHECK(r.info.gates_used == 10u);
  CHECK(env.total_reward() == -10.0);
}

TEST_CASE("ground-state target is not an instant success", "[env]") {
  Environment env(fixed(ground_state(2), 6));
  Rng rng(1);
  env.reset(rng);
  CHECK(env.status() == EpisodeStatus::Running);
  const auto r = env.step({0, 0});
  CHECK(r.status == EpisodeStatus::Success);
  CHECK(r.reward == 4.0);
}

TEST_CASE("random target mode", "[env]") {
  EnvConfig cfg;
  cfg.target_mode = RandomTarget{5};
  Environment env(cfg);
  CHECK(env.max_length() == 10);
  CHECK(env.lambda() == 5u);
  CHECK(env.observation_size() == 16);
  Rng a(3), b(3);
  env.reset(a);
  const auto t1 = env.target();
  CHECK(env.target_circuit().size() == 5);
  Environment env2(cfg);
  env2.reset(b);
  CHECK(testing::max_abs_diff(t1, env2.target()) == 0.0);
}

TEST_CASE("episode reward identities and replay", "[env][property]") {
  Rng rng(21);
  for (const auto kind : {RewardKind::StepPenalty, RewardKind::Distance}) {
    for (std::size_t lambda = 1; lambda <= 5; ++lambda) {
      EnvConfig cfg;
      cfg.target_mode = RandomTarget{lambda};
      cfg.reward = kind;
      Environment env(cfg);
      for (int ep = 0; ep < 40; ++ep) {
        env.reset(rng);
        const std::size_t L = env.max_length();
        CHECK(L == 2 * lambda);
        // Alternate between the witness circuit and random play.
        const bool scripted = ep % 2 == 0;
        StepResult r;
        std::size_t k = 0;
        do {
          const Action a = scripted && k < env.target_circuit().size()
                               ? env.target_circuit()[k]
                               : env.action_space().sample_uniform(rng);
          r = env.step(a);
          ++k;
          const auto replay = env.action_space().replay(ground_state(2), env.actions_taken());
          CHECK(testing::max_abs_diff(replay, env.current()) < 1e-10);
          CHECK(r.info.l == env.steps());
          CHECK(env.steps() <= L);
        } while (!r.done());
        if (r.status == EpisodeStatus::Success) {
          CHECK(r.info.fidelity > 0.999);
          CHECK(env.total_reward() == double(L) - 2.0 * double(k));
        } else {
          CHECK(k == L);
          if (kind == RewardKind::StepPenalty) {
            CHECK(env.total_reward() == -double(L));
          } else {
            CHECK(env.total_reward() ==
                  Approx(-double(L - 1) - double(L / 2) * (1.0 - r.info.fidelity)).margin(1e-12));
          }
        }
        if (scripted) CHECK(r.status == EpisodeStatus::Success);
      }
    }
  }
}

TEST_CASE("config validation", "[env]") {
  EnvConfig cfg;
  cfg.sfe = 0.0;
  CHECK_THROWS_AS(Environment(cfg), std::invalid_argument);
  cfg = {};
  cfg.target_mode = RandomTarget{0};
  CHECK_THROWS_AS(Environment(cfg), std::invalid_argument);
  cfg = {};
  cfg.target_mode = FixedTarget{ground_state(3), 5};
  CHECK_THROWS_AS(Environment(cfg), std::invalid_argument);
  cfg.target_mode = FixedTarget{ground_state(2), 0};
  CHECK_THROWS_AS(Environment(cfg), std::invalid_argument);
}

TEST_CASE("single-qubit register", "[env]") {
  EnvConfig cfg;
  cfg.n = 1;
  cfg.target_mode = RandomTarget{1};
  Environment env(cfg);
  Rng rng(3);
  const auto obs = env.reset(rng);
  CHECK(obs.values.size() == 8);
  CHECK(env.action_space().perm_count() == 1);
  CHECK(env.action_space().format(env.target_circuit().front()) == "H q0");
  const auto cnot = env.action_space().gateset().find("CNOT");
  const auto r = env.step(Action{cnot, 0});
  CHECK(testing::max_abs_diff(env.current(), ground_state(1)) == 0.0);
  CHECK(r.status == EpisodeStatus::Running);
  CHECK(env.step(Action{env.action_space().gateset().find("H"), 0}).status ==
        EpisodeStatus::Success);
  CHECK(env.total_reward() == 2.0 - 2.0 * 2.0);
  env.reset(rng);
  CHECK_THROWS_AS(env.step(Action{0, 1}), std::out_of_range);
}
