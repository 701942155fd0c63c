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
#include <numeric>
#include <vector>

#include "qcsyn/ppo.hpp"
#include "test_support.hpp"

using namespace qcsyn;
using Catch::Approx;

namespace {

RolloutBuffer buffer_of(const std::vector<double>& rewards, const std::vector<double>& values,
                        const std::vector<int>& dones, double bootstrap) {
  RolloutBuffer b;
  for (std::size_t t = 0; t < rewards.size(); ++t) {
    b.push(std::vector<double>{0.0}, Action{}, 0.0, rewards[t], values[t], dones[t] != 0);
  }
  b.bootstrap_value = bootstrap;
  return b;
}

}  // namespace

TEST_CASE("GAE hand examples", "[ppo][gae]") {
  auto single = buffer_of({5.0}, {2.0}, {1}, 9.0);
  compute_gae(single, 0.99, 0.95);
  CHECK(single.advantages[0] == 3.0);
  CHECK(single.returns[0] == 5.0);

  auto b = buffer_of({1.0, -1.0, 2.0}, {0.5, 0.2, -0.3}, {0, 0, 0}, 0.7);
  compute_gae(b, 0.9, 0.0);
  CHECK(b.advantages[0] == Approx(1.0 + 0.9 * 0.2 - 0.5));
  CHECK(b.advantages[1] == Approx(-1.0 + 0.9 * -0.3 - 0.2));
  CHECK(b.advantages[2] == Approx(2.0 + 0.9 * 0.7 + 0.3));

  auto g0 = buffer_of({1.0, -1.0, 2.0}, {0.5, 0.2, -0.3}, {0, 1, 0}, 0.7);
  compute_gae(g0, 0.0, 0.95);
  CHECK(g0.advantages == std::vector<double>{0.5, -1.2, 2.3});

  // Episode boundary stops the recursion.
  auto cut = buffer_of({1.0, 1.0}, {0.0, 0.0}, {1, 0}, 4.0);
  compute_gae(cut, 0.5, 1.0 - 1e-12);
  CHECK(cut.advantages[0] == 1.0);
  CHECK(cut.advantages[1] == 3.0);
  CHECK(cut.returns[1] == 3.0);
}

TEST_CASE("GAE matches the discounted sum of deltas", "[ppo][gae][property]") {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(12);
    std::vector<double> r(n), v(n);
    std::vector<int> d(n);
    for (std::size_t t = 0; t < n; ++t) {
      r[t] = testing::gaussian(rng);
      v[t] = testing::gaussian(rng);
      d[t] = rng.uniform01() < 0.2;
    }
    const double boot = testing::gaussian(rng);
    const double gamma = 0.9, lam = 0.8;
    auto b = buffer_of(r, v, d, boot);
    compute_gae(b, gamma, lam);
    for (std::size_t t = 0; t < n; ++t) {
      double acc = 0.0, w = 1.0;
      for (std::size_t k = t; k < n; ++k) {
        const double next_v = k + 1 < n ? v[k + 1] : boot;
        acc += w * (r[k] + gamma * next_v * (d[k] ? 0.0 : 1.0) - v[k]);
        if (d[k]) break;
        w *= gamma * lam;
      }
      CHECK(b.advantages[t] == Approx(acc).margin(1e-12));
      CHECK(b.returns[t] == Approx(acc + v[t]).margin(1e-12));
    }
  }
}

TEST_CASE("advantage normalization", "[ppo]") {
  Rng rng(9);
  std::vector<double> a(37);
  for (auto& x : a) x = 3.0 + 5.0 * testing::gaussian(rng);
  normalize_advantages(a);
  const auto ms = mean_std(a);
  CHECK(std::abs(ms.mean) < 1e-10);
  CHECK(std::abs(ms.std - 1.0) < 1e-10);
  std::vector<double> flat(4, 2.0);
  normalize_advantages(flat);
  CHECK(flat == std::vector<double>(4, 0.0));
}

TEST_CASE("clipped surrogate cases", "[ppo]") {
  PolicyShape shape;
  shape.input = 1;
  shape.hidden = {};
  shape.gates = 2;
  shape.perms = 1;
  PolicyParams p(shape);  // uniform: log p(action) = log 0.5
  PPOConfig cfg;
  cfg.entropy_coef = 0.0;
  cfg.value_coef = 0.0;
  RolloutBuffer b;
  b.push(std::vector<double>{1.0}, Action{0, 0}, std::log(0.5), 0.0, 0.0, true);
  b.advantages = {1.0};
  b.returns = {0.0};
  const std::vector<std::size_t> idx{0};

  // ratio 1: both branches agree.
  CHECK(ppo_loss(p, b, idx, cfg).policy == Approx(-1.0));
  CHECK(ppo_loss(p, b, idx, cfg).clip_fraction == 0.0);

  // ratio 2 with A > 0: clipped at 1.2.
  b.log_probs = {std::log(0.25)};
  CHECK(ppo_loss(p, b, idx, cfg).policy == Approx(-1.2));
  CHECK(ppo_loss(p, b, idx, cfg).clip_fraction == 1.0);
  std::vector<double> grad(p.size(), 0.0);
  ppo_loss(p, b, idx, cfg, grad);
  for (double g : grad) CHECK(g == 0.0);

  // ratio 2 with A < 0: the unclipped branch is the minimum.
  b.advantages = {-1.0};
  CHECK(ppo_loss(p, b, idx, cfg).policy == Approx(2.0));
  // ratio 0.5 with A < 0: clipped at 0.8.
  b.log_probs = {std::log(1.0)};
  CHECK(ppo_loss(p, b, idx, cfg).policy == Approx(0.8));
}

TEST_CASE("full loss gradient matches finite differences", "[ppo][gradient]") {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    auto c = testing::random_gradient_case(rng);
    CHECK(testing::max_gradient_error(c) < 1e-4);
  }
}

TEST_CASE("stored log-probs match recomputed head probabilities", "[ppo]") {
  EnvConfig env;
  env.target_mode = RandomTarget{2};
  PPOConfig cfg;
  cfg.total_steps = 300;
  cfg.rollout_length = 300;
  cfg.epochs = 1;
  // Record the buffer by replaying training's first rollout manually.
  Environment e(env);
  Rng env_rng(derive_seed(cfg.seed, 0));
  Rng policy_rng(derive_seed(cfg.seed, 1));
  const auto params = init_policy(policy_shape_for(e, cfg.hidden), policy_rng);
  auto obs = e.reset(env_rng);
  for (int t = 0; t < 100; ++t) {
    const auto out = policy_forward(params, obs.values);
    const auto pg = softmax(out.gate_logits);
    const auto pp = softmax(out.perm_logits);
    Action a{sample_categorical(pg, policy_rng), sample_categorical(pp, policy_rng)};
    const double logp = log_softmax(out.gate_logits)[a.gate_index] +
                        log_softmax(out.perm_logits)[a.perm_index];
    CHECK(std::abs(std::exp(logp) - pg[a.gate_index] * pp[a.perm_index]) < 1e-10);
    auto r = e.step(a);
    obs = r.done() ? e.reset(env_rng) : r.observation;
  }
}

TEST_CASE("ppo config validation", "[ppo]") {
  PPOConfig c;
  CHECK_NOTHROW(c.validate());
  c.clip_epsilon = 1.0;
  CHECK_THROWS(c.validate());
  c = {};
  c.gamma = 1.0;
  CHECK_THROWS(c.validate());
  c = {};
  c.minibatch_size = c.rollout_length + 1;
  CHECK_THROWS(c.validate());
  c = {};
  c.learning_rate = 0.0;
  CHECK_THROWS(c.validate());
}

TEST_CASE("training with zero steps returns initial parameters", "[ppo][train]") {
  EnvConfig env;
  PPOConfig cfg;
  cfg.total_steps = 0;
  const auto r = train(env, cfg);
  CHECK(r.episodes.empty());
  CHECK(r.updates.empty());
  Environment e(env);
  Rng rng(derive_seed(cfg.seed, 1));
  CHECK(r.params == init_policy(policy_shape_for(e, cfg.hidden), rng));
}

TEST_CASE("training is reproducible per seed", "[ppo][train]") {
  EnvConfig env;
  env.target_mode = RandomTarget{2};
  PPOConfig cfg;
  cfg.total_steps = 3000;
  const auto a = train(env, cfg);
  const auto b = train(env, cfg);
  REQUIRE(a.episodes.size() == b.episodes.size());
  for (std::size_t i = 0; i < a.episodes.size(); ++i) {
    CHECK(to_csv_row(a.episodes[i]) == to_csv_row(b.episodes[i]));
  }
  CHECK(a.params == b.params);
  cfg.seed = 2;
  const auto c = train(env, cfg);
  CHECK_FALSE(c.params == a.params);
  CHECK(a.params.all_finite());
  CHECK(a.updates.size() == (3000 + cfg.rollout_length - 1) / cfg.rollout_length);
}

TEST_CASE("checkpoint callback fires on schedule", "[ppo][train]") {
  EnvConfig env;
  env.target_mode = RandomTarget{1};
  PPOConfig cfg;
  cfg.total_steps = 1000;
  cfg.checkpoint_interval = 250;
  std::vector<std::size_t> at;
  TrainOptions opts;
  opts.on_checkpoint = [&](const PolicyParams& p, std::size_t step) {
    CHECK(p.all_finite());
    at.push_back(step);
  };
  train(env, cfg, opts);
  CHECK(at == std::vector<std::size_t>{250, 500, 750, 1000});
}
