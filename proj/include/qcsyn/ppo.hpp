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
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qcsyn/agent.hpp"
#include "qcsyn/environment.hpp"
#include "qcsyn/episode_log.hpp"
#include "qcsyn/metrics.hpp"
#include "qcsyn/policy.hpp"
#include "qcsyn/rng.hpp"

namespace qcsyn {

struct PPOConfig {
  double learning_rate = 0.001;
  double clip_epsilon = 0.2;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  std::size_t rollout_length = 256;
  std::size_t minibatch_size = 8;
  std::size_t epochs = 10;
  double entropy_coef = 0.01;
  double value_coef = 0.5;
  std::size_t total_steps = 100000;
  std::uint64_t seed = 1;
  std::vector<std::size_t> hidden{64, 64};
  /// Steps between checkpoint callbacks; 0 disables them.
  std::size_t checkpoint_interval = 0;

  void validate() const {
    if (!(clip_epsilon > 0.0 && clip_epsilon < 1.0)) {
      throw std::invalid_argument("PPOConfig: clip_epsilon must be in (0, 1)");
    }
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("PPOConfig: gamma must be in [0, 1)");
    if (!(gae_lambda >= 0.0 && gae_lambda < 1.0)) {
      throw std::invalid_argument("PPOConfig: gae_lambda must be in [0, 1)");
    }
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
      throw std::invalid_argument("PPOConfig: learning_rate must be positive");
    }
    if (rollout_length == 0 || minibatch_size == 0 || epochs == 0) {
      throw std::invalid_argument("PPOConfig: rollout_length, minibatch_size and epochs must be >= 1");
    }
    if (minibatch_size > rollout_length) {
      throw std::invalid_argument("PPOConfig: minibatch_size exceeds rollout_length");
    }
    if (entropy_coef < 0.0 || value_coef < 0.0) {
      throw std::invalid_argument("PPOConfig: loss coefficients must be non-negative");
    }
  }
};

struct RolloutBuffer {
  std::size_t obs_dim = 0;
  std::vector<double> observations;  // size() * obs_dim
  std::vector<Action> actions;
  std::vector<double> log_probs;  // joint log p(gate) + log p(perm) at collection time
  std::vector<double> rewards;
  std::vector<double> values;
  std::vector<std::uint8_t> dones;  // episode ended after this step
  double bootstrap_value = 0.0;     // V of the state following the last step
  std::vector<double> advantages;
  std::vector<double> returns;

  std::size_t size() const noexcept { return rewards.size(); }

  std::span<const double> observation(std::size_t t) const {
    return std::span<const double>(observations).subspan(t * obs_dim, obs_dim);
  }

  void clear() {
    observations.clear();
    actions.clear();
    log_probs.clear();
    rewards.clear();
    values.clear();
    dones.clear();
    advantages.clear();
    returns.clear();
    bootstrap_value = 0.0;
  }

  void push(std::span<const double> obs, Action a, double log_prob, double reward, double value,
            bool done) {
    if (obs_dim == 0) obs_dim = obs.size();
    if (obs.size() != obs_dim) throw std::invalid_argument("RolloutBuffer: observation size");
    observations.insert(observations.end(), obs.begin(), obs.end());
    actions.push_back(a);
    log_probs.push_back(log_prob);
    rewards.push_back(reward);
    values.push_back(value);
    dones.push_back(done ? 1 : 0);
  }
};

/// Generalized advantage estimation:
///   delta_t = r_t + gamma V(s_{t+1}) (1 - done_t) - V(s_t)
///   A_t     = delta_t + gamma lambda (1 - done_t) A_{t+1}
///   R_t     = A_t + V(s_t)
inline void compute_gae(RolloutBuffer& buf, double gamma, double gae_lambda) {
  const std::size_t n = buf.size();
  buf.advantages.assign(n, 0.0);
  buf.returns.assign(n, 0.0);
  double next_adv = 0.0;
  double next_value = buf.bootstrap_value;
  for (std::size_t t = n; t-- > 0;) {
    const double not_done = buf.dones[t] ? 0.0 : 1.0;
    const double delta = buf.rewards[t] + gamma * next_value * not_done - buf.values[t];
    next_adv = delta + gamma * gae_lambda * not_done * next_adv;
    buf.advantages[t] = next_adv;
    buf.returns[t] = next_adv + buf.values[t];
    next_value = buf.values[t];
  }
}

/// Shifts to mean 0 and scales to population std 1. A constant vector is
/// only centered.
inline void normalize_advantages(std::span<double> adv) {
  if (adv.empty()) return;
  const auto ms = mean_std(std::span<const double>(adv.data(), adv.size()));
  for (auto& a : adv) a -= ms.mean;
  if (ms.std > 0.0) {
    for (auto& a : adv) a /= ms.std;
  }
}

struct LossStats {
  double total = 0.0;
  double policy = 0.0;
  double value = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
};

/// Mean PPO loss over the samples `indices` of `buf`:
///   -min(rho A, clip(rho, 1-eps, 1+eps) A) + c_v (V - R)^2 - c_e H
/// where rho is the joint probability ratio and H the sum of the two head
/// entropies. When `grad` is non-empty the gradient is accumulated into it.
inline LossStats ppo_loss(const PolicyParams& params, const RolloutBuffer& buf,
                          std::span<const std::size_t> indices, const PPOConfig& cfg,
                          std::span<double> grad = {}) {
  LossStats stats;
  if (indices.empty()) return stats;
  const double inv_n = 1.0 / static_cast<double>(indices.size());
  const double eps = cfg.clip_epsilon;
  for (const std::size_t t : indices) {
    const auto cache = policy_forward(params, buf.observation(t));
    const auto lg = log_softmax(cache.gate_logits);
    const auto lp = log_softmax(cache.perm_logits);
    const Action a = buf.actions[t];
    const double logp = lg.at(a.gate_index) + lp.at(a.perm_index);
    const double ratio = std::exp(logp - buf.log_probs[t]);
    const double adv = buf.advantages[t];
    const double unclipped = ratio * adv;
    const double clipped = std::clamp(ratio, 1.0 - eps, 1.0 + eps) * adv;
    const double surrogate = std::min(unclipped, clipped);
    const double v_err = cache.value - buf.returns[t];
    const double h_gate = entropy_from_log_probs(lg);
    const double h_perm = entropy_from_log_probs(lp);

    stats.policy += -surrogate * inv_n;
    stats.value += v_err * v_err * inv_n;
    stats.entropy += (h_gate + h_perm) * inv_n;
    if (clipped < unclipped) stats.clip_fraction += inv_n;

    if (grad.empty()) continue;
    // d(-surrogate)/d(logp): the unclipped branch carries the gradient when
    // it is the minimum; the clipped branch is constant in the parameters.
    const double d_logp = unclipped <= clipped ? -unclipped * inv_n : 0.0;
    const double d_entropy = -cfg.entropy_coef * inv_n;
    auto head_grad = [&](const std::vector<double>& logp_head, std::size_t chosen, double h) {
      std::vector<double> d(logp_head.size());
      for (std::size_t i = 0; i < d.size(); ++i) {
        const double p = std::exp(logp_head[i]);
        // d log p_chosen / d z_i = [i == chosen] - p_i
        // d H / d z_i = -p_i (log p_i + H)
        d[i] = d_logp * ((i == chosen ? 1.0 : 0.0) - p) + d_entropy * (-p * (logp_head[i] + h));
      }
      return d;
    };
    const auto dg = head_grad(lg, a.gate_index, h_gate);
    const auto dp = head_grad(lp, a.perm_index, h_perm);
    const double dv = 2.0 * cfg.value_coef * v_err * inv_n;
    policy_backward(params, cache, dg, dp, dv, grad);
  }
  stats.total = stats.policy + cfg.value_coef * stats.value - cfg.entropy_coef * stats.entropy;
  return stats;
}

/// Fisher-Yates with the toolkit's Rng, so shuffles are reproducible across
/// standard libraries.
inline void shuffle_indices(std::span<std::size_t> v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.uniform_index(i));
    std::swap(v[i - 1], v[j]);
  }
}

struct UpdateDiagnostics {
  LossStats last;
  LossStats mean;
  std::size_t minibatches = 0;
};

/// Normalizes the buffer's advantages, then runs `epochs` passes of
/// shuffled minibatch gradient descent with step size learning_rate.
inline UpdateDiagnostics ppo_update(PolicyParams& params, RolloutBuffer& buf, const PPOConfig& cfg,
                                    Rng& rng) {
  if (buf.advantages.size() != buf.size()) {
    throw std::logic_error("ppo_update: advantages not computed");
  }
  normalize_advantages(buf.advantages);
  std::vector<std::size_t> order(buf.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> grad(params.size());
  UpdateDiagnostics diag;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_indices(order, rng);
    for (std::size_t start = 0; start < order.size(); start += cfg.minibatch_size) {
      const std::size_t len = std::min(cfg.minibatch_size, order.size() - start);
      std::fill(grad.begin(), grad.end(), 0.0);
      const auto stats =
          ppo_loss(params, buf, std::span<const std::size_t>(order).subspan(start, len), cfg, grad);
      if (!std::isfinite(stats.total)) {
        std::ostringstream msg;
        msg << "ppo_update: non-finite loss at epoch " << epoch << ", minibatch "
            << start / cfg.minibatch_size << " (policy " << stats.policy << ", value "
            << stats.value << ", entropy " << stats.entropy << ")";
        throw std::runtime_error(msg.str());
      }
      auto vals = params.values();
      for (std::size_t i = 0; i < vals.size(); ++i) vals[i] -= cfg.learning_rate * grad[i];
      diag.last = stats;
      diag.mean.total += stats.total;
      diag.mean.policy += stats.policy;
      diag.mean.value += stats.value;
      diag.mean.entropy += stats.entropy;
      diag.mean.clip_fraction += stats.clip_fraction;
      ++diag.minibatches;
    }
  }
  if (diag.minibatches) {
    const double k = 1.0 / static_cast<double>(diag.minibatches);
    diag.mean.total *= k;
    diag.mean.policy *= k;
    diag.mean.value *= k;
    diag.mean.entropy *= k;
    diag.mean.clip_fraction *= k;
  }
  if (!params.all_finite()) throw std::runtime_error("ppo_update: parameters became non-finite");
  return diag;
}

struct TrainOptions {
  std::string run_id = "run";
  /// Called every checkpoint_interval environment steps.
  std::function<void(const PolicyParams&, std::size_t step)> on_checkpoint;
};

struct TrainResult {
  PolicyParams params;
  std::vector<EpisodeRecord> episodes;
  std::vector<UpdateDiagnostics> updates;

  std::vector<EpisodeOutcome> outcomes() const {
    std::vector<EpisodeOutcome> out;
    out.reserve(episodes.size());
    for (const auto& e : episodes) out.push_back(e.outcome());
    return out;
  }
};

inline PolicyShape policy_shape_for(const Environment& env, const std::vector<std::size_t>& hidden) {
  PolicyShape s;
  s.input = env.observation_size();
  s.hidden = hidden;
  s.gates = env.action_space().gate_count();
  s.perms = env.action_space().perm_count();
  return s;
}

/// Single-threaded PPO training. Random streams are derived from cfg.seed:
/// stream 0 drives targets, 1 initializes and samples the policy, 2
/// shuffles minibatches. Same configs give the same episode log.
inline TrainResult train(const EnvConfig& env_config, const PPOConfig& cfg,
                         const TrainOptions& options = {}) {
  cfg.validate();
  Environment env(env_config);
  Rng env_rng(derive_seed(cfg.seed, 0));
  Rng policy_rng(derive_seed(cfg.seed, 1));
  Rng update_rng(derive_seed(cfg.seed, 2));

  TrainResult result;
  result.params = init_policy(policy_shape_for(env, cfg.hidden), policy_rng);
  if (cfg.total_steps == 0) return result;

  const auto& space = env.action_space();
  RolloutBuffer buf;
  Observation obs = env.reset(env_rng);
  std::size_t steps = 0;
  while (steps < cfg.total_steps) {
    buf.clear();
    const std::size_t horizon = std::min(cfg.rollout_length, cfg.total_steps - steps);
    for (std::size_t k = 0; k < horizon; ++k) {
      const auto out = policy_forward(result.params, obs.values);
      const auto lg = log_softmax(out.gate_logits);
      const auto lp = log_softmax(out.perm_logits);
      std::vector<double> pg(lg.size()), pp(lp.size());
      std::transform(lg.begin(), lg.end(), pg.begin(), [](double v) { return std::exp(v); });
      std::transform(lp.begin(), lp.end(), pp.begin(), [](double v) { return std::exp(v); });
      Action a;
      a.gate_index = sample_categorical(pg, policy_rng);
      a.perm_index = sample_categorical(pp, policy_rng);

      auto step = env.step(a);
      ++steps;
      buf.push(obs.values, a, lg[a.gate_index] + lp[a.perm_index], step.reward, out.value,
               step.done());
      if (step.done()) {
        EpisodeRecord rec;
        rec.run_id = options.run_id;
        rec.episode = result.episodes.size();
        rec.seed = cfg.seed;
        rec.n = env_config.n;
        rec.lambda = env.lambda();
        rec.max_length = env.max_length();
        rec.success = step.status == EpisodeStatus::Success;
        rec.gates_used = *step.info.gates_used;
        rec.total_reward = env.total_reward();
        rec.final_fidelity = step.info.fidelity;
        rec.circuit = space.join_circuit(env.actions_taken());
        result.episodes.push_back(std::move(rec));
        obs = env.reset(env_rng);
      } else {
        obs = std::move(step.observation);
      }
      if (cfg.checkpoint_interval && options.on_checkpoint && steps % cfg.checkpoint_interval == 0) {
        options.on_checkpoint(result.params, steps);
      }
    }
    buf.bootstrap_value = buf.dones.back() ? 0.0 : policy_forward(result.params, obs.values).value;
    compute_gae(buf, cfg.gamma, cfg.gae_lambda);
    if (buf.size() >= 2) result.updates.push_back(ppo_update(result.params, buf, cfg, update_rng));
  }
  return result;
}

}  // namespace qcsyn
