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
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qcsyn/rng.hpp"

namespace qcsyn {

/// Geometry of the actor-critic network: a tanh trunk followed by three
/// linear heads (gate logits, permutation logits, state value).
struct PolicyShape {
  std::size_t input = 0;
  std::vector<std::size_t> hidden{64, 64};
  std::size_t gates = 0;
  std::size_t perms = 0;

  friend bool operator==(const PolicyShape&, const PolicyShape&) = default;
};

struct DenseSlot {
  std::string name;
  std::size_t in = 0;
  std::size_t out = 0;
  std::size_t w_offset = 0;  // out x in, row-major
  std::size_t b_offset = 0;

  friend bool operator==(const DenseSlot&, const DenseSlot&) = default;
};

/// All trainable parameters in one flat vector; layers are views into it.
class PolicyParams {
 public:
  PolicyParams() = default;

  explicit PolicyParams(PolicyShape shape) : shape_(std::move(shape)) {
    if (shape_.input == 0 || shape_.gates == 0 || shape_.perms == 0) {
      throw std::invalid_argument("PolicyParams: zero-sized input or head");
    }
    std::size_t prev = shape_.input;
    std::size_t offset = 0;
    auto add = [&](std::string name, std::size_t in, std::size_t out) {
      DenseSlot s{std::move(name), in, out, offset, offset + in * out};
      offset += in * out + out;
      slots_.push_back(std::move(s));
    };
    for (std::size_t i = 0; i < shape_.hidden.size(); ++i) {
      if (shape_.hidden[i] == 0) throw std::invalid_argument("PolicyParams: zero-width layer");
      add("layer." + std::to_string(i), prev, shape_.hidden[i]);
      prev = shape_.hidden[i];
    }
    add("gate_head", prev, shape_.gates);
    add("perm_head", prev, shape_.perms);
    add("value_head", prev, 1);
    values_.assign(offset, 0.0);
  }

  const PolicyShape& shape() const noexcept { return shape_; }
  std::span<const DenseSlot> slots() const noexcept { return slots_; }
  std::size_t trunk_depth() const noexcept { return shape_.hidden.size(); }
  const DenseSlot& gate_head() const { return slots_.at(trunk_depth()); }
  const DenseSlot& perm_head() const { return slots_.at(trunk_depth() + 1); }
  const DenseSlot& value_head() const { return slots_.at(trunk_depth() + 2); }

  std::size_t size() const noexcept { return values_.size(); }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<const double> weights(const DenseSlot& s) const {
    return std::span<const double>(values_).subspan(s.w_offset, s.in * s.out);
  }
  std::span<const double> bias(const DenseSlot& s) const {
    return std::span<const double>(values_).subspan(s.b_offset, s.out);
  }

  bool all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
  }

  friend bool operator==(const PolicyParams&, const PolicyParams&) = default;

 private:
  PolicyShape shape_;
  std::vector<DenseSlot> slots_;
  std::vector<double> values_;
};

/// Weights uniform in +-gain * sqrt(3 / fan_in) (variance gain^2 / fan_in),
/// biases zero. Trunk gain 1, policy heads 0.01 so the initial policy is
/// near uniform, value head 1.
inline PolicyParams init_policy(const PolicyShape& shape, Rng& rng) {
  PolicyParams p(shape);
  auto vals = p.values();
  for (std::size_t i = 0; i < p.slots().size(); ++i) {
    const auto& s = p.slots()[i];
    double gain = 1.0;
    if (i == p.trunk_depth() || i == p.trunk_depth() + 1) gain = 0.01;
    const double a = gain * std::sqrt(3.0 / static_cast<double>(s.in));
    for (std::size_t k = 0; k < s.in * s.out; ++k) {
      vals[s.w_offset + k] = (2.0 * rng.uniform01() - 1.0) * a;
    }
  }
  return p;
}

/// Activations kept for the backward pass.
struct ForwardCache {
  std::vector<double> input;
  std::vector<std::vector<double>> hidden;  // post-tanh, one per trunk layer
  std::vector<double> gate_logits;
  std::vector<double> perm_logits;
  double value = 0.0;
};

namespace detail {

inline void dense_forward(const PolicyParams& p, const DenseSlot& s, std::span<const double> x,
                          std::span<double> y) {
  const auto w = p.weights(s);
  const auto b = p.bias(s);
  for (std::size_t o = 0; o < s.out; ++o) {
    double acc = b[o];
    const double* row = w.data() + o * s.in;
    for (std::size_t i = 0; i < s.in; ++i) acc += row[i] * x[i];
    y[o] = acc;
  }
}

// grad_w += dy x^T, grad_b += dy, dx = W^T dy (dx may be empty).
inline void dense_backward(const PolicyParams& p, const DenseSlot& s, std::span<const double> x,
                           std::span<const double> dy, std::span<double> grad,
                           std::span<double> dx) {
  const auto w = p.weights(s);
  for (std::size_t o = 0; o < s.out; ++o) {
    const double g = dy[o];
    if (g == 0.0) continue;
    double* gw = grad.data() + s.w_offset + o * s.in;
    for (std::size_t i = 0; i < s.in; ++i) gw[i] += g * x[i];
    grad[s.b_offset + o] += g;
    if (!dx.empty()) {
      const double* row = w.data() + o * s.in;
      for (std::size_t i = 0; i < s.in; ++i) dx[i] += row[i] * g;
    }
  }
}

}  // namespace detail

inline ForwardCache policy_forward(const PolicyParams& params, std::span<const double> observation) {
  if (observation.size() != params.shape().input) {
    throw std::invalid_argument("policy_forward: observation has " +
                                std::to_string(observation.size()) + " values, network expects " +
                                std::to_string(params.shape().input));
  }
  ForwardCache c;
  c.input.assign(observation.begin(), observation.end());
  std::span<const double> x = c.input;
  c.hidden.reserve(params.trunk_depth());
  for (std::size_t l = 0; l < params.trunk_depth(); ++l) {
    const auto& s = params.slots()[l];
    std::vector<double> h(s.out);
    detail::dense_forward(params, s, x, h);
    for (auto& v : h) v = std::tanh(v);
    c.hidden.push_back(std::move(h));
    x = c.hidden.back();
  }
  c.gate_logits.resize(params.gate_head().out);
  c.perm_logits.resize(params.perm_head().out);
  double value = 0.0;
  detail::dense_forward(params, params.gate_head(), x, c.gate_logits);
  detail::dense_forward(params, params.perm_head(), x, c.perm_logits);
  detail::dense_forward(params, params.value_head(), x, std::span<double>(&value, 1));
  c.value = value;
  return c;
}

/// Accumulates parameter gradients into `grad` given the loss derivatives
/// with respect to the three head outputs.
inline void policy_backward(const PolicyParams& params, const ForwardCache& cache,
                            std::span<const double> d_gate_logits,
                            std::span<const double> d_perm_logits, double d_value,
                            std::span<double> grad) {
  if (grad.size() != params.size()) throw std::invalid_argument("policy_backward: grad size");
  const std::size_t depth = params.trunk_depth();
  std::span<const double> top = depth ? std::span<const double>(cache.hidden.back())
                                      : std::span<const double>(cache.input);
  std::vector<double> dtop(top.size(), 0.0);
  detail::dense_backward(params, params.gate_head(), top, d_gate_logits, grad, dtop);
  detail::dense_backward(params, params.perm_head(), top, d_perm_logits, grad, dtop);
  detail::dense_backward(params, params.value_head(), top, std::span<const double>(&d_value, 1),
                         grad, dtop);
  for (std::size_t l = depth; l-- > 0;) {
    const auto& h = cache.hidden[l];
    // through tanh: d(pre) = d(post) * (1 - post^2)
    for (std::size_t i = 0; i < h.size(); ++i) dtop[i] *= 1.0 - h[i] * h[i];
    std::span<const double> x = l ? std::span<const double>(cache.hidden[l - 1])
                                  : std::span<const double>(cache.input);
    std::vector<double> dx(l ? x.size() : 0, 0.0);
    detail::dense_backward(params, params.slots()[l], x, dtop, grad, dx);
    dtop = std::move(dx);
  }
}

/// log-softmax, stable against large logits.
inline std::vector<double> log_softmax(std::span<const double> logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double v : logits) z += std::exp(v - m);
  const double lz = m + std::log(z);
  std::vector<double> out(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - lz;
  return out;
}

inline std::vector<double> softmax(std::span<const double> logits) {
  auto out = log_softmax(logits);
  for (auto& v : out) v = std::exp(v);
  return out;
}

inline double entropy_from_log_probs(std::span<const double> log_probs) {
  double h = 0.0;
  for (double lp : log_probs) h -= std::exp(lp) * lp;
  return h;
}

/// Inverse-CDF draw from a categorical distribution given by probabilities.
inline std::size_t sample_categorical(std::span<const double> probs, Rng& rng) {
  const double u = rng.uniform01();
  double cum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cum += probs[i];
    if (u < cum) return i;
  }
  return probs.size() - 1;
}

inline constexpr int kCheckpointVersion = 1;

/// {"version", "shape", "layers": {"layer.0.w": [...], "layer.0.b": [...], ...}}
inline nlohmann::json params_to_json(const PolicyParams& p) {
  nlohmann::json j;
  j["version"] = kCheckpointVersion;
  j["shape"] = {{"input", p.shape().input},
                {"hidden", p.shape().hidden},
                {"gates", p.shape().gates},
                {"perms", p.shape().perms}};
  nlohmann::json layers = nlohmann::json::object();
  for (const auto& s : p.slots()) {
    const auto w = p.weights(s);
    const auto b = p.bias(s);
    layers[s.name + ".w"] = std::vector<double>(w.begin(), w.end());
    layers[s.name + ".b"] = std::vector<double>(b.begin(), b.end());
  }
  j["layers"] = std::move(layers);
  return j;
}

inline PolicyParams params_from_json(const nlohmann::json& j) {
  if (!j.contains("version") || j.at("version").get<int>() != kCheckpointVersion) {
    throw std::invalid_argument("checkpoint: unsupported or missing version");
  }
  PolicyShape shape;
  const auto& js = j.at("shape");
  shape.input = js.at("input").get<std::size_t>();
  shape.hidden = js.at("hidden").get<std::vector<std::size_t>>();
  shape.gates = js.at("gates").get<std::size_t>();
  shape.perms = js.at("perms").get<std::size_t>();
  PolicyParams p(shape);
  auto vals = p.values();
  const auto& layers = j.at("layers");
  for (const auto& s : p.slots()) {
    const auto w = layers.at(s.name + ".w").get<std::vector<double>>();
    const auto b = layers.at(s.name + ".b").get<std::vector<double>>();
    if (w.size() != s.in * s.out || b.size() != s.out) {
      throw std::invalid_argument("checkpoint: shape mismatch in " + s.name);
    }
    std::copy(w.begin(), w.end(), vals.begin() + static_cast<std::ptrdiff_t>(s.w_offset));
    std::copy(b.begin(), b.end(), vals.begin() + static_cast<std::ptrdiff_t>(s.b_offset));
  }
  if (!p.all_finite()) throw std::invalid_argument("checkpoint: non-finite parameter");
  return p;
}

}  // namespace qcsyn
