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

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include "qcsyn/bench.hpp"
#include "qcsyn/environment.hpp"
#include "qcsyn/episode_log.hpp"
#include "qcsyn/ppo.hpp"

namespace qcsyn {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Everything a command needs. Serialized as flat `key = value` lines with
/// dotted keys; see config_schema() for the key list.
struct RunConfig {
  struct Env {
    std::size_t n = 2;
    std::optional<std::size_t> lambda;       // default 5 when no target file
    std::optional<std::string> target_file;  // JSON amplitudes; exclusive with lambda
    std::size_t max_length = 30;             // L for fixed targets
    double sfe = 0.001;
    std::string reward = "step_penalty";
    double change_epsilon = 0.001;

    friend bool operator==(const Env&, const Env&) = default;
  } env;

  PPOConfig ppo;

  struct Bench {
    std::string level = "easy";
    std::vector<std::string> states;  // empty selects all nine
    std::size_t episodes = 100;
    std::size_t targets = 100;
    std::size_t max_len = 30;
    std::string agent = "random";  // random | oracle | checkpoint
    std::vector<std::string> checkpoints;

    friend bool operator==(const Bench&, const Bench&) = default;
  } bench;

  struct Sweep {
    std::vector<std::size_t> lambdas;
    std::vector<std::string> rewards;

    friend bool operator==(const Sweep&, const Sweep&) = default;
  } sweep;

  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::string output_dir = "runs";

  static constexpr std::size_t kDefaultLambda = 5;

  std::size_t effective_lambda() const { return env.lambda.value_or(kDefaultLambda); }

  friend bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.env == b.env && ppo_equal(a.ppo, b.ppo) && a.bench == b.bench &&
           a.sweep == b.sweep && a.seeds == b.seeds && a.output_dir == b.output_dir;
  }

 private:
  static bool ppo_equal(const PPOConfig& a, const PPOConfig& b) {
    return a.learning_rate == b.learning_rate && a.clip_epsilon == b.clip_epsilon &&
           a.gamma == b.gamma && a.gae_lambda == b.gae_lambda &&
           a.rollout_length == b.rollout_length && a.minibatch_size == b.minibatch_size &&
           a.epochs == b.epochs && a.entropy_coef == b.entropy_coef &&
           a.value_coef == b.value_coef && a.total_steps == b.total_steps &&
           a.hidden == b.hidden && a.checkpoint_interval == b.checkpoint_interval;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

inline std::string unquote(const std::string& raw, const std::string& key) {
  if (raw.size() < 2 || raw.front() != '"' || raw.back() != '"') {
    throw ConfigError("config: " + key + " expects a quoted string, got " + raw);
  }
  std::string out;
  for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
    if (raw[i] == '\\' && i + 2 < raw.size()) ++i;
    out += raw[i];
  }
  return out;
}

template <typename T>
T parse_number(const std::string& raw, const std::string& key) {
  T v{};
  const auto* end = raw.data() + raw.size();
  const auto res = std::from_chars(raw.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw ConfigError("config: " + key + " expects a number, got '" + raw + "'");
  }
  return v;
}

// Splits "[a, b, c]" into trimmed items, respecting quotes.
inline std::vector<std::string> split_list(const std::string& raw, const std::string& key) {
  if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']') {
    throw ConfigError("config: " + key + " expects a list [..], got " + raw);
  }
  std::vector<std::string> items;
  std::string cur;
  bool in_str = false;
  for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
    const char c = raw[i];
    if (c == '"' && (i == 1 || raw[i - 1] != '\\')) in_str = !in_str;
    if (c == ',' && !in_str) {
      items.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !items.empty()) items.push_back(trim(cur));
  for (const auto& it : items) {
    if (it.empty()) throw ConfigError("config: empty list item in " + key);
  }
  return items;
}

}  // namespace detail

/// One configurable key: how to print its current value (nullopt when
/// unset) and how to assign it from text.
struct ConfigKey {
  std::string name;
  std::function<std::optional<std::string>(const RunConfig&)> print;
  std::function<void(RunConfig&, const std::string&)> assign;
};

inline const std::vector<ConfigKey>& config_schema() {
  using detail::parse_number;
  static const std::vector<ConfigKey> schema = [] {
    std::vector<ConfigKey> k;
    auto size_key = [&](std::string name, auto member) {
      k.push_back({name, [member](const RunConfig& c) -> std::optional<std::string> {
                     return std::to_string(member(c));
                   },
                   [member, name](RunConfig& c, const std::string& v) {
                     member(c) = parse_number<std::size_t>(v, name);
                   }});
    };
    auto real_key = [&](std::string name, auto member) {
      k.push_back({name, [member](const RunConfig& c) -> std::optional<std::string> {
                     return format_double(member(c));
                   },
                   [member, name](RunConfig& c, const std::string& v) {
                     member(c) = parse_number<double>(v, name);
                   }});
    };
    auto string_key = [&](std::string name, auto member) {
      k.push_back({name, [member](const RunConfig& c) -> std::optional<std::string> {
                     return detail::quote(member(c));
                   },
                   [member, name](RunConfig& c, const std::string& v) {
                     member(c) = detail::unquote(v, name);
                   }});
    };
    auto string_list_key = [&](std::string name, auto member) {
      k.push_back({name, [member](const RunConfig& c) -> std::optional<std::string> {
                     std::string s = "[";
                     const auto& v = member(c);
                     for (std::size_t i = 0; i < v.size(); ++i) {
                       s += (i ? ", " : "") + detail::quote(v[i]);
                     }
                     return s + "]";
                   },
                   [member, name](RunConfig& c, const std::string& v) {
                     auto& out = member(c);
                     out.clear();
                     for (const auto& it : detail::split_list(v, name)) {
                       out.push_back(detail::unquote(it, name));
                     }
                   }});
    };
    auto int_list_key = [&](std::string name, auto member) {
      k.push_back({name, [member](const RunConfig& c) -> std::optional<std::string> {
                     std::string s = "[";
                     const auto& v = member(c);
                     for (std::size_t i = 0; i < v.size(); ++i) {
                       s += (i ? ", " : "") + std::to_string(v[i]);
                     }
                     return s + "]";
                   },
                   [member, name](RunConfig& c, const std::string& v) {
                     auto& out = member(c);
                     using Elem = typename std::decay_t<decltype(out)>::value_type;
                     out.clear();
                     for (const auto& it : detail::split_list(v, name)) {
                       out.push_back(parse_number<Elem>(it, name));
                     }
                   }});
    };

    size_key("env.n", [](auto& c) -> auto& { return c.env.n; });
    k.push_back({"env.lambda",
                 [](const RunConfig& c) -> std::optional<std::string> {
                   if (!c.env.lambda) return std::nullopt;
                   return std::to_string(*c.env.lambda);
                 },
                 [](RunConfig& c, const std::string& v) {
                   c.env.lambda = parse_number<std::size_t>(v, "env.lambda");
                 }});
    k.push_back({"env.target_file",
                 [](const RunConfig& c) -> std::optional<std::string> {
                   if (!c.env.target_file) return std::nullopt;
                   return detail::quote(*c.env.target_file);
                 },
                 [](RunConfig& c, const std::string& v) {
                   c.env.target_file = detail::unquote(v, "env.target_file");
                 }});
    size_key("env.max_length", [](auto& c) -> auto& { return c.env.max_length; });
    real_key("env.sfe", [](auto& c) -> auto& { return c.env.sfe; });
    string_key("env.reward", [](auto& c) -> auto& { return c.env.reward; });
    real_key("env.change_epsilon", [](auto& c) -> auto& { return c.env.change_epsilon; });

    real_key("ppo.learning_rate", [](auto& c) -> auto& { return c.ppo.learning_rate; });
    real_key("ppo.clip_epsilon", [](auto& c) -> auto& { return c.ppo.clip_epsilon; });
    real_key("ppo.gamma", [](auto& c) -> auto& { return c.ppo.gamma; });
    real_key("ppo.gae_lambda", [](auto& c) -> auto& { return c.ppo.gae_lambda; });
    size_key("ppo.rollout_length", [](auto& c) -> auto& { return c.ppo.rollout_length; });
    size_key("ppo.minibatch_size", [](auto& c) -> auto& { return c.ppo.minibatch_size; });
    size_key("ppo.epochs", [](auto& c) -> auto& { return c.ppo.epochs; });
    real_key("ppo.entropy_coef", [](auto& c) -> auto& { return c.ppo.entropy_coef; });
    real_key("ppo.value_coef", [](auto& c) -> auto& { return c.ppo.value_coef; });
    size_key("ppo.total_steps", [](auto& c) -> auto& { return c.ppo.total_steps; });
    int_list_key("ppo.hidden", [](auto& c) -> auto& { return c.ppo.hidden; });
    size_key("ppo.checkpoint_interval",
             [](auto& c) -> auto& { return c.ppo.checkpoint_interval; });

    string_key("bench.level", [](auto& c) -> auto& { return c.bench.level; });
    string_list_key("bench.states", [](auto& c) -> auto& { return c.bench.states; });
    size_key("bench.episodes", [](auto& c) -> auto& { return c.bench.episodes; });
    size_key("bench.targets", [](auto& c) -> auto& { return c.bench.targets; });
    size_key("bench.max_len", [](auto& c) -> auto& { return c.bench.max_len; });
    string_key("bench.agent", [](auto& c) -> auto& { return c.bench.agent; });
    string_list_key("bench.checkpoints", [](auto& c) -> auto& { return c.bench.checkpoints; });

    int_list_key("sweep.lambdas", [](auto& c) -> auto& { return c.sweep.lambdas; });
    string_list_key("sweep.rewards", [](auto& c) -> auto& { return c.sweep.rewards; });

    int_list_key("seeds", [](auto& c) -> auto& { return c.seeds; });
    string_key("output_dir", [](auto& c) -> auto& { return c.output_dir; });
    return k;
  }();
  return schema;
}

/// Assigns one `key = value` pair. Unknown keys are rejected.
inline void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& k : config_schema()) {
    if (k.name == key) {
      k.assign(cfg, detail::trim(value));
      return;
    }
  }
  throw ConfigError("config: unknown key '" + key + "'");
}

/// Applies every `key = value` line of `text` on top of `cfg`. Blank lines
/// and lines starting with '#' are skipped.
inline void apply_config_text(RunConfig& cfg, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    try {
      set_config_value(cfg, detail::trim(t.substr(0, eq)), t.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

inline RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  apply_config_text(cfg, text);
  return cfg;
}

/// Canonical text: one line per set key, in schema order.
inline std::string print_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& k : config_schema()) {
    if (auto v = k.print(cfg)) out += k.name + " = " + *v + '\n';
  }
  return out;
}

/// Checks cross-field constraints before any work starts.
inline void validate_config(const RunConfig& cfg) {
  if (cfg.env.lambda && cfg.env.target_file) {
    throw ConfigError(
        "config: env.lambda and env.target_file are mutually exclusive; give exactly one");
  }
  if (cfg.env.n == 0) throw ConfigError("config: env.n must be >= 1");
  if (cfg.env.n > kDefaultMaxQubits) throw ConfigError("config: env.n exceeds the qubit cap");
  if (cfg.env.lambda && *cfg.env.lambda == 0) throw ConfigError("config: env.lambda must be >= 1");
  if (cfg.env.max_length == 0) throw ConfigError("config: env.max_length must be >= 1");
  if (!(cfg.env.sfe > 0.0 && cfg.env.sfe < 1.0)) throw ConfigError("config: env.sfe must be in (0, 1)");
  if (!(cfg.env.change_epsilon > 0.0 && cfg.env.change_epsilon < 1.0)) {
    throw ConfigError("config: env.change_epsilon must be in (0, 1)");
  }
  try {
    parse_reward_kind(cfg.env.reward);
    for (const auto& r : cfg.sweep.rewards) parse_reward_kind(r);
    cfg.ppo.validate();
    if (cfg.bench.level != "all") evaluation_level(cfg.bench.level);
    for (const auto& s : cfg.bench.states) named_state(s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (auto l : cfg.sweep.lambdas) {
    if (l == 0) throw ConfigError("config: sweep.lambdas entries must be >= 1");
  }
  if (cfg.bench.agent != "random" && cfg.bench.agent != "oracle" &&
      cfg.bench.agent != "checkpoint") {
    throw ConfigError("config: bench.agent must be random, oracle or checkpoint");
  }
  if (cfg.bench.max_len == 0) throw ConfigError("config: bench.max_len must be >= 1");
  if (cfg.seeds.empty()) throw ConfigError("config: at least one seed is required");
  if (cfg.output_dir.empty()) throw ConfigError("config: output_dir is empty");
}

/// FNV-1a over the canonical text, first 8 hex digits.
inline std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : print_config(cfg)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf, 8);
}

}  // namespace qcsyn
