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

#include <string>

#include "qcsyn/config.hpp"
#include "qcsyn/run.hpp"

using namespace qcsyn;

TEST_CASE("defaults follow the reference setup", "[config]") {
  const RunConfig cfg;
  CHECK(cfg.env.n == 2);
  CHECK(cfg.effective_lambda() == 5);
  CHECK(cfg.env.sfe == 0.001);
  CHECK(cfg.env.reward == "step_penalty");
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(cfg.ppo.learning_rate == 0.001);
  CHECK(cfg.ppo.clip_epsilon == 0.2);
  CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("config text round trip", "[config]") {
  RunConfig cfg;
  CHECK(parse_config(print_config(cfg)) == cfg);

  cfg.env.n = 3;
  cfg.env.lambda = 4;
  cfg.env.sfe = 0.0005;
  cfg.env.reward = "distance";
  cfg.ppo.learning_rate = 0.0003;
  cfg.ppo.hidden = {32, 16, 8};
  cfg.bench.states = {"bell-phi-plus", "ket-11"};
  cfg.bench.checkpoints = {"a b/c.json", "quote\"d.json"};
  cfg.sweep.lambdas = {2, 3, 4, 5};
  cfg.sweep.rewards = {"step_penalty", "distance"};
  cfg.seeds = {7};
  cfg.output_dir = "out dir";
  const auto text = print_config(cfg);
  CHECK(parse_config(text) == cfg);
  CHECK(print_config(parse_config(text)) == text);

  RunConfig file_target;
  file_target.env.target_file = "target.json";
  CHECK(parse_config(print_config(file_target)) == file_target);
}

TEST_CASE("config parsing errors", "[config]") {
  CHECK_THROWS_AS(parse_config("env.colour = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("env.n 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("env.n = three\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("env.n = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("seeds = 1, 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("env.reward = distance\n"), ConfigError);
  const auto ok = parse_config("# comment\n\nenv.n = 3\nseeds = [4, 5]\nenv.reward = \"distance\"\n");
  CHECK(ok.env.n == 3);
  CHECK(ok.seeds == std::vector<std::uint64_t>{4, 5});
  CHECK(ok.env.reward == "distance");
}

TEST_CASE("cross-field validation", "[config]") {
  RunConfig cfg;
  cfg.env.lambda = 5;
  cfg.env.target_file = "x.json";
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  cfg = {};
  cfg.env.reward = "fidelity";
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  cfg = {};
  cfg.seeds.clear();
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  cfg = {};
  cfg.bench.level = "all";
  CHECK_NOTHROW(validate_config(cfg));
  cfg.bench.level = "expert";
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  cfg = {};
  cfg.bench.states = {"ghz"};
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  cfg = {};
  cfg.ppo.clip_epsilon = 1.5;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  cfg = {};
  cfg.sweep.lambdas = {0};
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
}

TEST_CASE("hashes and run ids", "[config]") {
  RunConfig a;
  RunConfig b;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 8);
  b.env.lambda = 3;
  CHECK(config_hash(a) != config_hash(b));
  RunConfig c = a;
  c.seeds = {9};
  c.output_dir = "elsewhere";
  CHECK(experiment_hash(a) == experiment_hash(c));
  CHECK(run_id("train", a, 2) == "train-" + experiment_hash(a) + "-s2");
}

TEST_CASE("multi-seed aggregation", "[config]") {
  RunConfig cfg;
  const auto same = run_multi_seed(cfg, [](std::uint64_t) -> std::optional<double> { return 120.0; });
  REQUIRE(same.metric.has_value());
  CHECK(same.metric->std == 0.0);
  CHECK_FALSE(same.partial);
  CHECK_FALSE(same.single_seed);

  const auto varied =
      run_multi_seed(cfg, [](std::uint64_t s) -> std::optional<double> { return 100.0 * s; });
  CHECK(varied.metric->mean == 200.0);
  CHECK(varied.metric->std > 0.0);

  cfg.seeds = {4};
  const auto one = run_multi_seed(cfg, [](std::uint64_t) -> std::optional<double> { return 1.0; });
  CHECK(one.single_seed);
  CHECK(one.metric->std == 0.0);

  cfg.seeds = {1, 2};
  const auto broken = run_multi_seed(cfg, [](std::uint64_t s) -> std::optional<double> {
    if (s == 2) throw std::runtime_error("boom");
    return 1.0;
  });
  CHECK(broken.partial);
  CHECK(broken.seeds[1].error == "boom");
  CHECK(to_json(broken)["partial"] == true);
}
