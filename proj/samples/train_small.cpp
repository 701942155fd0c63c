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


// Trains a PPO agent on depth-1 targets and compares it with a random agent.

#include <iostream>

#include "qcsyn/qcsyn.hpp"

int main() {
  using namespace qcsyn;
  EnvConfig env;
  env.target_mode = RandomTarget{1};

  PPOConfig ppo;
  ppo.seed = 1;
  ppo.total_steps = 20000;
  const auto result = train(env, ppo);
  const auto trained = trailing_mean(result.outcomes());
  std::cout << "episodes:        " << result.episodes.size() << "\n";
  std::cout << "trained Lambda:  " << trained.mean << "% +- " << trained.std << "\n";

  const auto level = evaluation_level("easy");
  PolicyAgent agent(result.params);
  RandomAgent baseline(clifford_t(), 2);
  const auto a = eval_random_targets(agent, level, 100, 7).groups.front();
  const auto b = eval_random_targets(baseline, level, 100, 7).groups.front();
  std::cout << "easy level n_g:  trained " << a.mean_gates << ", random " << b.mean_gates << "\n";
}
