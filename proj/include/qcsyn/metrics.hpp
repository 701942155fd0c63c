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

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qcsyn {

struct EpisodeOutcome {
  std::size_t lambda = 0;
  std::size_t max_length = 0;
  std::size_t gates_used = 0;
  bool success = false;
  double final_fidelity = 0.0;
};

/// n_g: the number of steps on success, L on truncation.
inline std::size_t gates_used(std::size_t max_length, std::size_t steps_taken, bool success) {
  if (steps_taken > max_length) {
    throw std::invalid_argument("gates_used: steps_taken exceeds max_length");
  }
  return success ? steps_taken : max_length;
}

/// Lambda = n_g / lambda * 100, in percent.
inline double reconstructed_depth(std::size_t gates, std::size_t lambda) {
  if (lambda == 0) throw std::invalid_argument("reconstructed_depth: lambda must be >= 1");
  return static_cast<double>(gates) / static_cast<double>(lambda) * 100.0;
}

inline double reconstructed_depth(const EpisodeOutcome& o) {
  return reconstructed_depth(o.gates_used, o.lambda);
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

/// Arithmetic mean and population standard deviation. Empty input gives
/// (0, 0).
inline MeanStd mean_std(std::span<const double> xs) {
  MeanStd r;
  if (xs.empty()) return r;
  double sum = 0.0;
  for (double x : xs) sum += x;
  r.mean = sum / static_cast<double>(xs.size());
  double sq = 0.0;
  for (double x : xs) sq += (x - r.mean) * (x - r.mean);
  r.std = std::sqrt(sq / static_cast<double>(xs.size()));
  return r;
}

inline constexpr std::size_t kDefaultMetricWindow = 100;

/// Mean and population std of Lambda over the last `window` outcomes.
inline MeanStd trailing_mean(std::span<const EpisodeOutcome> outcomes,
                             std::size_t window = kDefaultMetricWindow) {
  if (window == 0) throw std::invalid_argument("trailing_mean: window must be >= 1");
  if (outcomes.size() < window) {
    throw std::invalid_argument("trailing_mean: need " + std::to_string(window) +
                                " episodes, have " + std::to_string(outcomes.size()));
  }
  std::vector<double> values;
  values.reserve(window);
  for (std::size_t i = outcomes.size() - window; i < outcomes.size(); ++i) {
    values.push_back(reconstructed_depth(outcomes[i]));
  }
  return mean_std(values);
}

}  // namespace qcsyn
