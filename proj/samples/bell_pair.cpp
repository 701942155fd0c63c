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


// Prepares the Bell state (|00> + |11>)/sqrt2 by hand and with the oracle.

#include <iostream>

#include "qcsyn/qcsyn.hpp"

int main() {
  using namespace qcsyn;
  const ActionSpace space(clifford_t(), 2);
  const auto target = named_state("bell-phi-plus").state();

  const auto by_hand = space.parse_circuit(std::vector<std::string>{"H q0", "CNOT q0 q1"});
  const auto state = space.replay(ground_state(2), by_hand);
  std::cout << "amplitudes: " << state_to_json(state).dump() << "\n";
  std::cout << "fidelity:   " << fidelity_pure(state, target) << "\n";

  const auto found = min_depth_search(target, space, 8);
  std::cout << "oracle:     " << space.join_circuit(found.circuit) << " (depth "
            << *found.min_depth << ", " << found.states_explored << " states)\n";
}
