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


// Minimal Clifford+T depth and a witness circuit for each well-known state.

#include <iomanip>
#include <iostream>

#include "qcsyn/qcsyn.hpp"

int main() {
  using namespace qcsyn;
  const ActionSpace space(clifford_t(), 2);
  for (const auto& st : well_known_states()) {
    const auto r = min_depth_search(st.state(), space, 8);
    std::cout << std::left << std::setw(26) << st.label << std::setw(8) << st.level
              << std::setw(3) << (r.found() ? std::to_string(*r.min_depth) : "-")
              << space.join_circuit(r.circuit) << "\n";
  }
}
