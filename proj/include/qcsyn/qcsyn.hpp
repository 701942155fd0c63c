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

#include "qcsyn/agent.hpp"
#include "qcsyn/bench.hpp"
#include "qcsyn/config.hpp"
#include "qcsyn/environment.hpp"
#include "qcsyn/episode_log.hpp"
#include "qcsyn/gateset.hpp"
#include "qcsyn/metrics.hpp"
#include "qcsyn/oracle.hpp"
#include "qcsyn/policy.hpp"
#include "qcsyn/ppo.hpp"
#include "qcsyn/quantum_state.hpp"
#include "qcsyn/rng.hpp"
#include "qcsyn/run.hpp"
#include "qcsyn/target_gen.hpp"
