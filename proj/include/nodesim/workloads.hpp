/*
 * Copyright 2026 The nodesim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <string>
#include <vector>

#include "nodesim/sim.hpp"

namespace nodesim::workloads {

// Ordered optimization levels; each adds a capability on top of the previous.
enum class OptLevel { SW1, SW4, SW4_SIMD, HWCE16, HWCE8, HWCE4, PLUS_HWCRYPT };

const std::vector<OptLevel>& all_levels();
const char* level_name(OptLevel l);
OptLevel level_from_name(const std::string& name);

const std::vector<std::string>& usecase_ids();

// Directory holding usecases/*.json; defaults to the NODESIM_DATA environment
// variable, falling back to the source tree's data directory.
std::string default_data_dir();

// Full phase graph for one iteration of the use case at the given level,
// including the duty-cycle SLEEP remainder when the case is periodic.
sim::Scenario build(const std::string& id, OptLevel level, double vdd,
                    const perf::Calibration& cal,
                    const std::string& data_dir = default_data_dir());

double equivalent_ops(const std::string& id,
                      const std::string& data_dir = default_data_dir());

// Operating voltage each use case is evaluated at by default.
double default_vdd(const std::string& id,
                   const std::string& data_dir = default_data_dir());

struct BatteryProjection {
  double energy_per_iter_j = 0;
  double period_s = 0;  // per-iteration wall time (active, or cadence if periodic)
  double iterations = 0;
  double lifetime_s = 0;
};

BatteryProjection battery_projection(const std::string& id, OptLevel level, double vdd,
                                     double battery_joules,
                                     const perf::Calibration& cal,
                                     const std::string& data_dir = default_data_dir());

}  // namespace nodesim::workloads
