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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "nodesim/common.hpp"

namespace nodesim::perf {

// Synthesis-defined operating modes: full crypto + CNN + cores, sponge-only
// crypto + CNN + cores, and cores-only (fastest).
enum class OperatingMode { CRY_CNN_SW, KEC_CNN_SW, SW };

const char* mode_name(OperatingMode m);
OperatingMode mode_from_name(const std::string& name);

struct OperatingPoint {
  OperatingMode mode = OperatingMode::CRY_CNN_SW;
  double vdd = 0.8;
  double freq_hz = 0;
};

enum class Unit { CORES1, CORES4, HWCRYPT, HWCE, DMA, SOC };

// Timing/power coefficient tables, immutable after load.  Every entry has a
// provenance string: "measured", "derived", or "fitted".
struct Calibration {
  // mode name -> sorted (vdd, hz) anchor points, piecewise-linear between.
  std::map<std::string, std::vector<std::pair<double, double>>> frequencies;
  std::map<std::string, double> cost;   // cycle coefficients
  std::map<std::string, double> power;  // mW; per-vdd keys end in "@0.8"/"@1.2"
  std::map<std::string, std::string> provenance;

  static Calibration defaults();
  static Calibration load_file(const std::string& path);
  void save_file(const std::string& path) const;

  double cost_at(const std::string& key) const;    // throws UnknownKernel
  double power_at(const std::string& key, double vdd) const;  // throws UnknownUnit
  std::string hash() const;  // stable content hash, embedded in reports
};

enum class CryptKind { ECB, XTS, SPONGE_AE };

double frequency_of(const Calibration& cal, OperatingMode mode, double vdd);
OperatingPoint make_point(const Calibration& cal, OperatingMode mode, double vdd);

// ECB/XTS: setup + cpb * nbytes.  Sponge: the rate-128/20-round cpb scaled
// structurally by permutation-call count, (128/rate) * ceil(rounds/3)/7.
double cycles_hwcrypt(const Calibration& cal, CryptKind kind, uint64_t nbytes,
                      int rate_bits = 128, int rounds = 20);

// Line-buffer fill (per tile) + cycles-per-pixel * output area.
double cycles_hwce(const Calibration& cal, uint64_t out_pixels, int fs,
                   int precision, int tiles = 1);

// Table-driven software kernels; kernel ids: conv5x5, conv3x3 (work = output
// pixels), aes_ecb, aes_xts (work = bytes), dense, pca, dwt, svm (work =
// single-core reference cycles).
double cycles_sw(const Calibration& cal, const std::string& kernel,
                 double work_units, int cores, bool simd);

// Cluster-idle + FLL baseline plus the incremental power of each active unit;
// HWCRYPT draw depends on the mode's engine configuration.
double power_mw(const Calibration& cal, const OperatingPoint& point,
                const std::set<Unit>& active);

double energy_j(const Calibration& cal, double cycles, const OperatingPoint& point,
                const std::set<Unit>& active);

double deep_sleep_mw(const Calibration& cal);
double mode_switch_seconds(const Calibration& cal, OperatingMode from,
                           OperatingMode to);

}  // namespace nodesim::perf
