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
#include <string>
#include <vector>

#include "nodesim/perf.hpp"

namespace nodesim::sim {

enum class PhaseKind { HWCRYPT, HWCE, SW, DMA, EXTMEM, MODE_SWITCH, SLEEP };

const char* kind_name(PhaseKind k);

// Report categories; every joule lands in exactly one.
inline const std::vector<std::string>& categories() {
  static const std::vector<std::string> c = {"CONV",  "AES/KEC", "DENSE",   "DMA_OTHER",
                                             "FRAM",  "FLASH",   "SPI_IO"};
  return c;
}

struct Phase {
  int id = 0;
  PhaseKind kind = PhaseKind::SW;
  std::string label;
  std::string category = "DMA_OTHER";
  perf::OperatingMode mode = perf::OperatingMode::CRY_CNN_SW;
  std::vector<int> deps;
  bool overlappable = false;  // transfer phases may run under compute

  // payload, by kind
  perf::CryptKind crypt_kind = perf::CryptKind::XTS;  // HWCRYPT
  int rate_bits = 128;
  int rounds = 20;
  uint64_t bytes = 0;      // HWCRYPT / DMA / EXTMEM / SW aes kernels
  uint64_t pixels = 0;     // HWCE output pixels
  int fs = 3;              // HWCE
  int precision = 16;      // HWCE
  int tiles = 1;           // HWCE line-buffer fills charged
  std::string sw_kernel;   // SW
  double work_units = 0;   // SW
  int cores = 1;           // SW
  bool simd = false;       // SW
  std::string memory;      // EXTMEM: "flash" | "fram" | "spi"
  double seconds = 0;      // SLEEP
};

struct ExtMemModel {
  double standby_ma = 0;
  double active_ma = 0;
  double volts = 0;
  double bytes_per_s = 1;
  std::string category = "FLASH";
};

struct PlatformConfig {
  uint64_t tcdm_bytes = 65536;
  uint64_t l2_bytes = 196608;
  int tcdm_banks = 8;
  int accel_ports = 4;
  int dma_outstanding = 16;
  uint64_t dma_burst_bytes = 256;
  int hwcrypt_queue_depth = 4;
  int hwce_queue_depth = 2;
  std::map<std::string, ExtMemModel> memories;  // flash, fram, spi

  static PlatformConfig defaults();
};

struct Scenario {
  PlatformConfig platform;
  std::vector<Phase> phases;
  double vdd = 0.8;
  bool disable_overlap = false;  // serialize everything (work conservation check)
  bool deep_sleep = true;        // SLEEP phases use the deep-sleep floor
};

struct PhaseRow {
  int id = 0;
  std::string kind;
  std::string label;
  std::string category;
  double start_s = 0;
  double duration_s = 0;
  double cycles = 0;
  double energy_j = 0;
};

struct SimReport {
  double total_cycles = 0;
  double total_seconds = 0;
  double total_joules = 0;
  double peak_power_mw = 0;
  std::map<std::string, double> category_joules;
  std::vector<PhaseRow> rows;
  std::string calibration_hash;
  double vdd = 0;

  std::string to_json(int indent = 1) const;
  std::string to_csv() const;
};

struct Tile {
  int x = 0, y = 0, w = 0, h = 0;  // output-space rectangle
};

// Maximal-square tiling of an output layer under the TCDM working-set budget
// (double-buffered input tile + interleaved weights + output maps).
std::vector<Tile> tile_plan(int out_w, int out_h, int fs, int precision,
                            uint64_t tcdm_budget);

// Time and energy of one external-memory transfer.
std::pair<double, double> ext_transfer(const PlatformConfig& p, const std::string& kind,
                                       uint64_t nbytes);

// Energy for one duty-cycle period: active report energy + sleep floor over
// the remainder, plus the wakeup cost.
double sleep_between(const SimReport& active, double period_s, const Scenario& sc,
                     const perf::Calibration& cal);

SimReport run(const Scenario& sc, const perf::Calibration& cal);

}  // namespace nodesim::sim
