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
#include "nodesim/perf.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

using nlohmann::json;

namespace nodesim::perf {

const char* mode_name(OperatingMode m) {
  switch (m) {
    case OperatingMode::CRY_CNN_SW: return "CRY_CNN_SW";
    case OperatingMode::KEC_CNN_SW: return "KEC_CNN_SW";
    case OperatingMode::SW: return "SW";
  }
  throw Error("unreachable mode");
}

OperatingMode mode_from_name(const std::string& name) {
  if (name == "CRY_CNN_SW") return OperatingMode::CRY_CNN_SW;
  if (name == "KEC_CNN_SW") return OperatingMode::KEC_CNN_SW;
  if (name == "SW") return OperatingMode::SW;
  throw Error("unknown operating mode: " + name);
}

Calibration Calibration::defaults() {
  Calibration c;
  const double mhz = 1e6;
  c.frequencies["CRY_CNN_SW"] = {{0.8, 85 * mhz}, {1.2, 170 * mhz}};
  c.frequencies["KEC_CNN_SW"] = {{0.8, 104 * mhz}, {1.2, 208 * mhz}};
  c.frequencies["SW"] = {{0.8, 120 * mhz}, {1.2, 240 * mhz}};
  c.provenance["frequencies.CRY_CNN_SW"] = "measured@0.8V; 1.2V anchor fitted";
  c.provenance["frequencies.KEC_CNN_SW"] = "measured@0.8V; 1.2V anchor fitted";
  c.provenance["frequencies.SW"] = "fitted (figure-only data)";

  auto cost = [&](const std::string& k, double v, const std::string& prov) {
    c.cost[k] = v;
    c.provenance["cost." + k] = prov;
  };
  cost("hwcrypt_setup_cycles", 10, "fitted");
  cost("hwcrypt_ecb_cpb", 0.38, "measured");
  cost("hwcrypt_xts_cpb", 0.38, "measured (same as ECB)");
  cost("sponge_cpb_rate128_r20", 0.51, "measured");
  cost("hwce_cpp_5_16", 1.14, "measured");
  cost("hwce_cpp_5_8", 0.61, "measured");
  cost("hwce_cpp_5_4", 0.45, "measured");
  cost("hwce_cpp_3_16", 1.07, "measured");
  cost("hwce_cpp_3_8", 0.58, "measured");
  cost("hwce_cpp_3_4", 0.43, "measured");
  cost("hwce_linebuffer_fill_per_row", 8, "fitted");
  cost("conv5x5_1c", 94, "measured");
  cost("conv5x5_4c", 24, "measured");
  cost("conv5x5_4c_simd", 13, "measured");
  cost("conv3x3_1c", 57.5, "fitted");
  cost("conv3x3_4c", 14.8, "fitted");
  cost("conv3x3_4c_simd", 8.0, "fitted");
  cost("aes_ecb_cpb_1c", 171, "derived (hw cpb x 450)");
  cost("aes_ecb_cpb_4c", 45.6, "derived (hw cpb x 120)");
  cost("aes_xts_cpb_1c", 188, "derived (hw cpb x 495)");
  cost("aes_xts_cpb_4c", 109, "derived (hw cpb x 287)");
  cost("dense_1c", 1.0, "fitted");
  cost("dense_4c", 0.30, "fitted");
  cost("dense_4c_simd", 0.125, "fitted");
  for (const char* k : {"pca", "dwt", "svm"}) {
    cost(std::string(k) + "_1c", 1.0, "fitted");
    cost(std::string(k) + "_4c", 1.0 / 2.6, "derived (4-core parallel speedup)");
    cost(std::string(k) + "_4c_simd", 1.0 / 2.6, "fitted (no simd benefit)");
  }
  cost("dma_setup_cycles", 10, "measured (<10 cycles)");
  cost("dma_bytes_per_cycle", 8, "derived (4 ports x 16 bit)");
  cost("barrier_cycles", 2, "measured");
  cost("critical_cycles", 10, "fitted");
  cost("parallel_open_cycles", 100, "fitted");
  cost("mode_switch_ref_cycles", 10, "measured (<10 reference cycles)");
  cost("ref_clock_hz", 100e3, "measured (100 kHz reference)");

  auto pw = [&](const std::string& k, double v, const std::string& prov) {
    c.power[k] = v;
    c.provenance["power." + k] = prov;
  };
  pw("idle_cluster@0.8", 0.6, "measured (<1 mW idle)");
  pw("idle_cluster@1.2", 2.0, "fitted");
  pw("fll@0.8", 0.4, "measured (~400 uW)");
  pw("fll@1.2", 0.8, "fitted");
  pw("soc@0.8", 0.5, "fitted");
  pw("soc@1.2", 8.0, "fitted");
  pw("cores1@0.8", 6.0, "fitted");
  pw("cores1@1.2", 20.0, "fitted");
  pw("cores4@0.8", 12.5, "fitted");
  pw("cores4@1.2", 60.0, "fitted (full-load anchor)");
  pw("hwcrypt_cry@0.8", 25.2, "fitted (67 Gbit/s/W XTS anchor)");
  pw("hwcrypt_cry@1.2", 30.0, "fitted (full-load anchor)");
  pw("hwcrypt_kec@0.8", 14.8, "fitted (100 Gbit/s/W sponge anchor)");
  pw("hwcrypt_kec@1.2", 30.0, "fitted (full-load anchor)");
  pw("hwce@0.8", 3.06, "fitted (50 pJ/px anchor)");
  pw("hwce@1.2", 12.0, "fitted (full-load anchor)");
  pw("dma@0.8", 1.0, "fitted");
  pw("dma@1.2", 4.0, "fitted (full-load anchor)");
  pw("deep_sleep", 0.025, "fitted (duty-cycling floor)");
  pw("wakeup_fll_on_s", 1e-8, "measured (single cycle)");
  pw("wakeup_fll_off_s", 320e-6, "measured (~320 us)");
  return c;
}

static json to_json(const Calibration& c) {
  json j;
  json freq = json::object();
  for (const auto& [mode, pts] : c.frequencies) {
    json arr = json::array();
    for (const auto& [v, hz] : pts) arr.push_back({v, hz});
    freq[mode] = arr;
  }
  j["frequencies"] = freq;
  j["cost_table"] = c.cost;
  j["power_table"] = c.power;
  j["provenance"] = c.provenance;
  return j;
}

Calibration Calibration::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw Error("cannot open calibration file: " + path);
  json j;
  in >> j;
  Calibration c;
  for (const auto& [mode, arr] : j.at("frequencies").items()) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : arr) pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    c.frequencies[mode] = pts;
  }
  c.cost = j.at("cost_table").get<std::map<std::string, double>>();
  c.power = j.at("power_table").get<std::map<std::string, double>>();
  if (j.contains("provenance"))
    c.provenance = j.at("provenance").get<std::map<std::string, std::string>>();
  return c;
}

void Calibration::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out.good()) throw Error("cannot write calibration file: " + path);
  out << to_json(*this).dump(1) << "\n";
}

double Calibration::cost_at(const std::string& key) const {
  auto it = cost.find(key);
  if (it == cost.end()) throw UnknownKernel("no cost entry: " + key);
  return it->second;
}

double Calibration::power_at(const std::string& key, double vdd) const {
  auto flat = power.find(key);
  if (flat != power.end()) return flat->second;
  auto lo = power.find(key + "@0.8");
  auto hi = power.find(key + "@1.2");
  if (lo == power.end() || hi == power.end())
    throw UnknownUnit("no power entry: " + key);
  if (vdd < 0.8 || vdd > 1.2) throw VddOutOfRange("vdd outside [0.8, 1.2] V");
  double t = (vdd - 0.8) / 0.4;
  return lo->second + t * (hi->second - lo->second);
}

std::string Calibration::hash() const {
  // FNV-1a over the canonical serialization
  std::string s = to_json(*this).dump();
  uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

double frequency_of(const Calibration& cal, OperatingMode mode, double vdd) {
  auto it = cal.frequencies.find(mode_name(mode));
  if (it == cal.frequencies.end()) throw Error("calibration lacks mode frequencies");
  const auto& pts = it->second;
  if (vdd < pts.front().first || vdd > pts.back().first)
    throw VddOutOfRange("vdd outside calibrated range");
  for (size_t i = 1; i < pts.size(); ++i) {
    if (vdd <= pts[i].first) {
      double t = (vdd - pts[i - 1].first) / (pts[i].first - pts[i - 1].first);
      return pts[i - 1].second + t * (pts[i].second - pts[i - 1].second);
    }
  }
  return pts.back().second;
}

OperatingPoint make_point(const Calibration& cal, OperatingMode mode, double vdd) {
  return {mode, vdd, frequency_of(cal, mode, vdd)};
}

double cycles_hwcrypt(const Calibration& cal, CryptKind kind, uint64_t nbytes,
                      int rate_bits, int rounds) {
  double setup = cal.cost_at("hwcrypt_setup_cycles");
  switch (kind) {
    case CryptKind::ECB:
      return setup + cal.cost_at("hwcrypt_ecb_cpb") * double(nbytes);
    case CryptKind::XTS:
      return setup + cal.cost_at("hwcrypt_xts_cpb") * double(nbytes);
    case CryptKind::SPONGE_AE: {
      double scale = (128.0 / rate_bits) *
                     (std::ceil(rounds / 3.0) / std::ceil(20.0 / 3.0));
      return setup + cal.cost_at("sponge_cpb_rate128_r20") * scale * double(nbytes);
    }
  }
  throw Error("unreachable crypt kind");
}

double cycles_hwce(const Calibration& cal, uint64_t out_pixels, int fs,
                   int precision, int tiles) {
  if (fs != 3 && fs != 5) throw UnsupportedFilterSize("filter size must be 3 or 5");
  std::string key = "hwce_cpp_" + std::to_string(fs) + "_" + std::to_string(precision);
  double fill = cal.cost_at("hwce_linebuffer_fill_per_row") * fs * tiles;
  return fill + cal.cost_at(key) * double(out_pixels);
}

double cycles_sw(const Calibration& cal, const std::string& kernel,
                 double work_units, int cores, bool simd) {
  if (cores != 1 && cores != 4) throw UnknownKernel("sw kernels support 1 or 4 cores");
  std::string key;
  if (kernel == "aes_ecb" || kernel == "aes_xts") {
    key = kernel + (cores == 1 ? "_cpb_1c" : "_cpb_4c");
  } else {
    key = kernel + (cores == 1 ? "_1c" : simd ? "_4c_simd" : "_4c");
  }
  return cal.cost_at(key) * work_units;
}

double power_mw(const Calibration& cal, const OperatingPoint& point,
                const std::set<Unit>& active) {
  double p = cal.power_at("idle_cluster", point.vdd) + cal.power_at("fll", point.vdd);
  for (Unit u : active) {
    switch (u) {
      case Unit::CORES1: p += cal.power_at("cores1", point.vdd); break;
      case Unit::CORES4: p += cal.power_at("cores4", point.vdd); break;
      case Unit::HWCRYPT:
        if (point.mode == OperatingMode::SW)
          throw UnknownUnit("HWCRYPT unavailable in SW mode");
        p += cal.power_at(point.mode == OperatingMode::CRY_CNN_SW ? "hwcrypt_cry"
                                                                  : "hwcrypt_kec",
                          point.vdd);
        break;
      case Unit::HWCE:
        if (point.mode == OperatingMode::SW)
          throw UnknownUnit("HWCE unavailable in SW mode");
        p += cal.power_at("hwce", point.vdd);
        break;
      case Unit::DMA: p += cal.power_at("dma", point.vdd); break;
      case Unit::SOC: p += cal.power_at("soc", point.vdd); break;
    }
  }
  return p;
}

double energy_j(const Calibration& cal, double cycles, const OperatingPoint& point,
                const std::set<Unit>& active) {
  if (point.freq_hz <= 0) throw Error("operating point has no frequency");
  return power_mw(cal, point, active) * 1e-3 * cycles / point.freq_hz;
}

double deep_sleep_mw(const Calibration& cal) { return cal.power_at("deep_sleep", 0.8); }

double mode_switch_seconds(const Calibration& cal, OperatingMode from,
                           OperatingMode to) {
  if (from == to) return 0;
  return cal.cost_at("mode_switch_ref_cycles") / cal.cost_at("ref_clock_hz");
}

}  // namespace nodesim::perf
