// Copyright 2026 The nodesim authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "nodesim/perf.hpp"

using namespace nodesim;
using namespace nodesim::perf;

namespace {
const Calibration& cal() {
  static Calibration c = Calibration::defaults();
  return c;
}
}  // namespace

TEST_CASE("frequency anchors at 0.8 V and 1.2 V") {
  CHECK(frequency_of(cal(), OperatingMode::CRY_CNN_SW, 0.8) == doctest::Approx(85e6));
  CHECK(frequency_of(cal(), OperatingMode::KEC_CNN_SW, 0.8) == doctest::Approx(104e6));
  CHECK(frequency_of(cal(), OperatingMode::SW, 0.8) == doctest::Approx(120e6));
  CHECK(frequency_of(cal(), OperatingMode::CRY_CNN_SW, 1.2) == doctest::Approx(170e6));
  CHECK(frequency_of(cal(), OperatingMode::KEC_CNN_SW, 1.2) == doctest::Approx(208e6));
  CHECK(frequency_of(cal(), OperatingMode::SW, 1.2) == doctest::Approx(240e6));
}

TEST_CASE("frequency ordering, interpolation, and vdd bounds") {
  for (double v : {0.8, 0.9, 1.0, 1.1, 1.2}) {
    double cry = frequency_of(cal(), OperatingMode::CRY_CNN_SW, v);
    double kec = frequency_of(cal(), OperatingMode::KEC_CNN_SW, v);
    double sw = frequency_of(cal(), OperatingMode::SW, v);
    CHECK(cry < kec);
    CHECK(kec < sw);
  }
  // piecewise linear between the two anchor points
  CHECK(frequency_of(cal(), OperatingMode::CRY_CNN_SW, 1.0) ==
        doctest::Approx((85e6 + 170e6) / 2));
  CHECK_THROWS_AS(frequency_of(cal(), OperatingMode::SW, 0.5), VddOutOfRange);
  CHECK_THROWS_AS(frequency_of(cal(), OperatingMode::SW, 1.5), VddOutOfRange);
}

TEST_CASE("hardware AES cycle anchors") {
  double ecb = cycles_hwcrypt(cal(), CryptKind::ECB, 8192);
  // published anchor: ~3100 cycles for an 8 kB ECB transfer
  CHECK(std::abs(ecb - 3100.0) / 3100.0 < 0.02);
  CHECK(cycles_hwcrypt(cal(), CryptKind::XTS, 8192) == ecb);
  for (uint64_t n : {16ull, 64ull, 4096ull, 1ull << 20})
    CHECK(cycles_hwcrypt(cal(), CryptKind::XTS, n) ==
          cycles_hwcrypt(cal(), CryptKind::ECB, n));
}

TEST_CASE("sponge cycle model: rate and round scaling") {
  const double setup = cal().cost_at("hwcrypt_setup_cycles");
  double base = cycles_hwcrypt(cal(), CryptKind::SPONGE_AE, 4096, 128, 20) - setup;
  CHECK(base / 4096.0 == doctest::Approx(0.51).epsilon(0.02));
  // halving the rate doubles the permutation-call count
  for (int rate : {64, 32, 16, 8, 4, 2, 1}) {
    double c = cycles_hwcrypt(cal(), CryptKind::SPONGE_AE, 4096, rate, 20) - setup;
    CHECK(c == doctest::Approx(base * 128.0 / rate));
  }
  // 20 rounds and 21 rounds both take ceil(r/3) = 7 permutation steps
  CHECK(cycles_hwcrypt(cal(), CryptKind::SPONGE_AE, 4096, 128, 21) - setup ==
        doctest::Approx(base));
  CHECK(cycles_hwcrypt(cal(), CryptKind::SPONGE_AE, 4096, 128, 3) - setup ==
        doctest::Approx(base / 7.0));
  CHECK(cycles_hwcrypt(cal(), CryptKind::SPONGE_AE, 4096, 128, 12) - setup ==
        doctest::Approx(base * 4.0 / 7.0));
}

TEST_CASE("software AES is the documented multiple of the engine") {
  double hw = cycles_hwcrypt(cal(), CryptKind::ECB, 65536) / 65536.0;
  CHECK(cycles_sw(cal(), "aes_ecb", 65536, 1, false) / 65536.0 / hw ==
        doctest::Approx(450).epsilon(0.01));
  CHECK(cycles_sw(cal(), "aes_xts", 65536, 1, false) / 65536.0 / hw ==
        doctest::Approx(495).epsilon(0.01));
  CHECK(cycles_sw(cal(), "aes_ecb", 65536, 4, false) / 65536.0 / hw ==
        doctest::Approx(120).epsilon(0.01));
  CHECK(cycles_sw(cal(), "aes_xts", 65536, 4, false) / 65536.0 / hw ==
        doctest::Approx(287).epsilon(0.01));
}

TEST_CASE("HWCE cycle model: per-pixel table plus line-buffer fill") {
  struct Row { int fs, prec; double cpp; };
  for (const Row& r : {Row{5, 16, 1.14}, Row{5, 8, 0.61}, Row{5, 4, 0.45},
                       Row{3, 16, 1.07}, Row{3, 8, 0.58}, Row{3, 4, 0.43}}) {
    double c = cycles_hwce(cal(), 10000, r.fs, r.prec, 1);
    CHECK(c == doctest::Approx(8.0 * r.fs + r.cpp * 10000));
    // fill is charged once per tile
    CHECK(cycles_hwce(cal(), 10000, r.fs, r.prec, 7) - c ==
          doctest::Approx(8.0 * r.fs * 6));
  }
}

TEST_CASE("software kernel parallel/simd speedups") {
  double one = cycles_sw(cal(), "conv3x3", 1e6, 1, false);
  CHECK(one / cycles_sw(cal(), "conv3x3", 1e6, 4, false) > 3.0);
  CHECK(cycles_sw(cal(), "conv3x3", 1e6, 4, true) <
        cycles_sw(cal(), "conv3x3", 1e6, 4, false));
  // scalar kernels: parallelization gives the published 2.6x, simd nothing
  for (const char* k : {"pca", "dwt", "svm"}) {
    CHECK(cycles_sw(cal(), k, 1e6, 1, false) / cycles_sw(cal(), k, 1e6, 4, false) ==
          doctest::Approx(2.6).epsilon(0.01));
    CHECK(cycles_sw(cal(), k, 1e6, 4, true) == cycles_sw(cal(), k, 1e6, 4, false));
  }
  CHECK_THROWS_AS(cycles_sw(cal(), "fft", 1e6, 1, false), UnknownKernel);
}

TEST_CASE("power model: baseline, increments, and the full-load anchor") {
  auto p08 = make_point(cal(), OperatingMode::CRY_CNN_SW, 0.8);
  double base = power_mw(cal(), p08, {});
  CHECK(base == doctest::Approx(1.0));  // idle + fll at 0.8 V
  CHECK(power_mw(cal(), p08, {Unit::SOC}) == doctest::Approx(1.5));  // + soc adder
  CHECK(power_mw(cal(), p08, {Unit::CORES4}) > power_mw(cal(), p08, {Unit::CORES1}));
  CHECK(power_mw(cal(), p08, {Unit::HWCRYPT}) - base == doctest::Approx(25.2));

  auto kec08 = make_point(cal(), OperatingMode::KEC_CNN_SW, 0.8);
  CHECK(power_mw(cal(), kec08, {Unit::HWCRYPT}) - power_mw(cal(), kec08, {}) ==
        doctest::Approx(14.8));

  // everything on at 1.2 V lands on the published full-load figure
  auto p12 = make_point(cal(), OperatingMode::CRY_CNN_SW, 1.2);
  double full = power_mw(
      cal(), p12, {Unit::CORES4, Unit::HWCRYPT, Unit::HWCE, Unit::DMA, Unit::SOC});
  CHECK(std::abs(full - 120.0) / 120.0 < 0.10);

  // vdd monotonicity for every unit set
  for (auto u : {Unit::CORES1, Unit::CORES4, Unit::HWCRYPT, Unit::HWCE, Unit::DMA}) {
    double lo = power_mw(cal(), p08, {u});
    double hi = power_mw(cal(), p12, {u});
    CHECK(hi > lo);
  }

  // the crypto engine is not powered in plain sw mode
  auto sw08 = make_point(cal(), OperatingMode::SW, 0.8);
  CHECK_THROWS_AS(power_mw(cal(), sw08, {Unit::HWCRYPT}), UnknownUnit);
}

TEST_CASE("efficiency anchors at 0.8 V") {
  // anchors hold for the full on-die draw, soc adder included
  auto cry = make_point(cal(), OperatingMode::CRY_CNN_SW, 0.8);
  double xts_w = power_mw(cal(), cry, {Unit::HWCRYPT, Unit::SOC}) * 1e-3;
  double xts_bps = 8.0 * cry.freq_hz / cal().cost_at("hwcrypt_xts_cpb");
  CHECK(xts_bps / xts_w / 1e9 == doctest::Approx(67).epsilon(0.01));

  auto kec = make_point(cal(), OperatingMode::KEC_CNN_SW, 0.8);
  double kec_w = power_mw(cal(), kec, {Unit::HWCRYPT, Unit::SOC}) * 1e-3;
  double kec_bps = 8.0 * kec.freq_hz / cal().cost_at("sponge_cpb_rate128_r20");
  CHECK(kec_bps / kec_w / 1e9 == doctest::Approx(100).epsilon(0.01));

  double hwce_w = power_mw(cal(), kec, {Unit::HWCE, Unit::SOC}) * 1e-3;
  double px_per_s = kec.freq_hz / cal().cost_at("hwce_cpp_5_16");
  CHECK(hwce_w / px_per_s / 1e-12 == doctest::Approx(50).epsilon(0.01));
}

TEST_CASE("energy linearity and deep-sleep floor") {
  auto p = make_point(cal(), OperatingMode::KEC_CNN_SW, 0.8);
  double e1 = energy_j(cal(), 1e6, p, {Unit::HWCE});
  double e2 = energy_j(cal(), 2e6, p, {Unit::HWCE});
  CHECK(e2 == doctest::Approx(2 * e1));
  CHECK(deep_sleep_mw(cal()) == doctest::Approx(0.025));
  CHECK(deep_sleep_mw(cal()) < cal().power_at("idle_cluster", 0.8));
}

TEST_CASE("mode switch cost: reference-clock cycles") {
  double s = mode_switch_seconds(cal(), OperatingMode::CRY_CNN_SW,
                                 OperatingMode::KEC_CNN_SW);
  CHECK(s == doctest::Approx(10.0 / 100e3));
}

TEST_CASE("calibration file round trip preserves every table") {
  std::string path = "nodesim_test_cal.json";
  const Calibration& c = cal();
  c.save_file(path);
  Calibration back = Calibration::load_file(path);
  CHECK(back.hash() == c.hash());
  CHECK(back.cost == c.cost);
  CHECK(back.power == c.power);
  CHECK(back.frequencies == c.frequencies);
  std::remove(path.c_str());
}

TEST_CASE("every coefficient carries a provenance tag") {
  for (const auto& [k, v] : cal().cost) CHECK(cal().provenance.count("cost." + k) == 1);
  for (const auto& [k, v] : cal().power)
    CHECK(cal().provenance.count("power." + k) == 1);
}

TEST_CASE("hash changes when a constant changes") {
  Calibration c = cal();
  c.power["hwce@0.8"] += 0.001;
  CHECK(c.hash() != cal().hash());
}
