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
#include "nodesim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <sstream>

#include <json.hpp>

using nlohmann::json;

namespace nodesim::sim {

const char* kind_name(PhaseKind k) {
  switch (k) {
    case PhaseKind::HWCRYPT: return "HWCRYPT";
    case PhaseKind::HWCE: return "HWCE";
    case PhaseKind::SW: return "SW";
    case PhaseKind::DMA: return "DMA";
    case PhaseKind::EXTMEM: return "EXTMEM";
    case PhaseKind::MODE_SWITCH: return "MODE_SWITCH";
    case PhaseKind::SLEEP: return "SLEEP";
  }
  throw Error("unreachable phase kind");
}

PlatformConfig PlatformConfig::defaults() {
  PlatformConfig p;
  p.memories["flash"] = {0.015, 3.0, 3.6, 16e6, "FLASH"};
  p.memories["fram"] = {0.010, 5.14, 3.6, 32e6, "FRAM"};
  p.memories["spi"] = {0.0, 1.39, 3.6, 8e6, "SPI_IO"};
  return p;
}

std::vector<Tile> tile_plan(int out_w, int out_h, int fs, int precision,
                            uint64_t tcdm_budget) {
  if (out_w <= 0 || out_h <= 0) throw DimensionMismatch("empty output layer");
  const int n_maps = 16 / precision;
  auto working_set = [&](int tw, int th) -> uint64_t {
    uint64_t in = uint64_t(tw + fs - 1) * uint64_t(th + fs - 1) * 2;
    uint64_t weights = uint64_t(fs) * fs * 2;
    uint64_t out = uint64_t(tw) * th * 2 * n_maps;
    return 2 * in + weights + 2 * out;  // double-buffered in and out
  };
  int best = 0;
  int hi = std::max(out_w, out_h);
  for (int t = 1; t <= hi; ++t) {
    if (working_set(std::min(t, out_w), std::min(t, out_h)) <= tcdm_budget)
      best = t;
    else
      break;
  }
  if (best == 0) throw TileInfeasible("no tile size fits the TCDM budget");
  std::vector<Tile> tiles;
  for (int y = 0; y < out_h; y += best)
    for (int x = 0; x < out_w; x += best)
      tiles.push_back({x, y, std::min(best, out_w - x), std::min(best, out_h - y)});
  return tiles;
}

std::pair<double, double> ext_transfer(const PlatformConfig& p, const std::string& kind,
                                       uint64_t nbytes) {
  auto it = p.memories.find(kind);
  if (it == p.memories.end()) throw UnknownMemory("no such external memory: " + kind);
  double secs = double(nbytes) / it->second.bytes_per_s;
  double joules = it->second.active_ma * 1e-3 * it->second.volts * secs;
  return {secs, joules};
}

namespace {

struct Timed {
  double cycles = 0;
  double duration_s = 0;
  double incr_mw = 0;  // power on top of the cluster base
  std::string category;
};

// Duration, cycle count, and incremental power of one phase, evaluated at the
// scenario's vdd.
Timed evaluate(const Phase& ph, const Scenario& sc, const perf::Calibration& cal) {
  using perf::Unit;
  Timed t;
  t.category = ph.category;
  auto point = [&](perf::OperatingMode m) { return perf::make_point(cal, m, sc.vdd); };
  auto incr = [&](perf::OperatingMode m, std::set<Unit> u) {
    return perf::power_mw(cal, point(m), u) - perf::power_mw(cal, point(m), {});
  };
  switch (ph.kind) {
    case PhaseKind::HWCRYPT: {
      t.cycles = perf::cycles_hwcrypt(cal, ph.crypt_kind, ph.bytes, ph.rate_bits,
                                      ph.rounds);
      t.duration_s = t.cycles / point(ph.mode).freq_hz;
      t.incr_mw = incr(ph.mode, {Unit::HWCRYPT});
      break;
    }
    case PhaseKind::HWCE: {
      t.cycles = perf::cycles_hwce(cal, ph.pixels, ph.fs, ph.precision, ph.tiles);
      t.duration_s = t.cycles / point(ph.mode).freq_hz;
      t.incr_mw = incr(ph.mode, {Unit::HWCE});
      break;
    }
    case PhaseKind::SW: {
      double work = ph.sw_kernel.rfind("aes_", 0) == 0 ? double(ph.bytes)
                                                       : ph.work_units;
      t.cycles = perf::cycles_sw(cal, ph.sw_kernel, work, ph.cores, ph.simd);
      t.duration_s = t.cycles / point(ph.mode).freq_hz;
      t.incr_mw = incr(ph.mode, {ph.cores == 4 ? Unit::CORES4 : Unit::CORES1});
      break;
    }
    case PhaseKind::DMA: {
      t.cycles = cal.cost_at("dma_setup_cycles") +
                 std::ceil(double(ph.bytes) / cal.cost_at("dma_bytes_per_cycle"));
      t.duration_s = t.cycles / point(ph.mode).freq_hz;
      t.incr_mw = incr(ph.mode, {Unit::DMA});
      break;
    }
    case PhaseKind::EXTMEM: {
      auto [secs, joules] = ext_transfer(sc.platform, ph.memory, ph.bytes);
      t.duration_s = secs;
      t.incr_mw = secs > 0 ? joules / secs * 1e3 : 0;
      t.category = sc.platform.memories.at(ph.memory).category;
      break;
    }
    case PhaseKind::MODE_SWITCH: {
      t.duration_s = ph.seconds;
      break;
    }
    case PhaseKind::SLEEP: {
      t.duration_s = ph.seconds;
      break;
    }
  }
  return t;
}

std::vector<int> topo_order(const std::vector<Phase>& phases) {
  std::map<int, size_t> index;
  for (size_t i = 0; i < phases.size(); ++i) index[phases[i].id] = i;
  std::vector<int> indeg(phases.size(), 0);
  std::vector<std::vector<size_t>> out(phases.size());
  for (size_t i = 0; i < phases.size(); ++i) {
    for (int d : phases[i].deps) {
      auto it = index.find(d);
      if (it == index.end()) throw Error("dependency on unknown phase id");
      out[it->second].push_back(i);
      ++indeg[i];
    }
  }
  std::priority_queue<size_t, std::vector<size_t>, std::greater<>> ready;
  for (size_t i = 0; i < phases.size(); ++i)
    if (indeg[i] == 0) ready.push(i);
  std::vector<int> order;
  while (!ready.empty()) {
    size_t i = ready.top();
    ready.pop();
    order.push_back(int(i));
    for (size_t j : out[i])
      if (--indeg[j] == 0) ready.push(j);
  }
  if (order.size() != phases.size())
    throw CyclicDependency("phase dependency graph has a cycle");
  return order;
}

}  // namespace

SimReport run(const Scenario& sc, const perf::Calibration& cal) {
  SimReport rep;
  rep.vdd = sc.vdd;
  rep.calibration_hash = cal.hash();
  for (const auto& c : categories()) rep.category_joules[c] = 0;

  std::vector<int> order = topo_order(sc.phases);
  std::map<int, double> end_of;  // phase id -> completion time

  double compute_free = 0;
  // uDMA channels and external-memory interfaces are independent peripherals;
  // each serializes its own transfers but runs concurrently with the others
  std::map<std::string, double> xfer_free;
  bool have_mode = false;
  perf::OperatingMode cur_mode = perf::OperatingMode::CRY_CNN_SW;
  // per accelerator engine: service completion times, for queue-depth stalls
  std::map<PhaseKind, std::vector<double>> engine_ends;
  double sleep_total = 0;
  int synth_id = -1;  // synthetic rows get negative ids

  auto add_row = [&](int id, const std::string& kind, const std::string& label,
                     const std::string& cat, double start, double dur, double cycles,
                     double energy) {
    rep.rows.push_back({id, kind, label, cat, start, dur, cycles, energy});
    rep.category_joules[cat] += energy;
    rep.total_cycles += cycles;
  };

  for (int idx : order) {
    const Phase& ph = sc.phases[size_t(idx)];
    Timed t = evaluate(ph, sc, cal);
    double ready = 0;
    for (int d : ph.deps) ready = std::max(ready, end_of.at(d));

    bool on_xfer = !sc.disable_overlap && ph.overlappable &&
                   (ph.kind == PhaseKind::DMA || ph.kind == PhaseKind::EXTMEM);
    double& res = on_xfer
                      ? xfer_free[ph.kind == PhaseKind::DMA ? "dma" : ph.memory]
                      : compute_free;

    bool needs_mode = ph.kind == PhaseKind::HWCRYPT || ph.kind == PhaseKind::HWCE ||
                      ph.kind == PhaseKind::SW;
    if (needs_mode && (!have_mode || cur_mode != ph.mode)) {
      if (have_mode) {
        double sw_s = perf::mode_switch_seconds(cal, cur_mode, ph.mode);
        double start = std::max(ready, compute_free);
        add_row(synth_id--, "MODE_SWITCH",
                std::string(perf::mode_name(cur_mode)) + "->" + perf::mode_name(ph.mode),
                "DMA_OTHER", start, sw_s, 0, 0);
        compute_free = start + sw_s;
      }
      cur_mode = ph.mode;
      have_mode = true;
    }

    // accelerator command-queue back-pressure on the issuer
    int depth = ph.kind == PhaseKind::HWCRYPT ? sc.platform.hwcrypt_queue_depth
               : ph.kind == PhaseKind::HWCE   ? sc.platform.hwce_queue_depth
                                              : 0;
    if (depth > 0) {
      auto& ends = engine_ends[ph.kind];
      if (int(ends.size()) >= depth) {
        double slot_free = ends[ends.size() - size_t(depth)];
        if (slot_free > ready) {
          add_row(synth_id--, "STALL", ph.label + " queue-full stall", "DMA_OTHER",
                  ready, slot_free - ready, 0, 0);
          ready = slot_free;
        }
      }
    }

    double start = std::max(ready, res);
    double end = start + t.duration_s;
    res = end;
    end_of[ph.id] = end;
    if (ph.kind == PhaseKind::SLEEP) sleep_total += t.duration_s;
    if (depth > 0) engine_ends[ph.kind].push_back(end);

    double energy;
    if (ph.kind == PhaseKind::SLEEP) {
      energy = (sc.deep_sleep ? perf::deep_sleep_mw(cal)
                              : cal.power_at("idle_cluster", sc.vdd) +
                                    cal.power_at("fll", sc.vdd)) *
               1e-3 * t.duration_s;
    } else {
      energy = t.incr_mw * 1e-3 * t.duration_s;
    }
    add_row(ph.id, kind_name(ph.kind), ph.label, t.category, start, t.duration_s,
            t.cycles, energy);
  }

  double makespan = 0;
  for (const auto& r : rep.rows) makespan = std::max(makespan, r.start_s + r.duration_s);
  rep.total_seconds = makespan;

  // cluster base power (idle + FLL + SoC adder) while not deep-sleeping
  double base_mw = cal.power_at("idle_cluster", sc.vdd) + cal.power_at("fll", sc.vdd) +
                   cal.power_at("soc", sc.vdd);
  double active_span = makespan - sleep_total;
  if (active_span > 0)
    add_row(synth_id--, "BASE", "cluster+soc baseline", "DMA_OTHER", 0, active_span, 0,
            base_mw * 1e-3 * active_span);

  // external-memory standby draw over the whole span
  for (const auto& [name, mem] : sc.platform.memories) {
    double e = mem.standby_ma * 1e-3 * mem.volts * makespan;
    if (makespan > 0)
      add_row(synth_id--, "STANDBY", name + " standby", mem.category, 0, makespan, 0, e);
  }

  for (const auto& [cat, e] : rep.category_joules) rep.total_joules += e;

  // peak on-die power: sweep row power edges; external memories sit on their
  // own supply rails and are excluded
  std::map<double, double> delta;
  for (const auto& r : rep.rows) {
    if (r.duration_s <= 0) continue;
    if (r.kind == "EXTMEM" || r.kind == "STANDBY") continue;
    double mw = r.energy_j / r.duration_s * 1e3;
    delta[r.start_s] += mw;
    delta[r.start_s + r.duration_s] -= mw;
  }
  double cur = 0;
  for (const auto& [t0, d] : delta) {
    cur += d;
    rep.peak_power_mw = std::max(rep.peak_power_mw, cur);
  }

  std::stable_sort(rep.rows.begin(), rep.rows.end(),
                   [](const PhaseRow& a, const PhaseRow& b) {
                     return a.start_s < b.start_s;
                   });
  return rep;
}

double sleep_between(const SimReport& active, double period_s, const Scenario& sc,
                     const perf::Calibration& cal) {
  if (period_s < active.total_seconds)
    throw PeriodTooShort("period shorter than the active window");
  double sleep_s = period_s - active.total_seconds;
  double floor_mw = sc.deep_sleep ? perf::deep_sleep_mw(cal)
                                  : cal.power_at("idle_cluster", sc.vdd) +
                                        cal.power_at("fll", sc.vdd);
  double wake_s = cal.power_at(sc.deep_sleep ? "wakeup_fll_off_s" : "wakeup_fll_on_s", 0.8);
  double wake_j = wake_s * (cal.power_at("idle_cluster", sc.vdd) +
                            cal.power_at("fll", sc.vdd)) *
                  1e-3;
  return active.total_joules + floor_mw * 1e-3 * sleep_s + wake_j;
}

std::string SimReport::to_json(int indent) const {
  json j;
  j["version"] = kVersion;
  j["vdd"] = vdd;
  j["calibration_hash"] = calibration_hash;
  j["total_cycles"] = total_cycles;
  j["total_seconds"] = total_seconds;
  j["total_joules"] = total_joules;
  j["peak_power_mw"] = peak_power_mw;
  j["categories"] = category_joules;
  json rows_j = json::array();
  for (const auto& r : rows) {
    rows_j.push_back({{"id", r.id},
                      {"kind", r.kind},
                      {"label", r.label},
                      {"category", r.category},
                      {"start_s", r.start_s},
                      {"duration_s", r.duration_s},
                      {"cycles", r.cycles},
                      {"energy_j", r.energy_j}});
  }
  j["phases"] = rows_j;
  return j.dump(indent) + "\n";
}

std::string SimReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "# nodesim " << kVersion << " calibration " << calibration_hash << " vdd "
     << vdd << '\n';
  os << "id,kind,label,category,start_s,duration_s,cycles,energy_j\n";
  for (const auto& r : rows)
    os << r.id << ',' << r.kind << ',' << r.label << ',' << r.category << ','
       << r.start_s << ',' << r.duration_s << ',' << r.cycles << ',' << r.energy_j
       << '\n';
  os << "total,,,," << total_seconds << ",," << total_cycles << ',' << total_joules
     << '\n';
  return os.str();
}

}  // namespace nodesim::sim
