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
#include "nodesim/hwce.hpp"

#include <cassert>
#include <cstring>
#include <array>
#include <deque>

namespace nodesim::hwce {
namespace {

void validate_weights(const WeightSet& ws) {
  if (ws.filter_size != 3 && ws.filter_size != 5)
    throw UnsupportedFilterSize("filter size must be 3 or 5");
  if (ws.precision != 16 && ws.precision != 8 && ws.precision != 4)
    throw WeightOutOfRange("precision must be 16, 8, or 4");
  if (int(ws.filters.size()) != ws.num_filters())
    throw DimensionMismatch("wrong filter count for precision mode");
  const int32_t lo = -(1 << (ws.precision - 1));
  const int32_t hi = (1 << (ws.precision - 1)) - 1;
  for (const auto& f : ws.filters) {
    if (int(f.size()) != ws.filter_size * ws.filter_size)
      throw DimensionMismatch("filter size mismatch");
    for (int16_t w : f)
      if (w < lo || w > hi) throw WeightOutOfRange("weight outside precision range");
  }
}

}  // namespace

InterleavedWeightBuffer interleave_weights(const WeightSet& ws) {
  validate_weights(ws);
  InterleavedWeightBuffer buf;
  buf.filter_size = ws.filter_size;
  buf.precision = ws.precision;
  const int n = ws.filter_size * ws.filter_size;
  buf.words.resize(size_t(n));
  for (int k = 0; k < n; ++k) {
    uint16_t word = 0;
    switch (ws.precision) {
      case 16:
        word = uint16_t(ws.filters[0][size_t(k)]);
        break;
      case 8:
        word = uint16_t((uint8_t(ws.filters[1][size_t(k)]) << 8) |
                        uint8_t(ws.filters[0][size_t(k)]));
        break;
      case 4:
        for (int f = 0; f < 4; ++f)
          word |= uint16_t((ws.filters[size_t(f)][size_t(k)] & 0xF) << (4 * f));
        break;
    }
    buf.words[size_t(k)] = word;
  }
  return buf;
}

WeightSet deinterleave_weights(const InterleavedWeightBuffer& buf, int q_w) {
  WeightSet ws;
  ws.filter_size = buf.filter_size;
  ws.precision = buf.precision;
  ws.q_w = q_w;
  const int n = buf.filter_size * buf.filter_size;
  ws.filters.assign(size_t(ws.num_filters()), std::vector<int16_t>(size_t(n)));
  for (int k = 0; k < n; ++k) {
    const uint16_t word = buf.words[size_t(k)];
    switch (buf.precision) {
      case 16:
        ws.filters[0][size_t(k)] = int16_t(word);
        break;
      case 8:
        ws.filters[0][size_t(k)] = int16_t(int8_t(word & 0xFF));
        ws.filters[1][size_t(k)] = int16_t(int8_t(word >> 8));
        break;
      case 4:
        for (int f = 0; f < 4; ++f) {
          int v = (word >> (4 * f)) & 0xF;
          if (v >= 8) v -= 16;  // sign extend the nibble
          ws.filters[size_t(f)][size_t(k)] = int16_t(v);
        }
        break;
      default:
        throw WeightOutOfRange("precision must be 16, 8, or 4");
    }
  }
  return ws;
}

// Line buffer: a cascade of per-row FIFOs of depth `width`.  Each incoming
// pixel enters the newest-row FIFO; a full FIFO hands its oldest pixel to the
// FIFO above, so the cascade emits one column of the sliding window per
// pixel.  A shift register of fs columns assembles the fs x fs window.
std::vector<std::vector<int16_t>> extract_windows(const FeatureMap& fm, int fs) {
  if (fs != 3 && fs != 5) throw UnsupportedFilterSize("filter size must be 3 or 5");
  if (fm.width < fs || fm.height < fs)
    throw ImageSmallerThanFilter("feature map smaller than filter");
  const int out_w = fm.width - fs + 1;
  const int out_h = fm.height - fs + 1;
  std::vector<std::vector<int16_t>> windows;
  windows.reserve(size_t(out_w) * size_t(out_h));

  std::vector<std::deque<int16_t>> fifo{size_t(fs)};  // fifo[0] = oldest row
  std::vector<int16_t> window(size_t(fs) * size_t(fs), 0);
  int x = 0;
  int y = 0;
  for (const int16_t px : fm.pixels) {
    for (int r = 0; r < fs; ++r)  // shift the window one column left
      for (int c = 0; c < fs - 1; ++c)
        window[size_t(r) * fs + size_t(c)] = window[size_t(r) * fs + size_t(c) + 1];
    int16_t cascading = px;
    for (int r = fs - 1; r >= 0; --r) {
      window[size_t(r) * fs + size_t(fs - 1)] = cascading;
      fifo[size_t(r)].push_back(cascading);
      if (int(fifo[size_t(r)].size()) > fm.width) {
        cascading = fifo[size_t(r)].front();
        fifo[size_t(r)].pop_front();
      } else {
        break;  // upper rows receive nothing until this FIFO fills
      }
    }
    if (x >= fs - 1 && y >= fs - 1) windows.push_back(window);
    if (++x == fm.width) {
      x = 0;
      ++y;
    }
  }
  assert(int(windows.size()) == out_w * out_h);
  return windows;
}

int64_t sop_slice(const std::vector<int16_t>& window,
                  const std::vector<uint8_t>& slice, int slice_index,
                  bool top_is_signed) {
  if (window.size() != slice.size())
    throw DimensionMismatch("window/slice size mismatch");
  (void)slice_index;
  int64_t acc = 0;
  for (size_t k = 0; k < window.size(); ++k) {
    int digit = slice[k] & 0xF;
    if (top_is_signed && digit >= 8) digit -= 16;
    acc += int64_t(digit) * window[k];
  }
  return acc;
}

int16_t normalize_saturate(int64_t acc, int q_shift) {
  if (q_shift > 0) acc += int64_t(1) << (q_shift - 1);
  acc >>= q_shift;
  if (acc > 32767) return 32767;
  if (acc < -32768) return -32768;
  return int16_t(acc);
}

std::vector<FeatureMap> hwce_convolve(const HwceJob& job) {
  const WeightSet& ws = job.weights;
  validate_weights(ws);
  const int fs = ws.filter_size;
  const FeatureMap& in = job.input;
  if (in.width < fs || in.height < fs)
    throw ImageSmallerThanFilter("input smaller than filter");
  const int out_w = in.width - fs + 1;
  const int out_h = in.height - fs + 1;
  const int n_out = ws.num_filters();
  const int q_shift = in.q + ws.q_w - job.q_out;
  if (q_shift < 0)
    throw DimensionMismatch("q_out larger than q_x + q_w");
  if (!job.y_in.empty()) {
    if (int(job.y_in.size()) != n_out)
      throw DimensionMismatch("y_in map count does not match precision mode");
    for (const auto& y : job.y_in)
      if (y.width != out_w || y.height != out_h)
        throw DimensionMismatch("y_in must have valid-convolution dimensions");
  }

  const InterleavedWeightBuffer buf = interleave_weights(ws);
  const auto windows = extract_windows(in, fs);
  const int n = fs * fs;

  // 4-bit digit slices of the interleaved buffer, one per datapath submodule
  std::array<std::vector<uint8_t>, 4> slices;
  for (int j = 0; j < 4; ++j) {
    slices[size_t(j)].resize(size_t(n));
    for (int k = 0; k < n; ++k)
      slices[size_t(j)][size_t(k)] = uint8_t((buf.words[size_t(k)] >> (4 * j)) & 0xF);
  }

  std::vector<FeatureMap> out{size_t(n_out)};
  for (int m = 0; m < n_out; ++m) {
    out[size_t(m)].width = out_w;
    out[size_t(m)].height = out_h;
    out[size_t(m)].q = job.q_out;
    out[size_t(m)].pixels.resize(size_t(out_w) * size_t(out_h));
  }

  for (size_t p = 0; p < windows.size(); ++p) {
    const auto& win = windows[p];
    int64_t partial[4];
    for (int j = 0; j < 4; ++j) {
      // in scaled precision modes every slice is the top slice of its filter
      const bool top = ws.precision == 16 ? (j == 3)
                       : ws.precision == 8 ? (j % 2 == 1)
                                           : true;
      partial[j] = sop_slice(win, slices[size_t(j)], j, top);
    }
    // second-stage reduction: recombine slices per precision mode
    int64_t sums[4] = {0, 0, 0, 0};
    switch (ws.precision) {
      case 16:
        sums[0] = partial[0] + (partial[1] << 4) + (partial[2] << 8) +
                  (partial[3] << 12);
        break;
      case 8:
        sums[0] = partial[0] + (partial[1] << 4);
        sums[1] = partial[2] + (partial[3] << 4);
        break;
      case 4:
        for (int m = 0; m < 4; ++m) sums[m] = partial[m];
        break;
    }
    for (int m = 0; m < n_out; ++m) {
      int64_t acc = sums[m];
      if (!job.y_in.empty())
        acc += int64_t(job.y_in[size_t(m)].pixels[p]) << q_shift;
      // partial sums fit in 40 bits for any legal input
      assert(acc < (int64_t(1) << 39) && acc >= -(int64_t(1) << 39));
      out[size_t(m)].pixels[p] = normalize_saturate(acc, q_shift);
    }
  }
  return out;
}

Bytes serialize_feature_map(const FeatureMap& fm) {
  Bytes blob(12 + fm.pixels.size() * 2);
  const uint32_t hdr[3] = {uint32_t(fm.width), uint32_t(fm.height),
                           uint32_t(fm.q)};
  for (int i = 0; i < 3; ++i)
    for (int b = 0; b < 4; ++b)
      blob[size_t(i * 4 + b)] = uint8_t(hdr[i] >> (8 * b));
  for (size_t i = 0; i < fm.pixels.size(); ++i) {
    const uint16_t v = uint16_t(fm.pixels[i]);
    blob[12 + 2 * i] = uint8_t(v & 0xFF);
    blob[13 + 2 * i] = uint8_t(v >> 8);
  }
  return blob;
}

FeatureMap deserialize_feature_map(const Bytes& blob) {
  if (blob.size() < 12) throw DimensionMismatch("feature map blob too short");
  uint32_t hdr[3];
  for (int i = 0; i < 3; ++i) {
    hdr[i] = 0;
    for (int b = 0; b < 4; ++b)
      hdr[i] |= uint32_t(blob[size_t(i * 4 + b)]) << (8 * b);
  }
  FeatureMap fm;
  fm.width = int(hdr[0]);
  fm.height = int(hdr[1]);
  fm.q = int(hdr[2]);
  const size_t count = size_t(fm.width) * size_t(fm.height);
  if (blob.size() != 12 + 2 * count)
    throw DimensionMismatch("feature map blob size mismatch");
  fm.pixels.resize(count);
  for (size_t i = 0; i < count; ++i)
    fm.pixels[i] = int16_t(uint16_t(blob[12 + 2 * i]) |
                           uint16_t(blob[13 + 2 * i]) << 8);
  return fm;
}

}  // namespace nodesim::hwce
