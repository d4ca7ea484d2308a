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

#include <cstdint>
#include <vector>

#include "nodesim/common.hpp"

namespace nodesim::hwce {

// 16-bit two's-complement pixels; the fractional format q is carried by the
// enclosing map.
struct FeatureMap {
  int width = 0;
  int height = 0;
  int q = 0;  // fractional bits, 0..15
  std::vector<int16_t> pixels;  // row-major, width * height

  int16_t at(int x, int y) const { return pixels[size_t(y) * width + x]; }
  int16_t& at(int x, int y) { return pixels[size_t(y) * width + x]; }
};

// precision 16 -> 1 filter, 8 -> 2 filters, 4 -> 4 filters, each filter
// filter_size^2 signed weights within the precision's range.
struct WeightSet {
  int filter_size = 3;  // 3 or 5
  int precision = 16;   // 16, 8, or 4
  int q_w = 0;          // weight fractional bits
  std::vector<std::vector<int16_t>> filters;

  int num_filters() const { return 16 / precision; }
};

// filter_size^2 16-bit locations; location k packs the k-th weight of every
// concurrent filter.
struct InterleavedWeightBuffer {
  int filter_size = 3;
  int precision = 16;
  std::vector<uint16_t> words;
};

struct HwceJob {
  FeatureMap input;
  std::vector<FeatureMap> y_in;  // empty means implicit zeros
  WeightSet weights;
  int q_out = 0;
};

InterleavedWeightBuffer interleave_weights(const WeightSet& ws);
WeightSet deinterleave_weights(const InterleavedWeightBuffer& buf, int q_w);

// Line-buffer window extraction: (w-fs+1)*(h-fs+1) windows in raster order.
std::vector<std::vector<int16_t>> extract_windows(const FeatureMap& fm, int fs);

// Sum of products of a window against one 4-bit weight slice.  The top
// slice's digits are two's-complement when top_is_signed.
int64_t sop_slice(const std::vector<int16_t>& window,
                  const std::vector<uint8_t>& slice, int slice_index,
                  bool top_is_signed);

// clamp((acc + 2^(q-1)) >> q, int16 range); q_shift = 0 adds no rounding term.
int16_t normalize_saturate(int64_t acc, int q_shift);

// Accumulation of convolutions: y_out = sat((y_in << q_shift) + sum W*x) with
// q_shift = q_x + q_w - q_out.  1/2/4 output maps per precision mode.
std::vector<FeatureMap> hwce_convolve(const HwceJob& job);

// Flat binary format: three 32-bit LE header words {width, height, q}
// followed by LE 16-bit pixels.
Bytes serialize_feature_map(const FeatureMap& fm);
FeatureMap deserialize_feature_map(const Bytes& blob);

}  // namespace nodesim::hwce
