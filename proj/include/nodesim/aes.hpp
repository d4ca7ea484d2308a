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

#include <array>
#include <cstdint>

#include "nodesim/common.hpp"

namespace nodesim::aes {

using Block128 = std::array<uint8_t, 16>;
using AesKey = std::array<uint8_t, 16>;

// 128-bit GF(2^128) element, IEEE-1619 little-endian byte/bit convention.
using Tweak128 = std::array<uint8_t, 16>;

struct RoundKeySchedule {
  std::array<Block128, 11> round_keys;
};

enum class Direction { Encrypt, Decrypt };

struct XtsContext {
  AesKey key1;  // tweak derivation
  AesKey key2;  // data encryption; key1 == key2 degenerates to XEX
  std::array<uint8_t, 16> sector_number;
};

RoundKeySchedule expand_key(const AesKey& key);

// One cipher round (SubBytes, ShiftRows, MixColumns unless last, AddRoundKey),
// exposed as a standalone primitive for round-based software offload.
Block128 aes_round(const Block128& state, const Block128& round_key, bool is_last);

Block128 encrypt_block(const AesKey& key, const Block128& pt);
Block128 decrypt_block(const AesKey& key, const Block128& ct);

Bytes ecb(const AesKey& key, const Bytes& data, Direction dir);

// Multiplication by 2 in GF(2^128) mod x^128 + x^7 + x^2 + x + 1.
Tweak128 gf_mul2(const Tweak128& t);

Bytes xts(const XtsContext& ctx, const Bytes& data, Direction dir);

}  // namespace nodesim::aes
