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
#include "nodesim/aes.hpp"

#include <cstring>

namespace nodesim::aes {
namespace {

constexpr uint8_t kSbox[256] = {
    0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b,
    0xfe, 0xd7, 0xab, 0x76, 0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0,
    0xad, 0xd4, 0xa2, 0xaf, 0x9c, 0xa4, 0x72, 0xc0, 0xb7, 0xfd, 0x93, 0x26,
    0x36, 0x3f, 0xf7, 0xcc, 0x34, 0xa5, 0xe5, 0xf1, 0x71, 0xd8, 0x31, 0x15,
    0x04, 0xc7, 0x23, 0xc3, 0x18, 0x96, 0x05, 0x9a, 0x07, 0x12, 0x80, 0xe2,
    0xeb, 0x27, 0xb2, 0x75, 0x09, 0x83, 0x2c, 0x1a, 0x1b, 0x6e, 0x5a, 0xa0,
    0x52, 0x3b, 0xd6, 0xb3, 0x29, 0xe3, 0x2f, 0x84, 0x53, 0xd1, 0x00, 0xed,
    0x20, 0xfc, 0xb1, 0x5b, 0x6a, 0xcb, 0xbe, 0x39, 0x4a, 0x4c, 0x58, 0xcf,
    0xd0, 0xef, 0xaa, 0xfb, 0x43, 0x4d, 0x33, 0x85, 0x45, 0xf9, 0x02, 0x7f,
    0x50, 0x3c, 0x9f, 0xa8, 0x51, 0xa3, 0x40, 0x8f, 0x92, 0x9d, 0x38, 0xf5,
    0xbc, 0xb6, 0xda, 0x21, 0x10, 0xff, 0xf3, 0xd2, 0xcd, 0x0c, 0x13, 0xec,
    0x5f, 0x97, 0x44, 0x17, 0xc4, 0xa7, 0x7e, 0x3d, 0x64, 0x5d, 0x19, 0x73,
    0x60, 0x81, 0x4f, 0xdc, 0x22, 0x2a, 0x90, 0x88, 0x46, 0xee, 0xb8, 0x14,
    0xde, 0x5e, 0x0b, 0xdb, 0xe0, 0x32, 0x3a, 0x0a, 0x49, 0x06, 0x24, 0x5c,
    0xc2, 0xd3, 0xac, 0x62, 0x91, 0x95, 0xe4, 0x79, 0xe7, 0xc8, 0x37, 0x6d,
    0x8d, 0xd5, 0x4e, 0xa9, 0x6c, 0x56, 0xf4, 0xea, 0x65, 0x7a, 0xae, 0x08,
    0xba, 0x78, 0x25, 0x2e, 0x1c, 0xa6, 0xb4, 0xc6, 0xe8, 0xdd, 0x74, 0x1f,
    0x4b, 0xbd, 0x8b, 0x8a, 0x70, 0x3e, 0xb5, 0x66, 0x48, 0x03, 0xf6, 0x0e,
    0x61, 0x35, 0x57, 0xb9, 0x86, 0xc1, 0x1d, 0x9e, 0xe1, 0xf8, 0x98, 0x11,
    0x69, 0xd9, 0x8e, 0x94, 0x9b, 0x1e, 0x87, 0xe9, 0xce, 0x55, 0x28, 0xdf,
    0x8c, 0xa1, 0x89, 0x0d, 0xbf, 0xe6, 0x42, 0x68, 0x41, 0x99, 0x2d, 0x0f,
    0xb0, 0x54, 0xbb, 0x16};

uint8_t kInvSboxStorage[256];

const uint8_t* inv_sbox() {
  static const uint8_t* table = [] {
    for (int i = 0; i < 256; ++i) kInvSboxStorage[kSbox[i]] = uint8_t(i);
    return kInvSboxStorage;
  }();
  return table;
}

inline uint8_t xtime(uint8_t v) {
  return uint8_t((v << 1) ^ ((v & 0x80) ? 0x1b : 0x00));
}

inline uint8_t gmul(uint8_t a, uint8_t b) {
  uint8_t acc = 0;
  while (b) {
    if (b & 1) acc ^= a;
    a = xtime(a);
    b >>= 1;
  }
  return acc;
}

// Column-major state layout as in FIPS-197: state[r + 4c] = input[4c + r].
void sub_bytes(Block128& s, const uint8_t* box) {
  for (auto& b : s) b = box[b];
}

void shift_rows(Block128& s) {
  Block128 t = s;
  for (int r = 1; r < 4; ++r)
    for (int c = 0; c < 4; ++c) s[r + 4 * c] = t[r + 4 * ((c + r) % 4)];
}

void inv_shift_rows(Block128& s) {
  Block128 t = s;
  for (int r = 1; r < 4; ++r)
    for (int c = 0; c < 4; ++c) s[r + 4 * ((c + r) % 4)] = t[r + 4 * c];
}

void mix_columns(Block128& s) {
  for (int c = 0; c < 4; ++c) {
    uint8_t a0 = s[4 * c], a1 = s[4 * c + 1], a2 = s[4 * c + 2], a3 = s[4 * c + 3];
    s[4 * c + 0] = uint8_t(xtime(a0) ^ (xtime(a1) ^ a1) ^ a2 ^ a3);
    s[4 * c + 1] = uint8_t(a0 ^ xtime(a1) ^ (xtime(a2) ^ a2) ^ a3);
    s[4 * c + 2] = uint8_t(a0 ^ a1 ^ xtime(a2) ^ (xtime(a3) ^ a3));
    s[4 * c + 3] = uint8_t((xtime(a0) ^ a0) ^ a1 ^ a2 ^ xtime(a3));
  }
}

void inv_mix_columns(Block128& s) {
  for (int c = 0; c < 4; ++c) {
    uint8_t a0 = s[4 * c], a1 = s[4 * c + 1], a2 = s[4 * c + 2], a3 = s[4 * c + 3];
    s[4 * c + 0] = uint8_t(gmul(a0, 14) ^ gmul(a1, 11) ^ gmul(a2, 13) ^ gmul(a3, 9));
    s[4 * c + 1] = uint8_t(gmul(a0, 9) ^ gmul(a1, 14) ^ gmul(a2, 11) ^ gmul(a3, 13));
    s[4 * c + 2] = uint8_t(gmul(a0, 13) ^ gmul(a1, 9) ^ gmul(a2, 14) ^ gmul(a3, 11));
    s[4 * c + 3] = uint8_t(gmul(a0, 11) ^ gmul(a1, 13) ^ gmul(a2, 9) ^ gmul(a3, 14));
  }
}

void add_round_key(Block128& s, const Block128& rk) {
  for (int i = 0; i < 16; ++i) s[i] ^= rk[i];
}

}  // namespace

RoundKeySchedule expand_key(const AesKey& key) {
  RoundKeySchedule ks;
  ks.round_keys[0] = key;
  uint8_t rcon = 0x01;
  for (int r = 1; r <= 10; ++r) {
    const Block128& prev = ks.round_keys[r - 1];
    Block128& cur = ks.round_keys[r];
    uint8_t t[4] = {kSbox[prev[13]], kSbox[prev[14]], kSbox[prev[15]], kSbox[prev[12]]};
    t[0] ^= rcon;
    rcon = xtime(rcon);
    for (int i = 0; i < 4; ++i) cur[i] = uint8_t(prev[i] ^ t[i]);
    for (int i = 4; i < 16; ++i) cur[i] = uint8_t(prev[i] ^ cur[i - 4]);
  }
  return ks;
}

Block128 aes_round(const Block128& state, const Block128& round_key, bool is_last) {
  Block128 s = state;
  sub_bytes(s, kSbox);
  shift_rows(s);
  if (!is_last) mix_columns(s);
  add_round_key(s, round_key);
  return s;
}

Block128 encrypt_block(const AesKey& key, const Block128& pt) {
  RoundKeySchedule ks = expand_key(key);
  Block128 s = pt;
  add_round_key(s, ks.round_keys[0]);
  for (int r = 1; r < 10; ++r) s = aes_round(s, ks.round_keys[r], false);
  return aes_round(s, ks.round_keys[10], true);
}

Block128 decrypt_block(const AesKey& key, const Block128& ct) {
  // Forward schedule run once, then consumed in reverse ("last round-key
  // is the starting point for decryption").
  RoundKeySchedule ks = expand_key(key);
  Block128 s = ct;
  add_round_key(s, ks.round_keys[10]);
  for (int r = 9; r >= 1; --r) {
    inv_shift_rows(s);
    sub_bytes(s, inv_sbox());
    add_round_key(s, ks.round_keys[r]);
    inv_mix_columns(s);
  }
  inv_shift_rows(s);
  sub_bytes(s, inv_sbox());
  add_round_key(s, ks.round_keys[0]);
  return s;
}

Bytes ecb(const AesKey& key, const Bytes& data, Direction dir) {
  if (data.size() % 16 != 0)
    throw NonBlockAlignedLength("ECB input must be a multiple of 16 bytes");
  Bytes out(data.size());
  for (size_t off = 0; off < data.size(); off += 16) {
    Block128 blk;
    std::memcpy(blk.data(), data.data() + off, 16);
    Block128 res = dir == Direction::Encrypt ? encrypt_block(key, blk)
                                             : decrypt_block(key, blk);
    std::memcpy(out.data() + off, res.data(), 16);
  }
  return out;
}

Tweak128 gf_mul2(const Tweak128& t) {
  Tweak128 out;
  uint8_t carry = 0;
  for (int i = 0; i < 16; ++i) {
    out[i] = uint8_t((t[i] << 1) | carry);
    carry = uint8_t(t[i] >> 7);
  }
  if (carry) out[0] ^= 0x87;
  return out;
}

Bytes xts(const XtsContext& ctx, const Bytes& data, Direction dir) {
  if (data.size() % 16 != 0)
    throw NonBlockAlignedLength("XTS input must be a multiple of 16 bytes");
  Block128 sn;
  std::memcpy(sn.data(), ctx.sector_number.data(), 16);
  Tweak128 tweak = encrypt_block(ctx.key1, sn);
  Bytes out(data.size());
  for (size_t off = 0; off < data.size(); off += 16) {
    Block128 blk;
    for (int i = 0; i < 16; ++i) blk[i] = uint8_t(data[off + i] ^ tweak[i]);
    blk = dir == Direction::Encrypt ? encrypt_block(ctx.key2, blk)
                                    : decrypt_block(ctx.key2, blk);
    for (int i = 0; i < 16; ++i) out[off + i] = uint8_t(blk[i] ^ tweak[i]);
    tweak = gf_mul2(tweak);
  }
  return out;
}

}  // namespace nodesim::aes
