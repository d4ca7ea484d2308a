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
#include "nodesim/sponge.hpp"

#include <algorithm>

namespace nodesim::sponge {
namespace {

// Low 16 bits of the standard Keccak round constants, indices 0..19.
constexpr uint16_t kRoundConstants[20] = {
    0x0001, 0x8082, 0x808A, 0x8000, 0x808B, 0x0001, 0x8081, 0x8009,
    0x008A, 0x0088, 0x8009, 0x000A, 0x808B, 0x008B, 0x8089, 0x8003,
    0x8002, 0x0080, 0x800A, 0x000A};

// Standard rotation offsets reduced mod 16, addressed as [x][y].
constexpr int kRho[5][5] = {{0, 36 % 16, 3, 41 % 16, 18 % 16},
                            {1, 44 % 16, 10, 45 % 16, 2},
                            {62 % 16, 6, 43 % 16, 15, 61 % 16},
                            {28 % 16, 55 % 16, 25 % 16, 21 % 16, 56 % 16},
                            {27 % 16, 20 % 16, 39 % 16, 8, 14}};

inline uint16_t rotl16(uint16_t v, int n) {
  n &= 15;
  return n == 0 ? v : uint16_t((v << n) | (v >> (16 - n)));
}

inline int lane_index(int x, int y) { return x + 5 * y; }

inline int state_bit(const KeccakState400& s, int i) {
  return (s.lanes[i / 16] >> (i % 16)) & 1;
}

inline void set_state_bit(KeccakState400& s, int i, int v) {
  s.lanes[i / 16] = uint16_t((s.lanes[i / 16] & ~(1u << (i % 16))) |
                             (unsigned(v) << (i % 16)));
}

inline int byte_bit(const Bytes& b, size_t i) { return (b[i / 8] >> (i % 8)) & 1; }

void validate(const SpongeConfig& cfg) {
  bool rate_ok = cfg.rate_bits >= 1 && cfg.rate_bits <= 128 &&
                 (cfg.rate_bits & (cfg.rate_bits - 1)) == 0;
  if (!rate_ok) throw Error("rate_bits must be a power of two in [1, 128]");
  bool rounds_ok = cfg.rounds_per_call == 20 ||
                   (cfg.rounds_per_call > 0 && cfg.rounds_per_call % 3 == 0);
  if (!rounds_ok) throw Error("rounds_per_call must be a multiple of 3 or 20");
  if (cfg.key.size() != 16) throw Error("key must be 16 octets");
  if (cfg.tag_bits <= 0 || cfg.tag_bits % 8 != 0)
    throw Error("tag_bits must be a positive multiple of 8");
}

// A permutation call always restarts at round 0 but may run fewer than 20
// rounds; rounds > 20 wrap in blocks of 20 (the engine re-issues full passes).
KeccakState400 perm_call(const KeccakState400& s, int rounds) {
  KeccakState400 out = s;
  while (rounds > 20) {
    out = keccak_f400(out, 20, 0);
    rounds -= 20;
  }
  return keccak_f400(out, rounds, 0);
}

KeccakState400 init_with_iv(const SpongeConfig& cfg, const Bytes& iv) {
  if ((cfg.key.size() + iv.size()) * 8 > 400)
    throw KeyIvOverflow("key + iv exceed 400 bits");
  KeccakState400 st;
  Bytes filler = cfg.key;
  filler.insert(filler.end(), iv.begin(), iv.end());
  for (size_t i = 0; i < filler.size() * 8; ++i)
    set_state_bit(st, int(i), byte_bit(filler, i));
  return perm_call(st, cfg.rounds_per_call);
}

Bytes duplex_crypt(const SpongeConfig& cfg, const Bytes& in, bool decrypt,
                   uint64_t* perm_calls) {
  validate(cfg);
  KeccakState400 st = init_with_iv(cfg, cfg.iv);
  Bytes out(in.size());
  const size_t nbits = in.size() * 8;
  uint64_t calls = 0;
  size_t pos = 0;
  while (pos < nbits) {
    const size_t used = std::min<size_t>(cfg.rate_bits, nbits - pos);
    for (size_t j = 0; j < used; ++j) {
      int p = byte_bit(in, pos + j);
      int c = p ^ state_bit(st, int(j));
      if (c) out[(pos + j) / 8] |= uint8_t(1u << ((pos + j) % 8));
      // feedback is always the ciphertext bit
      set_state_bit(st, int(j), decrypt ? p : c);
    }
    st = perm_call(st, cfg.rounds_per_call);
    ++calls;
    pos += used;
  }
  if (perm_calls) *perm_calls = calls;
  return out;
}

Bytes mac_tag(const SpongeConfig& cfg, const Bytes& ct) {
  Bytes iv = cfg.iv;
  iv.push_back(0x01);  // domain separation from the encryption instance
  KeccakState400 st = init_with_iv(cfg, iv);
  const size_t nbits = ct.size() * 8;
  size_t pos = 0;
  while (pos < nbits) {
    const size_t used = std::min<size_t>(cfg.rate_bits, nbits - pos);
    for (size_t j = 0; j < used; ++j)
      set_state_bit(st, int(j), state_bit(st, int(j)) ^ byte_bit(ct, pos + j));
    st = perm_call(st, cfg.rounds_per_call);
    pos += used;
  }
  Bytes tag(size_t(cfg.tag_bits) / 8, 0);
  int produced = 0;
  while (produced < cfg.tag_bits) {
    const int used = std::min(cfg.rate_bits, cfg.tag_bits - produced);
    for (int j = 0; j < used; ++j)
      if (state_bit(st, j))
        tag[size_t(produced + j) / 8] |= uint8_t(1u << ((produced + j) % 8));
    produced += used;
    if (produced < cfg.tag_bits) st = perm_call(st, cfg.rounds_per_call);
  }
  return tag;
}

}  // namespace

KeccakState400 keccak_f400(const KeccakState400& state, int n_rounds,
                           int first_round_index) {
  if (first_round_index < 0 || n_rounds < 0 ||
      first_round_index + n_rounds > 20)
    throw RoundIndexOutOfRange("rounds must lie within [0, 20]");
  KeccakState400 s = state;
  for (int rnd = first_round_index; rnd < first_round_index + n_rounds; ++rnd) {
    uint16_t c[5], d[5];
    for (int x = 0; x < 5; ++x)
      c[x] = uint16_t(s.lanes[lane_index(x, 0)] ^ s.lanes[lane_index(x, 1)] ^
                      s.lanes[lane_index(x, 2)] ^ s.lanes[lane_index(x, 3)] ^
                      s.lanes[lane_index(x, 4)]);
    for (int x = 0; x < 5; ++x)
      d[x] = uint16_t(c[(x + 4) % 5] ^ rotl16(c[(x + 1) % 5], 1));
    for (int x = 0; x < 5; ++x)
      for (int y = 0; y < 5; ++y) s.lanes[lane_index(x, y)] ^= d[x];
    uint16_t b[25];
    for (int x = 0; x < 5; ++x)
      for (int y = 0; y < 5; ++y)
        b[lane_index(y, (2 * x + 3 * y) % 5)] =
            rotl16(s.lanes[lane_index(x, y)], kRho[x][y]);
    for (int x = 0; x < 5; ++x)
      for (int y = 0; y < 5; ++y)
        s.lanes[lane_index(x, y)] =
            uint16_t(b[lane_index(x, y)] ^
                     (~b[lane_index((x + 1) % 5, y)] &
                      b[lane_index((x + 2) % 5, y)]));
    s.lanes[0] ^= kRoundConstants[rnd];
  }
  return s;
}

KeccakState400 sponge_init(const SpongeConfig& cfg) {
  validate(cfg);
  return init_with_iv(cfg, cfg.iv);
}

Bytes sponge_encrypt(const SpongeConfig& cfg, const Bytes& plaintext,
                     uint64_t* perm_calls) {
  return duplex_crypt(cfg, plaintext, false, perm_calls);
}

Bytes sponge_decrypt(const SpongeConfig& cfg, const Bytes& ciphertext,
                     uint64_t* perm_calls) {
  return duplex_crypt(cfg, ciphertext, true, perm_calls);
}

AuthCiphertext auth_encrypt(const SpongeConfig& cfg, const Bytes& plaintext) {
  validate(cfg);
  AuthCiphertext ac;
  ac.ciphertext = duplex_crypt(cfg, plaintext, false, nullptr);
  ac.tag = mac_tag(cfg, ac.ciphertext);
  return ac;
}

std::optional<Bytes> auth_decrypt(const SpongeConfig& cfg,
                                  const AuthCiphertext& ac) {
  validate(cfg);
  Bytes expected = mac_tag(cfg, ac.ciphertext);
  // fixed-structure compare
  uint8_t diff = expected.size() == ac.tag.size() ? 0 : 1;
  for (size_t i = 0; i < expected.size() && i < ac.tag.size(); ++i)
    diff |= uint8_t(expected[i] ^ ac.tag[i]);
  if (diff != 0) return std::nullopt;
  return duplex_crypt(cfg, ac.ciphertext, true, nullptr);
}

}  // namespace nodesim::sponge
