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
#include <optional>

#include "nodesim/common.hpp"

namespace nodesim::sponge {

// Keccak-f[400]: 5x5 grid of 16-bit lanes, index = x + 5*y.
struct KeccakState400 {
  std::array<uint16_t, 25> lanes{};
  bool operator==(const KeccakState400&) const = default;
};

struct SpongeConfig {
  int rate_bits = 128;       // power of two in [1, 128]
  int rounds_per_call = 20;  // multiple of 3, or exactly 20
  Bytes key;                 // 16 octets
  Bytes iv;
  int tag_bits = 128;
};

struct AuthCiphertext {
  Bytes ciphertext;
  Bytes tag;
};

// Applies theta/rho/pi/chi/iota for rounds [first, first + n), lane width 16.
// first_round_index exposed because the engine resumes mid-permutation.
KeccakState400 keccak_f400(const KeccakState400& state, int n_rounds,
                           int first_round_index);

KeccakState400 sponge_init(const SpongeConfig& cfg);

// Duplex stream: per rate block, pad = leading rate bits of the state,
// c = p ^ pad, and the ciphertext overwrites the rate bits before the next
// permutation call.  perm_calls, when given, counts data permutation calls
// (the init call excluded).
Bytes sponge_encrypt(const SpongeConfig& cfg, const Bytes& plaintext,
                     uint64_t* perm_calls = nullptr);
Bytes sponge_decrypt(const SpongeConfig& cfg, const Bytes& ciphertext,
                     uint64_t* perm_calls = nullptr);

// Encrypt-then-MAC with two sponge instances; the MAC instance derives its
// IV as iv || 0x01 and absorbs the ciphertext.
AuthCiphertext auth_encrypt(const SpongeConfig& cfg, const Bytes& plaintext);

// Recomputes and compares the tag before releasing plaintext; nullopt on
// authentication failure.
std::optional<Bytes> auth_decrypt(const SpongeConfig& cfg,
                                  const AuthCiphertext& ac);

}  // namespace nodesim::sponge
