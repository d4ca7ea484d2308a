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

#include <bitset>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "nodesim/aes.hpp"

using namespace nodesim;
using namespace nodesim::aes;
using nlohmann::json;

namespace {

std::string data_path(const std::string& name) {
  return std::string(NODESIM_SOURCE_DIR) + "/tests/data/" + name;
}

json load_json(const std::string& name) {
  std::ifstream in(data_path(name));
  REQUIRE(in.good());
  json j;
  in >> j;
  return j;
}

Block128 block_from_hex(const std::string& hex) {
  Bytes b = from_hex(hex);
  REQUIRE(b.size() == 16);
  Block128 out{};
  std::copy(b.begin(), b.end(), out.begin());
  return out;
}

Bytes random_bytes(std::mt19937_64& rng, size_t n) {
  Bytes b(n);
  for (auto& v : b) v = uint8_t(rng());
  return b;
}

// Independent GF(2^128) doubling oracle: interpret the tweak as a polynomial
// with bit i of byte j at degree 8*j + i, multiply by x, reduce by
// x^128 + x^7 + x^2 + x + 1.
Tweak128 gf_mul2_oracle(const Tweak128& t) {
  std::bitset<129> poly;
  for (int j = 0; j < 16; ++j)
    for (int i = 0; i < 8; ++i)
      if ((t[size_t(j)] >> i) & 1) poly.set(size_t(8 * j + i));
  poly <<= 1;
  if (poly.test(128)) {
    poly.reset(128);
    poly.flip(0);
    poly.flip(1);
    poly.flip(2);
    poly.flip(7);
  }
  Tweak128 out{};
  for (int j = 0; j < 16; ++j)
    for (int i = 0; i < 8; ++i)
      if (poly.test(size_t(8 * j + i))) out[size_t(j)] |= uint8_t(1u << i);
  return out;
}

// Direct XEX/XTS reference written against the definition, sharing only
// encrypt_block with the implementation under test.
Bytes xts_oracle(const AesKey& key1, const AesKey& key2,
                 const std::array<uint8_t, 16>& sector, const Bytes& pt, Direction dir) {
  Tweak128 t = encrypt_block(key1, sector);
  Bytes out(pt.size());
  for (size_t off = 0; off < pt.size(); off += 16) {
    Block128 b{};
    for (int i = 0; i < 16; ++i) b[size_t(i)] = pt[off + size_t(i)] ^ t[size_t(i)];
    b = dir == Direction::Encrypt ? encrypt_block(key2, b) : decrypt_block(key2, b);
    for (int i = 0; i < 16; ++i) out[off + size_t(i)] = b[size_t(i)] ^ t[size_t(i)];
    t = gf_mul2_oracle(t);
  }
  return out;
}

}  // namespace

TEST_CASE("block cipher matches frozen library-generated vectors") {
  json vecs = load_json("aes_vectors.json");
  REQUIRE(vecs.size() >= 16);
  for (const auto& v : vecs) {
    AesKey key = block_from_hex(v["key"]);
    Block128 pt = block_from_hex(v["pt"]);
    Block128 ct = block_from_hex(v["ct"]);
    CHECK(encrypt_block(key, pt) == ct);
    CHECK(decrypt_block(key, ct) == pt);
  }
}

TEST_CASE("key schedule keeps the cipher key as round key zero") {
  AesKey key{};
  for (int i = 0; i < 16; ++i) key[size_t(i)] = uint8_t(i);
  RoundKeySchedule ks = expand_key(key);
  CHECK(ks.round_keys[0] == key);
  CHECK(ks.round_keys[10] != key);
}

TEST_CASE("encrypt/decrypt round trip on random blocks") {
  std::mt19937_64 rng(0xA35u);
  for (int iter = 0; iter < 10000; ++iter) {
    AesKey key{};
    Block128 pt{};
    for (auto& b : key) b = uint8_t(rng());
    for (auto& b : pt) b = uint8_t(rng());
    CHECK(decrypt_block(key, encrypt_block(key, pt)) == pt);
  }
}

TEST_CASE("round primitive composes into the full cipher") {
  std::mt19937_64 rng(0xA36u);
  AesKey key{};
  Block128 pt{};
  for (auto& b : key) b = uint8_t(rng());
  for (auto& b : pt) b = uint8_t(rng());
  RoundKeySchedule ks = expand_key(key);

  Block128 state = pt;
  for (int i = 0; i < 16; ++i) state[size_t(i)] ^= ks.round_keys[0][size_t(i)];
  for (int r = 1; r <= 10; ++r) state = aes_round(state, ks.round_keys[size_t(r)], r == 10);
  CHECK(state == encrypt_block(key, pt));
}

TEST_CASE("ecb: block independence and length validation") {
  std::mt19937_64 rng(0xA37u);
  AesKey key{};
  for (auto& b : key) b = uint8_t(rng());
  Bytes pt = random_bytes(rng, 64);
  Bytes ct = ecb(key, pt, Direction::Encrypt);
  REQUIRE(ct.size() == 64);
  for (size_t off = 0; off < 64; off += 16) {
    Block128 b{};
    std::copy(pt.begin() + long(off), pt.begin() + long(off) + 16, b.begin());
    Block128 e = encrypt_block(key, b);
    CHECK(std::equal(e.begin(), e.end(), ct.begin() + long(off)));
  }
  CHECK(ecb(key, ct, Direction::Decrypt) == pt);
  CHECK_THROWS_AS(ecb(key, random_bytes(rng, 17), Direction::Encrypt),
                  NonBlockAlignedLength);
}

TEST_CASE("gf_mul2 agrees with polynomial oracle") {
  std::mt19937_64 rng(0xA38u);
  for (int iter = 0; iter < 10000; ++iter) {
    Tweak128 t{};
    for (auto& b : t) b = uint8_t(rng());
    CHECK(gf_mul2(t) == gf_mul2_oracle(t));
  }
  // the carry path specifically
  Tweak128 top{};
  top[15] = 0x80;
  Tweak128 doubled = gf_mul2(top);
  Tweak128 expect{};
  expect[0] = 0x87;
  CHECK(doubled == expect);
}

TEST_CASE("tweak sequence has no short cycles") {
  Tweak128 t{};
  t[0] = 1;
  Tweak128 cur = t;
  for (int i = 0; i < 10000; ++i) {
    cur = gf_mul2(cur);
    CHECK(cur != t);
  }
}

TEST_CASE("xts matches frozen corpus including the equal-key record") {
  std::ifstream in(data_path("xts_vectors.txt"));
  REQUIRE(in.good());
  std::string line;
  int records = 0;
  bool saw_equal_keys = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string k1_hex, k2_hex, sector_hex, pt_hex, ct_hex;
    ss >> k1_hex >> k2_hex >> sector_hex >> pt_hex >> ct_hex;
    XtsContext ctx;
    ctx.key1 = block_from_hex(k1_hex);
    ctx.key2 = block_from_hex(k2_hex);
    Bytes sector = from_hex(sector_hex);
    REQUIRE(sector.size() == 16);
    std::copy(sector.begin(), sector.end(), ctx.sector_number.begin());
    Bytes pt = from_hex(pt_hex);
    Bytes ct = from_hex(ct_hex);
    CHECK(xts(ctx, pt, Direction::Encrypt) == ct);
    CHECK(xts(ctx, ct, Direction::Decrypt) == pt);
    if (ctx.key1 == ctx.key2) saw_equal_keys = true;
    ++records;
  }
  CHECK(records >= 20);
  CHECK(saw_equal_keys);  // XEX degenerate case is part of the corpus
}

TEST_CASE("xts agrees with direct definition on random inputs") {
  std::mt19937_64 rng(0xA39u);
  for (int iter = 0; iter < 200; ++iter) {
    XtsContext ctx;
    for (auto& b : ctx.key1) b = uint8_t(rng());
    for (auto& b : ctx.key2) b = uint8_t(rng());
    for (auto& b : ctx.sector_number) b = uint8_t(rng());
    size_t blocks = 1 + size_t(rng() % 8);
    Bytes pt = random_bytes(rng, 16 * blocks);
    Bytes ct = xts(ctx, pt, Direction::Encrypt);
    CHECK(ct == xts_oracle(ctx.key1, ctx.key2, ctx.sector_number, pt, Direction::Encrypt));
    CHECK(xts(ctx, ct, Direction::Decrypt) == pt);
  }
}

TEST_CASE("xts tweak makes equal blocks encrypt differently") {
  XtsContext ctx;
  for (int i = 0; i < 16; ++i) {
    ctx.key1[size_t(i)] = uint8_t(i);
    ctx.key2[size_t(i)] = uint8_t(0xf0 | i);
  }
  ctx.sector_number = {};
  ctx.sector_number[0] = 42;
  Bytes pt(16 * 64, 0x5a);
  Bytes ct = xts(ctx, pt, Direction::Encrypt);
  for (size_t i = 0; i < 64; ++i)
    for (size_t j = i + 1; j < 64; ++j)
      CHECK_FALSE(std::equal(ct.begin() + long(16 * i), ct.begin() + long(16 * i) + 16,
                             ct.begin() + long(16 * j)));
}

TEST_CASE("xts rejects non block aligned input") {
  XtsContext ctx{};
  CHECK_THROWS_AS(xts(ctx, Bytes(15), Direction::Encrypt), NonBlockAlignedLength);
  CHECK_THROWS_AS(xts(ctx, Bytes(33), Direction::Decrypt), NonBlockAlignedLength);
}
