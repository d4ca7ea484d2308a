#!/usr/bin/env python3
# Copyright 2026 The nodesim authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Generates frozen golden vectors under tests/data/.

AES/XTS vectors come from the `cryptography` package (an independent,
standards-validated implementation).  Keccak-f[400] and the duplex sponge
AE construction are re-implemented here from scratch so that the C++ code
can be cross-checked against a second, independent implementation.
"""

import json
import os
import random

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "..", "tests", "data")

# ---------------------------------------------------------------- AES / XTS

def aes_ecb(key: bytes, pt: bytes) -> bytes:
    enc = Cipher(algorithms.AES(key), modes.ECB()).encryptor()
    return enc.update(pt) + enc.finalize()


def aes_xts(key1: bytes, key2: bytes, sector: bytes, pt: bytes) -> bytes:
    # key1 derives the tweak, key2 encrypts data; OpenSSL orders data key first
    enc = Cipher(algorithms.AES(key2 + key1), modes.XTS(sector)).encryptor()
    return enc.update(pt) + enc.finalize()


def gf_mul2_le(t: bytes) -> bytes:
    out = bytearray(16)
    carry = 0
    for i in range(16):
        out[i] = ((t[i] << 1) | carry) & 0xFF
        carry = t[i] >> 7
    if carry:
        out[0] ^= 0x87
    return bytes(out)


def xts_manual(key1: bytes, key2: bytes, sector: bytes, pt: bytes) -> bytes:
    tweak = aes_ecb(key1, sector)
    out = bytearray()
    for off in range(0, len(pt), 16):
        blk = bytes(a ^ b for a, b in zip(pt[off:off + 16], tweak))
        blk = aes_ecb(key2, blk)
        out += bytes(a ^ b for a, b in zip(blk, tweak))
        tweak = gf_mul2_le(tweak)
    return bytes(out)


def gen_xts_corpus(rng: random.Random) -> None:
    lines = []
    # IEEE 1619 style keys, sector 0, 512-byte counting plaintext.
    k1 = bytes.fromhex("31415926535897932384626433832795")  # tweak key
    k2 = bytes.fromhex("27182818284590452353602874713526")  # data key
    pt = bytes(range(256)) * 2
    lines.append((k1, k2, bytes(16), pt))
    # XEX special case: key1 == key2.
    lines.append((k1, k1, bytes.fromhex("ff" + "00" * 15), pt[:64]))
    # Random contexts, 1..32 block messages.
    for _ in range(24):
        k1r = rng.randbytes(16)
        k2r = rng.randbytes(16)
        sec = rng.randbytes(16)
        msg = rng.randbytes(16 * rng.randint(1, 32))
        lines.append((k1r, k2r, sec, msg))
    with open(os.path.join(DATA, "xts_vectors.txt"), "w") as f:
        for k1r, k2r, sec, msg in lines:
            if k1r == k2r:
                ct = xts_manual(k1r, k2r, sec, msg)  # OpenSSL refuses equal keys
            else:
                ct = aes_xts(k1r, k2r, sec, msg)
                assert ct == xts_manual(k1r, k2r, sec, msg)
            f.write(" ".join(h.hex() for h in (k1r, k2r, sec, msg, ct)) + "\n")


def gen_aes_corpus(rng: random.Random) -> None:
    recs = []
    # FIPS-197 Appendix C example.
    recs.append({"key": "000102030405060708090a0b0c0d0e0f",
                 "pt": "00112233445566778899aabbccddeeff"})
    for _ in range(16):
        recs.append({"key": rng.randbytes(16).hex(), "pt": rng.randbytes(16).hex()})
    for r in recs:
        r["ct"] = aes_ecb(bytes.fromhex(r["key"]), bytes.fromhex(r["pt"])).hex()
    with open(os.path.join(DATA, "aes_vectors.json"), "w") as f:
        json.dump(recs, f, indent=1)


# ------------------------------------------------------------ Keccak-f[400]

RC64 = [
    0x0000000000000001, 0x0000000000008082, 0x800000000000808A,
    0x8000000080008000, 0x000000000000808B, 0x0000000080000001,
    0x8000000080008081, 0x8000000000008009, 0x000000000000008A,
    0x0000000000000088, 0x0000000080008009, 0x000000008000000A,
    0x000000008000808B, 0x800000000000008B, 0x8000000000008089,
    0x8000000000008003, 0x8000000000008002, 0x8000000000000080,
    0x000000000000800A, 0x800000008000000A, 0x8000000080008081,
    0x8000000000008080, 0x0000000080000001, 0x8000000080008008,
]

RHO = {(0, 0): 0, (1, 0): 1, (2, 0): 62, (3, 0): 28, (4, 0): 27,
       (0, 1): 36, (1, 1): 44, (2, 1): 6, (3, 1): 55, (4, 1): 20,
       (0, 2): 3, (1, 2): 10, (2, 2): 43, (3, 2): 25, (4, 2): 39,
       (0, 3): 41, (1, 3): 45, (2, 3): 15, (3, 3): 21, (4, 3): 8,
       (0, 4): 18, (1, 4): 2, (2, 4): 61, (3, 4): 56, (4, 4): 14}

W = 16
MASK = (1 << W) - 1


def rot16(v: int, n: int) -> int:
    n %= W
    return ((v << n) | (v >> (W - n))) & MASK


def keccak_f400(lanes, n_rounds, first_round):
    # lanes: list of 25 ints, index = x + 5*y
    a = {(x, y): lanes[x + 5 * y] for x in range(5) for y in range(5)}
    for rnd in range(first_round, first_round + n_rounds):
        c = {x: a[(x, 0)] ^ a[(x, 1)] ^ a[(x, 2)] ^ a[(x, 3)] ^ a[(x, 4)]
             for x in range(5)}
        d = {x: c[(x - 1) % 5] ^ rot16(c[(x + 1) % 5], 1) for x in range(5)}
        for x in range(5):
            for y in range(5):
                a[(x, y)] ^= d[x]
        b = {}
        for x in range(5):
            for y in range(5):
                b[(y, (2 * x + 3 * y) % 5)] = rot16(a[(x, y)], RHO[(x, y)])
        for x in range(5):
            for y in range(5):
                a[(x, y)] = b[(x, y)] ^ ((~b[((x + 1) % 5, y)]) & b[((x + 2) % 5, y)] & MASK)
        a[(0, 0)] ^= RC64[rnd] & MASK
    return [a[(x, y)] for y in range(5) for x in range(5)]


def gen_keccak_corpus(rng: random.Random) -> None:
    recs = [{"in": [0] * 25, "rounds": 20, "first": 0,
             "out": keccak_f400([0] * 25, 20, 0)}]
    for _ in range(100):
        st = [rng.randrange(1 << 16) for _ in range(25)]
        recs.append({"in": st, "rounds": 20, "first": 0,
                     "out": keccak_f400(st, 20, 0)})
    # A few partial-round records for the resume-mid-permutation path.
    for _ in range(10):
        st = [rng.randrange(1 << 16) for _ in range(25)]
        first = rng.randrange(0, 18)
        n = rng.randrange(0, 20 - first + 1)
        recs.append({"in": st, "rounds": n, "first": first,
                     "out": keccak_f400(st, n, first)})
    with open(os.path.join(DATA, "keccak400_vectors.json"), "w") as f:
        json.dump(recs, f)


# ------------------------------------------------------- duplex sponge AE

def state_get_bit(lanes, i):
    return (lanes[i // W] >> (i % W)) & 1


def state_set_bit(lanes, i, v):
    lanes[i // W] = (lanes[i // W] & ~(1 << (i % W))) | (v << (i % W))


def bytes_to_bits(b):
    return [(b[i // 8] >> (i % 8)) & 1 for i in range(8 * len(b))]


def bits_to_bytes(bits):
    out = bytearray((len(bits) + 7) // 8)
    for i, v in enumerate(bits):
        out[i // 8] |= v << (i % 8)
    return bytes(out)


def sponge_init(key, iv, rounds):
    filler = key + iv
    assert len(filler) <= 50
    lanes = [0] * 25
    for i, bit in enumerate(bytes_to_bits(filler)):
        state_set_bit(lanes, i, bit)
    return keccak_f400(lanes, rounds, 0)


def sponge_encrypt(key, iv, rate, rounds, pt, decrypt=False):
    lanes = sponge_init(key, iv, rounds)
    msg = bytes_to_bits(pt)
    out = []
    pos = 0
    while pos < len(msg):
        used = min(rate, len(msg) - pos)
        for j in range(used):
            pad = state_get_bit(lanes, j)
            c = msg[pos + j] ^ pad
            out.append(c)
            # rate bits are overwritten with the ciphertext (duplex feedback)
            state_set_bit(lanes, j, msg[pos + j] if decrypt else c)
        lanes = keccak_f400(lanes, rounds, 0)
        pos += used
    return bits_to_bytes(out)


def sponge_tag(key, iv, rate, rounds, ct, tag_bits):
    lanes = sponge_init(key, iv + b"\x01", rounds)
    msg = bytes_to_bits(ct)
    pos = 0
    while pos < len(msg):
        used = min(rate, len(msg) - pos)
        for j in range(used):
            state_set_bit(lanes, j, state_get_bit(lanes, j) ^ msg[pos + j])
        lanes = keccak_f400(lanes, rounds, 0)
        pos += used
    tag = []
    while len(tag) < tag_bits:
        used = min(rate, tag_bits - len(tag))
        for j in range(used):
            tag.append(state_get_bit(lanes, j))
        if len(tag) < tag_bits:
            lanes = keccak_f400(lanes, rounds, 0)
    return bits_to_bytes(tag)


def gen_sponge_corpus(rng: random.Random) -> None:
    recs = []
    cases = [(128, 20, 64), (128, 20, 0), (64, 20, 48), (32, 6, 16),
             (8, 12, 33), (1, 3, 5), (16, 20, 7), (128, 3, 128)]
    for rate, rounds, nbytes in cases:
        key = rng.randbytes(16)
        iv = rng.randbytes(8)
        pt = rng.randbytes(nbytes)
        ct = sponge_encrypt(key, iv, rate, rounds, pt)
        tag = sponge_tag(key, iv, rate, rounds, ct, 128)
        recs.append({"rate": rate, "rounds": rounds, "key_hex": key.hex(),
                     "iv_hex": iv.hex(), "pt_hex": pt.hex(),
                     "ct_hex": ct.hex(), "tag_hex": tag.hex()})
    # One fully pinned record with a human-auditable key/iv.
    key = bytes.fromhex("000102030405060708090a0b0c0d0e0f")
    iv = bytes.fromhex("1011121314151617")
    pt = bytes.fromhex("00" * 16 + "ff" * 16)
    ct = sponge_encrypt(key, iv, 128, 20, pt)
    tag = sponge_tag(key, iv, 128, 20, ct, 128)
    recs.append({"rate": 128, "rounds": 20, "key_hex": key.hex(),
                 "iv_hex": iv.hex(), "pt_hex": pt.hex(),
                 "ct_hex": ct.hex(), "tag_hex": tag.hex()})
    with open(os.path.join(DATA, "sponge_vectors.json"), "w") as f:
        json.dump(recs, f, indent=1)


def main():
    os.makedirs(DATA, exist_ok=True)
    rng = random.Random(0x5EC0DE)
    gen_aes_corpus(rng)
    gen_xts_corpus(rng)
    gen_keccak_corpus(rng)
    gen_sponge_corpus(rng)
    print("wrote vectors to", os.path.normpath(DATA))


if __name__ == "__main__":
    main()
