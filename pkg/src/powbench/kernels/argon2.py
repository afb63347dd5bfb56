"""Argon2i (version 0x13) following RFC 9106.

H0, the variable-length hash H' and finalisation use hashlib's BLAKE2b.
The memory-filling loop (compression function G, data-independent address
generation, reference-index mapping) is compiled with numba.
"""

from __future__ import annotations

import hashlib
import struct

import numpy as np
from numba import njit

VERSION = 0x13
ARGON2I_TYPE = 1
SYNC_POINTS = 4
QWORDS_IN_BLOCK = 128
ADDRESSES_IN_BLOCK = 128

_M32 = np.uint64(0xFFFFFFFF)
_TWO = np.uint64(2)
_U32 = np.uint64(32)
_U24 = np.uint64(24)
_U16 = np.uint64(16)
_U63 = np.uint64(63)
_U64 = np.uint64(64)
_ONE = np.uint64(1)

# BLAKE2b round applied to the 8 rows (16 consecutive words) and then to the
# 8 columns (word pairs 2i, 2i+1 of every row) of a 1 KiB block.
_ROWS = np.array([[16 * i + j for j in range(16)] for i in range(8)], dtype=np.int64)
_COLS = np.array(
    [[2 * i + 16 * r + c for r in range(8) for c in range(2)] for i in range(8)],
    dtype=np.int64,
)


@njit(cache=True, inline="always")
def _rotr(x, n):
    return (x >> n) | (x << (_U64 - n))


@njit(cache=True, inline="always")
def _blamka(x, y):
    return x + y + _TWO * (x & _M32) * (y & _M32)


@njit(cache=True, inline="always")
def _gb(v, a, b, c, d):
    va = v[a]
    vb = v[b]
    vc = v[c]
    vd = v[d]
    va = _blamka(va, vb)
    vd = _rotr(vd ^ va, _U32)
    vc = _blamka(vc, vd)
    vb = _rotr(vb ^ vc, _U24)
    va = _blamka(va, vb)
    vd = _rotr(vd ^ va, _U16)
    vc = _blamka(vc, vd)
    vb = _rotr(vb ^ vc, _U63)
    v[a] = va
    v[b] = vb
    v[c] = vc
    v[d] = vd


@njit(cache=True)
def _round(v, idx):
    _gb(v, idx[0], idx[4], idx[8], idx[12])
    _gb(v, idx[1], idx[5], idx[9], idx[13])
    _gb(v, idx[2], idx[6], idx[10], idx[14])
    _gb(v, idx[3], idx[7], idx[11], idx[15])
    _gb(v, idx[0], idx[5], idx[10], idx[15])
    _gb(v, idx[1], idx[6], idx[11], idx[12])
    _gb(v, idx[2], idx[7], idx[8], idx[13])
    _gb(v, idx[3], idx[4], idx[9], idx[14])


@njit(cache=True)
def _fill_block(prev, ref, out, with_xor, r, tmp):
    for k in range(QWORDS_IN_BLOCK):
        r[k] = prev[k] ^ ref[k]
        tmp[k] = r[k]
    if with_xor:
        for k in range(QWORDS_IN_BLOCK):
            tmp[k] ^= out[k]
    for i in range(8):
        _round(r, _ROWS[i])
    for i in range(8):
        _round(r, _COLS[i])
    for k in range(QWORDS_IN_BLOCK):
        out[k] = tmp[k] ^ r[k]


@njit(cache=True)
def _next_addresses(address, input_block, zero, r, tmp):
    input_block[6] += _ONE
    _fill_block(zero, input_block, address, False, r, tmp)
    _fill_block(zero, address, address, False, r, tmp)


@njit(cache=True)
def _reference_index(pss, sl, index, j1, same_lane, segment_length, lane_length):
    if pss == 0:
        if sl == 0:
            area = index - 1
        elif same_lane:
            area = sl * segment_length + index - 1
        else:
            area = sl * segment_length + (-1 if index == 0 else 0)
    else:
        if same_lane:
            area = lane_length - segment_length + index - 1
        else:
            area = lane_length - segment_length + (-1 if index == 0 else 0)
    x = np.uint64(j1)
    x = (x * x) >> _U32
    x = (np.uint64(area) * x) >> _U32
    relative = area - 1 - np.int64(x)
    start = 0
    if pss != 0 and sl != SYNC_POINTS - 1:
        start = (sl + 1) * segment_length
    return (start + relative) % lane_length


@njit(cache=True, nogil=True)
def fill_memory(memory, passes, lanes, segment_length):
    """Fill every block after the first two of each lane; return the count."""
    lane_length = SYNC_POINTS * segment_length
    total = memory.shape[0]
    r = np.empty(QWORDS_IN_BLOCK, dtype=np.uint64)
    tmp = np.empty(QWORDS_IN_BLOCK, dtype=np.uint64)
    zero = np.zeros(QWORDS_IN_BLOCK, dtype=np.uint64)
    input_block = np.zeros(QWORDS_IN_BLOCK, dtype=np.uint64)
    address = np.zeros(QWORDS_IN_BLOCK, dtype=np.uint64)
    filled = 0
    for pss in range(passes):
        for sl in range(SYNC_POINTS):
            for lane in range(lanes):
                input_block[:] = 0
                input_block[0] = pss
                input_block[1] = lane
                input_block[2] = sl
                input_block[3] = total
                input_block[4] = passes
                input_block[5] = ARGON2I_TYPE
                start = 0
                if pss == 0 and sl == 0:
                    start = 2
                    _next_addresses(address, input_block, zero, r, tmp)
                curr = lane * lane_length + sl * segment_length + start
                if curr % lane_length == 0:
                    prev = curr + lane_length - 1
                else:
                    prev = curr - 1
                for i in range(start, segment_length):
                    if curr % lane_length == 1:
                        prev = curr - 1
                    if i % ADDRESSES_IN_BLOCK == 0:
                        _next_addresses(address, input_block, zero, r, tmp)
                    pseudo_rand = address[i % ADDRESSES_IN_BLOCK]
                    ref_lane = np.int64((pseudo_rand >> _U32) % np.uint64(lanes))
                    if pss == 0 and sl == 0:
                        ref_lane = lane
                    ref_index = _reference_index(
                        pss, sl, i, pseudo_rand & _M32, ref_lane == lane, segment_length, lane_length
                    )
                    _fill_block(
                        memory[prev],
                        memory[lane_length * ref_lane + ref_index],
                        memory[curr],
                        pss != 0,
                        r,
                        tmp,
                    )
                    filled += 1
                    curr += 1
                    prev += 1
    return filled


def _le32(n: int) -> bytes:
    return struct.pack("<I", n)


def h_prime(data: bytes, out_len: int) -> bytes:
    """Variable-length BLAKE2b hash H'."""
    if out_len <= 64:
        return hashlib.blake2b(_le32(out_len) + data, digest_size=out_len).digest()
    r = -(-out_len // 32) - 2
    v = hashlib.blake2b(_le32(out_len) + data).digest()
    out = [v[:32]]
    for _ in range(1, r):
        v = hashlib.blake2b(v).digest()
        out.append(v[:32])
    out.append(hashlib.blake2b(v, digest_size=out_len - 32 * r).digest())
    return b"".join(out)


def initial_hash(p, tag_len, m, t, password, salt, secret, associated_data) -> bytes:
    parts = [_le32(p), _le32(tag_len), _le32(m), _le32(t), _le32(VERSION), _le32(ARGON2I_TYPE)]
    for field in (password, salt, secret, associated_data):
        parts.append(_le32(len(field)))
        parts.append(field)
    return hashlib.blake2b(b"".join(parts)).digest()


def argon2i(
    password: bytes,
    salt: bytes,
    *,
    p: int,
    t: int,
    m: int,
    tag_len: int = 32,
    secret: bytes = b"",
    associated_data: bytes = b"",
) -> tuple[bytes, int]:
    """Return (tag, blocks evaluated). Parameters are assumed validated."""
    segment_length = m // (SYNC_POINTS * p)
    lane_length = segment_length * SYNC_POINTS
    total = lane_length * p
    h0 = initial_hash(p, tag_len, m, t, password, salt, secret, associated_data)

    memory = np.empty((total, QWORDS_IN_BLOCK), dtype=np.uint64)
    for lane in range(p):
        for j in (0, 1):
            block = h_prime(h0 + _le32(j) + _le32(lane), 1024)
            memory[lane * lane_length + j] = np.frombuffer(block, dtype="<u8")

    filled = fill_memory(memory, t, p, segment_length)

    final = memory[lane_length - 1].copy()
    for lane in range(1, p):
        final ^= memory[lane * lane_length + lane_length - 1]
    tag = h_prime(final.astype("<u8").tobytes(), tag_len)
    return tag, filled + 2 * p
