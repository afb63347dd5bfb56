"""ROMix-style stand-in for yescrypt.

Each lane runs scrypt's ROMix over ``blocks`` blocks of ``block_size``
bytes: a sequential fill followed by one pass of data-dependent reads.
BlockMix with Salsa20/8 is generalised to any whole number of 64-byte
chunks. When block_size is a multiple of 128 and blocks is a power of two
the output is exactly scrypt(N=blocks, r=block_size/128, p=threads).
"""

from __future__ import annotations

import hashlib

import numpy as np
from numba import njit

@njit(cache=True, inline="always")
def _rl(a, b, n):
    t = (a + b) & 0xFFFFFFFF
    return ((t << n) | (t >> (32 - n))) & 0xFFFFFFFF


@njit(cache=True)
def _salsa20_8(b):
    x00, x01, x02, x03, x04, x05, x06, x07 = b[0], b[1], b[2], b[3], b[4], b[5], b[6], b[7]
    x08, x09, x10, x11, x12, x13, x14, x15 = b[8], b[9], b[10], b[11], b[12], b[13], b[14], b[15]
    x00, x01, x02, x03 = np.int64(x00), np.int64(x01), np.int64(x02), np.int64(x03)
    x04, x05, x06, x07 = np.int64(x04), np.int64(x05), np.int64(x06), np.int64(x07)
    x08, x09, x10, x11 = np.int64(x08), np.int64(x09), np.int64(x10), np.int64(x11)
    x12, x13, x14, x15 = np.int64(x12), np.int64(x13), np.int64(x14), np.int64(x15)
    y00, y01, y02, y03, y04, y05, y06, y07 = x00, x01, x02, x03, x04, x05, x06, x07
    y08, y09, y10, y11, y12, y13, y14, y15 = x08, x09, x10, x11, x12, x13, x14, x15
    for _ in range(4):
        x04 ^= _rl(x00, x12, 7)
        x08 ^= _rl(x04, x00, 9)
        x12 ^= _rl(x08, x04, 13)
        x00 ^= _rl(x12, x08, 18)
        x09 ^= _rl(x05, x01, 7)
        x13 ^= _rl(x09, x05, 9)
        x01 ^= _rl(x13, x09, 13)
        x05 ^= _rl(x01, x13, 18)
        x14 ^= _rl(x10, x06, 7)
        x02 ^= _rl(x14, x10, 9)
        x06 ^= _rl(x02, x14, 13)
        x10 ^= _rl(x06, x02, 18)
        x03 ^= _rl(x15, x11, 7)
        x07 ^= _rl(x03, x15, 9)
        x11 ^= _rl(x07, x03, 13)
        x15 ^= _rl(x11, x07, 18)
        x01 ^= _rl(x00, x03, 7)
        x02 ^= _rl(x01, x00, 9)
        x03 ^= _rl(x02, x01, 13)
        x00 ^= _rl(x03, x02, 18)
        x06 ^= _rl(x05, x04, 7)
        x07 ^= _rl(x06, x05, 9)
        x04 ^= _rl(x07, x06, 13)
        x05 ^= _rl(x04, x07, 18)
        x11 ^= _rl(x10, x09, 7)
        x08 ^= _rl(x11, x10, 9)
        x09 ^= _rl(x08, x11, 13)
        x10 ^= _rl(x09, x08, 18)
        x12 ^= _rl(x15, x14, 7)
        x13 ^= _rl(x12, x15, 9)
        x14 ^= _rl(x13, x12, 13)
        x15 ^= _rl(x14, x13, 18)
    b[0] = (x00 + y00) & 0xFFFFFFFF
    b[1] = (x01 + y01) & 0xFFFFFFFF
    b[2] = (x02 + y02) & 0xFFFFFFFF
    b[3] = (x03 + y03) & 0xFFFFFFFF
    b[4] = (x04 + y04) & 0xFFFFFFFF
    b[5] = (x05 + y05) & 0xFFFFFFFF
    b[6] = (x06 + y06) & 0xFFFFFFFF
    b[7] = (x07 + y07) & 0xFFFFFFFF
    b[8] = (x08 + y08) & 0xFFFFFFFF
    b[9] = (x09 + y09) & 0xFFFFFFFF
    b[10] = (x10 + y10) & 0xFFFFFFFF
    b[11] = (x11 + y11) & 0xFFFFFFFF
    b[12] = (x12 + y12) & 0xFFFFFFFF
    b[13] = (x13 + y13) & 0xFFFFFFFF
    b[14] = (x14 + y14) & 0xFFFFFFFF
    b[15] = (x15 + y15) & 0xFFFFFFFF


@njit(cache=True)
def _block_mix(b, y, chunks):
    if chunks == 1:
        # seeding with the only chunk would cancel it out; start from zero instead
        t = np.zeros(16, dtype=b.dtype)
    else:
        t = b[(chunks - 1) * 16: chunks * 16].copy()
    half = (chunks + 1) // 2
    for i in range(chunks):
        for k in range(16):
            t[k] ^= b[i * 16 + k]
        _salsa20_8(t)
        dst = i // 2 if i % 2 == 0 else half + i // 2
        y[dst * 16: dst * 16 + 16] = t
    b[:] = y


@njit(cache=True, nogil=True)
def romix(b, v):
    """Mix block *b* (uint32 words) in place using scratchpad *v*; return mixes."""
    n = v.shape[0]
    chunks = b.shape[0] // 16
    y = np.empty_like(b)
    last = (chunks - 1) * 16
    for i in range(n):
        v[i, :] = b
        _block_mix(b, y, chunks)
    for _ in range(n):
        j = ((np.uint64(b[last + 1]) << np.uint64(32)) | np.uint64(b[last])) % np.uint64(n)
        b ^= v[np.int64(j)]
        _block_mix(b, y, chunks)
    return 2 * n


def yescrypt_like(
    message: bytes, salt: bytes, *, threads: int, blocks: int, block_size: int, tag_len: int = 32
) -> tuple[bytes, int]:
    """Return (tag, BlockMix evaluations)."""
    words = block_size // 4
    b = np.frombuffer(
        hashlib.pbkdf2_hmac("sha256", message, salt, 1, threads * block_size), dtype="<u4"
    ).astype(np.uint32).reshape(threads, words)
    v = np.empty((blocks, words), dtype=np.uint32)
    mixes = 0
    for lane in range(threads):
        mixes += romix(b[lane], v)
    tag = hashlib.pbkdf2_hmac("sha256", message, b.astype("<u4").tobytes(), 1, tag_len)
    return tag, mixes
