"""Single-layer bit-reversal-graph kernel in the style of Catena-BRG.

The memory array holds 2**garlic BLAKE2b-512 words. It is filled
sequentially, then each of ``lam`` passes rewrites word i (in place) as
H(word[i-1] || word[bitrev(i)]), where word[-1] wraps to the last word.
"""

from __future__ import annotations

import hashlib
import struct

import numpy as np

DIGEST_SIZE = 64


def bit_reversal_table(garlic: int) -> list[int]:
    idx = np.arange(1 << garlic, dtype=np.uint32)
    rev = np.zeros_like(idx)
    for b in range(garlic):
        rev |= ((idx >> b) & 1) << (garlic - 1 - b)
    return rev.tolist()


def catena_brg(message: bytes, salt: bytes, *, garlic: int, lam: int = 1) -> tuple[bytes, int]:
    """Return (tag, words hashed into memory)."""
    blake = hashlib.blake2b
    n = 1 << garlic
    seed = blake(
        struct.pack("<II", garlic, lam)
        + struct.pack("<I", len(message)) + message
        + struct.pack("<I", len(salt)) + salt,
        digest_size=DIGEST_SIZE,
    ).digest()

    v = [b""] * n
    x = blake(seed).digest()
    v[0] = x
    for i in range(1, n):
        x = blake(x).digest()
        v[i] = x

    rev = bit_reversal_table(garlic)
    for _ in range(lam):
        x = v[n - 1]
        for i in range(n):
            x = blake(x + v[rev[i]]).digest()
            v[i] = x

    return blake(v[n - 1]).digest(), (1 + lam) * n
