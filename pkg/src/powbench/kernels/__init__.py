"""Memory-hard PoW kernels behind one interface.

``compute_pow`` dispatches on the config's algorithm and reports, next to
the digest, how many memory-block primitive evaluations were performed so
the workload can be checked without a clock.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InvalidParam, MemoryCapExceeded
from .argon2 import argon2i
from .catena import DIGEST_SIZE as CATENA_DIGEST_SIZE
from .catena import catena_brg
from .config import (
    DEFAULT_MEMORY_CAP,
    Algorithm,
    Argon2iParams,
    CatenaParams,
    Params,
    PowConfig,
    YescryptParams,
    argon2_memory_blocks,
    cost_model,
    validate_config,
    working_set_bytes,
)
from .yescrypt import yescrypt_like

YESCRYPT_TAG_LEN = 32

__all__ = [
    "Algorithm",
    "Argon2iParams",
    "CatenaParams",
    "DEFAULT_MEMORY_CAP",
    "Params",
    "PowConfig",
    "PowOutput",
    "YescryptParams",
    "argon2_memory_blocks",
    "check_memory",
    "compute_pow",
    "cost_model",
    "tag_length",
    "validate_config",
    "warm_up",
    "working_set_bytes",
]


@dataclass(frozen=True)
class PowOutput:
    tag: bytes
    cost_blocks: int


def tag_length(config: PowConfig) -> int:
    prm = config.params
    if isinstance(prm, Argon2iParams):
        return prm.tag_len
    if isinstance(prm, CatenaParams):
        return CATENA_DIGEST_SIZE
    return YESCRYPT_TAG_LEN


def check_memory(config: PowConfig, memory_cap_bytes: int = DEFAULT_MEMORY_CAP) -> None:
    needed = working_set_bytes(config)
    if needed > memory_cap_bytes:
        raise MemoryCapExceeded(needed, memory_cap_bytes)


def compute_pow(
    config: PowConfig,
    message: bytes,
    salt: bytes,
    *,
    memory_cap_bytes: int = DEFAULT_MEMORY_CAP,
) -> PowOutput:
    validate_config(config)
    if not isinstance(message, (bytes, bytearray)) or len(message) >= 1 << 32:
        raise InvalidParam("message", "must be bytes shorter than 2^32")
    if not isinstance(salt, (bytes, bytearray)) or len(salt) < 8:
        raise InvalidParam("salt", "must be at least 8 bytes")
    if len(salt) >= 1 << 32:
        raise InvalidParam("salt", "must be shorter than 2^32 bytes")
    check_memory(config, memory_cap_bytes)
    message, salt = bytes(message), bytes(salt)

    prm = config.params
    if isinstance(prm, Argon2iParams):
        # like libargon2 the kernel fills 4p*floor(m/4p) blocks per pass; the
        # nominal t*m is reported so cost stays strictly increasing in m
        tag, _ = argon2i(
            message,
            salt,
            p=prm.p,
            t=prm.t,
            m=prm.m,
            tag_len=prm.tag_len,
            secret=prm.secret,
            associated_data=prm.associated_data,
        )
        cost = cost_model(config)
    elif isinstance(prm, CatenaParams):
        tag, cost = catena_brg(message, salt, garlic=prm.garlic, lam=prm.lam)
    else:
        tag, cost = yescrypt_like(
            message,
            salt,
            threads=prm.threads,
            blocks=prm.blocks,
            block_size=prm.block_size,
            tag_len=YESCRYPT_TAG_LEN,
        )
    return PowOutput(tag, cost)


def warm_up() -> None:
    """Trigger JIT compilation (or load the on-disk cache) outside any timed region."""
    salt = bytes(16)
    compute_pow(PowConfig.argon2i(1, 1, 8), b"", salt)
    compute_pow(PowConfig.yescrypt(1, 2, 64), b"", salt)
