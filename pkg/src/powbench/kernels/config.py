"""PoW configuration types, validation and the clock-free cost model."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

from ..errors import InvalidParam

DEFAULT_MEMORY_CAP = 256 * 1024 * 1024

ARGON2_BLOCK_SIZE = 1024
CATENA_WORD_SIZE = 64


class Algorithm(str, enum.Enum):
    ARGON2I = "argon2i"
    CATENA_BRG = "catena"
    YESCRYPT_LIKE = "yescrypt"


@dataclass(frozen=True)
class Argon2iParams:
    p: int
    t: int
    m: int  # KiB
    tag_len: int = 32
    secret: bytes = b""
    associated_data: bytes = b""


@dataclass(frozen=True)
class CatenaParams:
    garlic: int
    lam: int = 1


@dataclass(frozen=True)
class YescryptParams:
    threads: int
    blocks: int
    block_size: int  # bytes


Params = Union[Argon2iParams, CatenaParams, YescryptParams]

_PARAMS_FOR = {
    Algorithm.ARGON2I: Argon2iParams,
    Algorithm.CATENA_BRG: CatenaParams,
    Algorithm.YESCRYPT_LIKE: YescryptParams,
}


@dataclass(frozen=True)
class PowConfig:
    algorithm: Algorithm
    params: Params
    label: str

    @classmethod
    def argon2i(cls, p: int, t: int, m: int, tag_len: int = 32, label: str | None = None) -> "PowConfig":
        return cls(Algorithm.ARGON2I, Argon2iParams(p, t, m, tag_len), label or f"argon2i-p{p}-t{t}-m{m}")

    @classmethod
    def catena(cls, garlic: int, lam: int = 1, label: str | None = None) -> "PowConfig":
        return cls(Algorithm.CATENA_BRG, CatenaParams(garlic, lam), label or f"catena-g{garlic}-l{lam}")

    @classmethod
    def yescrypt(cls, threads: int, blocks: int, block_size: int, label: str | None = None) -> "PowConfig":
        return cls(
            Algorithm.YESCRYPT_LIKE,
            YescryptParams(threads, blocks, block_size),
            label or f"yescrypt-t{threads}-b{blocks}-s{block_size}",
        )


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _require_int(field: str, value, minimum: int) -> None:
    if not _is_int(value):
        raise InvalidParam(field, f"must be an integer, got {value!r}")
    if value < minimum:
        raise InvalidParam(field, f"minimum is {minimum}")


def validate_config(config: PowConfig) -> PowConfig:
    """Return *config* unchanged if every bound holds, else raise InvalidParam.

    Bounds are checked in a fixed order so the reported field is always the
    first violated one.
    """
    try:
        algorithm = Algorithm(config.algorithm)
    except ValueError:
        raise InvalidParam("algorithm", f"unknown algorithm {config.algorithm!r}") from None
    if not isinstance(config.params, _PARAMS_FOR[algorithm]):
        raise InvalidParam("params", f"{type(config.params).__name__} does not match algorithm {algorithm.value}")
    if not isinstance(config.label, str) or not config.label:
        raise InvalidParam("label", "must be non-empty")
    if "\n" in config.label or "\r" in config.label:
        raise InvalidParam("label", "must not contain a newline")

    prm = config.params
    if isinstance(prm, Argon2iParams):
        _require_int("p", prm.p, 1)
        if prm.p >= 1 << 24:
            raise InvalidParam("p", "must fit in 24 bits")
        _require_int("t", prm.t, 1)
        _require_int("m", prm.m, 1)
        if prm.m < 8 * prm.p:
            raise InvalidParam("m", "m < 8·p")
        if prm.m >= 1 << 32:
            raise InvalidParam("m", "must fit in 32 bits")
        if prm.t >= 1 << 32:
            raise InvalidParam("t", "must fit in 32 bits")
        _require_int("tag_len", prm.tag_len, 4)
        if prm.tag_len >= 1 << 32:
            raise InvalidParam("tag_len", "must fit in 32 bits")
        for name in ("secret", "associated_data"):
            value = getattr(prm, name)
            if not isinstance(value, bytes):
                raise InvalidParam(name, "must be bytes")
            if len(value) >= 1 << 32:
                raise InvalidParam(name, "must be shorter than 2^32 bytes")
    elif isinstance(prm, CatenaParams):
        _require_int("garlic", prm.garlic, 10)
        if prm.garlic > 24:
            raise InvalidParam("garlic", "maximum is 24")
        _require_int("lam", prm.lam, 1)
    else:
        _require_int("threads", prm.threads, 1)
        _require_int("blocks", prm.blocks, 2)
        _require_int("block_size", prm.block_size, 64)
        if prm.block_size % 64:
            raise InvalidParam("block_size", "must be a multiple of 64")
    return config


def argon2_memory_blocks(prm: Argon2iParams) -> int:
    """Block count actually allocated: m rounded down to a multiple of 4·p."""
    return 4 * prm.p * (prm.m // (4 * prm.p))


def cost_model(config: PowConfig) -> int:
    """Number of memory-block primitive evaluations a run of *config* performs."""
    validate_config(config)
    prm = config.params
    if isinstance(prm, Argon2iParams):
        return prm.t * prm.m
    if isinstance(prm, CatenaParams):
        return (1 + prm.lam) << prm.garlic
    return prm.threads * prm.blocks * 2


def working_set_bytes(config: PowConfig) -> int:
    """Peak kernel memory, used for the memory-cap check."""
    prm = config.params
    if isinstance(prm, Argon2iParams):
        return argon2_memory_blocks(prm) * ARGON2_BLOCK_SIZE
    if isinstance(prm, CatenaParams):
        return (1 << prm.garlic) * CATENA_WORD_SIZE
    # lanes are processed one after another and share the scratchpad
    return prm.blocks * prm.block_size + prm.threads * prm.block_size
