"""Timed PoW runs and back-to-back profiling campaigns."""

from __future__ import annotations

import enum
import functools
import logging
import uuid
from dataclasses import dataclass
from typing import Callable

from ..errors import InvalidBudget, InvalidParam, PowBenchError
from ..kernels import (
    DEFAULT_MEMORY_CAP,
    PowConfig,
    PowOutput,
    check_memory,
    compute_pow,
    validate_config,
    warm_up,
)
from .clock import ClockSource
from .env import EnvMetadata, capture_env
from .load import LoadHandle, start_load, stop_load

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
DEFAULT_SALT = bytes(16)

Kernel = Callable[[PowConfig, bytes, bytes], PowOutput]


@dataclass(frozen=True)
class RunSample:
    duration_s: float
    started_offset_s: float
    cost_blocks: int
    completed: bool


class LoadMode(str, enum.Enum):
    IDLE = "idle"
    BUSY = "busy"


@dataclass(frozen=True)
class LoadCondition:
    mode: LoadMode
    workers: int | None = None

    def __post_init__(self):
        if self.mode is LoadMode.IDLE and self.workers is not None:
            raise InvalidParam("workers", "idle load takes no workers")
        if self.mode is LoadMode.BUSY and (not isinstance(self.workers, int) or self.workers < 1):
            raise InvalidParam("workers", "minimum is 1")

    @classmethod
    def idle(cls) -> "LoadCondition":
        return cls(LoadMode.IDLE)

    @classmethod
    def busy(cls, workers: int) -> "LoadCondition":
        return cls(LoadMode.BUSY, workers)

    @classmethod
    def parse(cls, text: str) -> "LoadCondition":
        """Parse ``idle`` or ``busy:K``."""
        mode, _, workers = text.strip().lower().partition(":")
        if mode == "idle" and not workers:
            return cls.idle()
        if mode == "busy":
            try:
                return cls.busy(int(workers) if workers else 1)
            except ValueError:
                pass
        raise InvalidParam("load", f"expected 'idle' or 'busy:K', got {text!r}")

    def __str__(self) -> str:
        return "idle" if self.mode is LoadMode.IDLE else f"busy:{self.workers}"


@dataclass(frozen=True)
class CampaignRecord:
    config: PowConfig
    env: EnvMetadata
    load: LoadCondition
    budget_s: float
    samples: tuple[RunSample, ...]
    campaign_id: str = ""
    schema_version: int = SCHEMA_VERSION

    @property
    def completed_durations(self) -> list[float]:
        return [s.duration_s for s in self.samples if s.completed]

    @property
    def completed_count(self) -> int:
        return sum(1 for s in self.samples if s.completed)


def default_kernel(memory_cap_bytes: int = DEFAULT_MEMORY_CAP) -> Kernel:
    return functools.partial(compute_pow, memory_cap_bytes=memory_cap_bytes)


def timed_run(
    config: PowConfig,
    clock: ClockSource,
    message: bytes,
    salt: bytes = DEFAULT_SALT,
    *,
    kernel: Kernel | None = None,
    origin: float | None = None,
    started_at: float | None = None,
) -> RunSample:
    """Time one kernel call. Only the call itself sits between the two clock reads.

    *started_at* lets a scheduler reuse the clock reading it just took for
    its own budget check, so the recorded start is the checked instant.
    """
    kernel = kernel or default_kernel()
    t0 = clock.now() if started_at is None else started_at
    try:
        out = kernel(config, message, salt)
    except PowBenchError as exc:
        t1 = clock.now()
        log.warning("run failed after %.6fs: %s", t1 - t0, exc)
        return RunSample(float(t1 - t0), _offset(t0, origin), 0, False)
    t1 = clock.now()
    return RunSample(float(t1 - t0), _offset(t0, origin), out.cost_blocks, True)


def _offset(t0, origin) -> float:
    return 0.0 if origin is None else float(t0 - origin)


def run_message(campaign_id: str, index: int) -> bytes:
    return f"{campaign_id}:{index}".encode()


def run_campaign(
    config: PowConfig,
    load: LoadCondition,
    budget_s: float,
    clock: ClockSource,
    *,
    kernel: Kernel | None = None,
    env: EnvMetadata | None = None,
    campaign_id: str | None = None,
    salt: bytes = DEFAULT_SALT,
    load_starter: Callable[[int], LoadHandle] = start_load,
    load_stopper: Callable[[LoadHandle], None] = stop_load,
    memory_cap_bytes: int = DEFAULT_MEMORY_CAP,
) -> CampaignRecord:
    """Run the kernel back to back until the next start would be at or after *budget_s*."""
    if not budget_s > 0:
        raise InvalidBudget(budget_s)
    validate_config(config)
    if kernel is None:
        # an oversized config would only produce a budget full of failed runs
        check_memory(config, memory_cap_bytes)
        warm_up()
        kernel = default_kernel(memory_cap_bytes)
    env = env if env is not None else capture_env()
    campaign_id = campaign_id or uuid.uuid4().hex

    handle = load_starter(load.workers) if load.mode is LoadMode.BUSY else None
    samples = []
    try:
        origin = clock.now()
        while True:
            message = run_message(campaign_id, len(samples))
            t0 = clock.now()
            if t0 - origin >= budget_s:
                break
            samples.append(
                timed_run(config, clock, message, salt, kernel=kernel, origin=origin, started_at=t0)
            )
    finally:
        if handle is not None:
            load_stopper(handle)

    return CampaignRecord(
        config=config,
        env=env,
        load=load,
        budget_s=float(budget_s),
        samples=tuple(samples),
        campaign_id=campaign_id,
    )
