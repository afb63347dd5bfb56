"""Execution-time statistics and the Chebyshev threshold model.

Chebyshev's inequality bounds the share of any distribution lying k or
more standard deviations from its mean by 1/k**2. For a sample set we take
k to be the largest standardised deviation actually observed, so every
sample sits inside mean ± k·sigma and the bound's guaranteed coverage is
1 - 1/k**2.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InsufficientSamples, InvalidParam, SigmaZero, TooFewSamples
from .kernels import PowConfig
from .measurement import CampaignRecord

# guards ceil/floor against representation noise such as 9.000000000000002
_ROUND_DIGITS = 9


@dataclass(frozen=True)
class StatsSummary:
    n: int
    min_s: float
    max_s: float
    mean_s: float
    sigma_s: float
    k_factor: float
    coverage: float


@dataclass(frozen=True)
class GateSpec:
    config: PowConfig
    n_required: int
    t_budget_s: float

    def __post_init__(self):
        if not isinstance(self.n_required, int) or self.n_required < 1:
            raise InvalidParam("n_required", "minimum is 1")


def chebyshev_coverage(k: float) -> float:
    """Guaranteed share of the population within k standard deviations."""
    if not isinstance(k, (int, float)) or not math.isfinite(k) or k <= 0:
        raise InvalidParam("k", f"must be finite and > 0, got {k!r}")
    if k <= 1:
        return 0.0
    return 1.0 - 1.0 / (k * k)


def summarize(samples: Iterable[float]) -> StatsSummary:
    x = np.asarray(list(samples), dtype=np.float64)
    if x.size < 2:
        raise TooFewSamples(f"need at least 2 samples, got {x.size}")
    if not np.all(np.isfinite(x)) or np.any(x < 0):
        raise InvalidParam("samples", "must be finite and non-negative")
    mean = float(np.mean(x))
    dev = x - mean
    sigma = float(np.sqrt(np.dot(dev, dev) / (x.size - 1)))
    if sigma == 0.0:
        raise SigmaZero("all samples are equal; k-factor is undefined")
    k = float(np.max(np.abs(dev)) / sigma)
    return StatsSummary(
        n=int(x.size),
        min_s=float(x.min()),
        max_s=float(x.max()),
        mean_s=mean,
        sigma_s=sigma,
        k_factor=k,
        coverage=chebyshev_coverage(k),
    )


def balanced_sample(records: Sequence[CampaignRecord], size: int, seed: int) -> list[float]:
    """Draw *size* completed durations from every record, without replacement.

    Equal-sized draws keep one fast platform with thousands of runs from
    dominating the pooled distribution.
    """
    if not isinstance(size, int) or size < 1:
        raise InvalidParam("size", "minimum is 1")
    pools = []
    for rec in records:
        durations = rec.completed_durations
        if len(durations) < size:
            raise InsufficientSamples(rec.config.label, len(durations), size)
        pools.append(durations)
    rng = random.Random(seed)
    out: list[float] = []
    for durations in pools:
        out.extend(rng.sample(durations, size))
    return out


def derive_gate(reference: StatsSummary, config: PowConfig, n_required: int = 2) -> GateSpec:
    """T = ceil(mean + k·sigma) whole seconds; N defaults to 2, the smallest N > 1."""
    if not isinstance(n_required, int) or n_required < 1:
        raise InvalidParam("n_required", "minimum is 1")
    if not reference.sigma_s > 0:
        raise SigmaZero("reference summary has zero spread")
    if not reference.k_factor > 1:
        raise InvalidParam("k_factor", "must be > 1 for a meaningful coverage")
    t = math.ceil(round(reference.mean_s + reference.k_factor * reference.sigma_s, _ROUND_DIGITS))
    return GateSpec(config=config, n_required=n_required, t_budget_s=float(t))


def k_for_threshold(samples: Iterable[float], threshold_s: float) -> float:
    s = summarize(samples)
    if not threshold_s > s.mean_s:
        raise InvalidParam("threshold_s", "must exceed the sample mean")
    return (threshold_s - s.mean_s) / s.sigma_s
