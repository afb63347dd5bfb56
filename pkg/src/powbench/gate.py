"""The (N, T) decision rule.

A host is BareMetalLike when it completes N PoW runs in less than T
seconds, and Constrained otherwise. The probe only reports; it never
conditions any further execution on the outcome.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import InvalidBudget, InvalidParam
from .kernels import DEFAULT_MEMORY_CAP, check_memory, validate_config, warm_up
from .measurement import DEFAULT_SALT, ClockSource, RunSample, default_kernel, timed_run
from .measurement.campaign import Kernel
from .stats import GateSpec, StatsSummary

EXIT_BARE_METAL_LIKE = 0
EXIT_ERROR = 2
EXIT_CONSTRAINED = 3


class Classification(str, enum.Enum):
    BARE_METAL_LIKE = "BareMetalLike"
    CONSTRAINED = "Constrained"

    @property
    def exit_code(self) -> int:
        return EXIT_BARE_METAL_LIKE if self is Classification.BARE_METAL_LIKE else EXIT_CONSTRAINED


@dataclass(frozen=True)
class Verdict:
    classification: Classification
    completed_runs: int
    elapsed_s: float
    gate: GateSpec
    per_run: tuple[RunSample, ...]
    decision_s: float | None = None  # offset of the N-th in-budget completion


def evaluate_gate(
    gate: GateSpec,
    clock: ClockSource,
    *,
    kernel: Kernel | None = None,
    message: bytes = b"powbench-probe",
    salt: bytes = DEFAULT_SALT,
    memory_cap_bytes: int = DEFAULT_MEMORY_CAP,
) -> Verdict:
    """Run back to back until N runs finish inside T or the budget is gone.

    The budget is checked between runs. A run still in flight when T passes
    is allowed to finish (it shows up in ``per_run``) but never counts
    toward N.
    """
    if not gate.t_budget_s > 0:
        raise InvalidBudget(gate.t_budget_s)
    if gate.n_required < 1:
        raise InvalidParam("n_required", "minimum is 1")
    validate_config(gate.config)
    if kernel is None:
        check_memory(gate.config, memory_cap_bytes)
        warm_up()
        kernel = default_kernel(memory_cap_bytes)

    budget = gate.t_budget_s
    runs: list[RunSample] = []
    completed = 0
    decision = None
    origin = clock.now()
    now = origin
    while True:
        if now - origin >= budget:
            break
        sample = timed_run(
            gate.config,
            clock,
            message + len(runs).to_bytes(4, "little"),
            salt,
            kernel=kernel,
            origin=origin,
            started_at=now,
        )
        runs.append(sample)
        now = clock.now()
        if sample.completed and now - origin < budget:
            completed += 1
            if completed >= gate.n_required:
                decision = float(now - origin)
                break

    classification = (
        Classification.BARE_METAL_LIKE if completed >= gate.n_required else Classification.CONSTRAINED
    )
    return Verdict(
        classification=classification,
        completed_runs=completed,
        elapsed_s=float(now - origin),
        gate=gate,
        per_run=tuple(runs),
        decision_s=decision,
    )


def expected_runs(stats: StatsSummary, t_budget_s: float) -> int:
    """How many consecutive runs of mean length fit in the budget."""
    if not t_budget_s > 0:
        raise InvalidParam("t_budget_s", "must be > 0")
    if not stats.mean_s > 0:
        raise InvalidParam("mean_s", "must be > 0")
    return math.floor(round(t_budget_s / stats.mean_s, 9))
