"""Clock sources: the OS monotonic clock and a scripted clock for tests."""

from __future__ import annotations

import time
from fractions import Fraction
from typing import Iterable, Protocol


class ClockSource(Protocol):
    def now(self) -> float | Fraction: ...


class MonotonicClock:
    """Wraps ``time.perf_counter`` (monotonic, highest available resolution)."""

    def now(self) -> float:
        return time.perf_counter()


def _exact(seconds) -> Fraction:
    # decimal literal semantics: 0.1 means one tenth, not the nearest double
    return Fraction(str(seconds)) if isinstance(seconds, float) else Fraction(seconds)


class ScriptedClock:
    """Deterministic clock driven by the test.

    Time moves only through :meth:`advance` or, when *instants* are given,
    by handing them out one per :meth:`now` call (the last one repeats).
    :meth:`now` returns an exact ``Fraction`` so that differences and
    budget comparisons carry no floating-point drift. Not thread-safe.
    """

    def __init__(self, start: float = 0.0, instants: Iterable[float] = ()):
        self._t = _exact(start)
        self._pending = [_exact(x) for x in instants]
        prev = self._t
        for x in self._pending:
            if x < prev:
                raise ValueError("scripted instants must be non-decreasing")
            prev = x

    def now(self) -> Fraction:
        if self._pending:
            self._t = self._pending.pop(0)
        return self._t

    def advance(self, seconds: float) -> None:
        step = _exact(seconds)
        if step < 0:
            raise ValueError("a monotonic clock cannot go backwards")
        self._t += step
