"""Process CPU / RSS sampling."""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass

from ..errors import InvalidParam, Unsupported

try:
    import psutil
except ImportError:  # pragma: no cover - psutil is a declared dependency
    psutil = None


@dataclass(frozen=True)
class ResourceSnapshot:
    at_offset_s: float
    cpu_pct: float
    rss_bytes: int


def _process():
    if psutil is None:
        raise Unsupported("process metrics need psutil")
    try:
        proc = psutil.Process()
        proc.memory_info()
        proc.cpu_percent(None)
    except (psutil.Error, NotImplementedError) as exc:
        raise Unsupported(f"process metrics unavailable on this platform: {exc}") from exc
    return proc


class ResourceMonitor:
    """Background sampler; use as a context manager around the work to observe."""

    def __init__(self, interval_s: float):
        if not interval_s > 0:
            raise InvalidParam("interval_s", "must be > 0")
        self.interval_s = interval_s
        self.snapshots: list[ResourceSnapshot] = []
        self._proc = _process()
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None

    def _run(self) -> None:
        start = time.monotonic()
        tick = 1
        while True:
            deadline = start + tick * self.interval_s
            if self._stop.wait(max(0.0, deadline - time.monotonic())):
                return
            self.snapshots.append(
                ResourceSnapshot(
                    at_offset_s=time.monotonic() - start,
                    cpu_pct=self._proc.cpu_percent(None),
                    rss_bytes=self._proc.memory_info().rss,
                )
            )
            tick += 1

    def start(self) -> "ResourceMonitor":
        self._thread = threading.Thread(target=self._run, name="powbench-monitor", daemon=True)
        self._thread.start()
        return self

    def stop(self) -> list[ResourceSnapshot]:
        self._stop.set()
        if self._thread is not None:
            self._thread.join()
        return self.snapshots

    def __enter__(self) -> "ResourceMonitor":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()


def sample_resources(interval_s: float, duration_s: float) -> list[ResourceSnapshot]:
    """Sample this process every *interval_s* for *duration_s* seconds (blocking)."""
    if not interval_s > 0:
        raise InvalidParam("interval_s", "must be > 0")
    if duration_s < interval_s:
        raise InvalidParam("duration_s", "must be >= interval_s")
    mon = ResourceMonitor(interval_s)
    with mon:
        time.sleep(duration_s + interval_s / 2)
    expected = int(duration_s // interval_s)
    return mon.snapshots[:expected] if len(mon.snapshots) > expected else mon.snapshots
