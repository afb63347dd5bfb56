"""Local CPU-bound load generator used for busy-mode campaigns.

Workers are threads that hash a 64 KiB buffer in a loop; hashlib releases
the GIL for inputs that large, so each worker keeps one core busy.
"""

from __future__ import annotations

import hashlib
import os
import threading

from ..errors import InvalidParam

_CHUNK = 1 << 16
STOP_TIMEOUT_S = 1.0


class LoadHandle:
    def __init__(self, workers: int):
        self.workers = workers
        self._stop = threading.Event()
        self._threads: list[threading.Thread] = []
        self._lock = threading.Lock()

    @property
    def alive_workers(self) -> int:
        return sum(t.is_alive() for t in self._threads)

    @property
    def stopped(self) -> bool:
        return self._stop.is_set() and self.alive_workers == 0


def _spin(stop: threading.Event) -> None:
    buf = os.urandom(_CHUNK)
    key = b"\0" * 64
    while not stop.is_set():
        key = hashlib.blake2b(buf, key=key).digest()


def start_load(workers: int) -> LoadHandle:
    if not isinstance(workers, int) or workers < 1:
        raise InvalidParam("workers", "minimum is 1")
    handle = LoadHandle(workers)
    for i in range(workers):
        t = threading.Thread(target=_spin, args=(handle._stop,), name=f"powbench-load-{i}", daemon=True)
        handle._threads.append(t)
        t.start()
    return handle


def stop_load(handle: LoadHandle) -> None:
    """Stop every worker. Safe to call more than once and from any thread."""
    with handle._lock:
        handle._stop.set()
        for t in handle._threads:
            t.join(timeout=STOP_TIMEOUT_S)
