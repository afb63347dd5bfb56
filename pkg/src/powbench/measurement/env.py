"""Host description attached to every campaign."""

from __future__ import annotations

import enum
import hashlib
import os
import platform
import socket
from dataclasses import dataclass
from datetime import datetime, timezone

from .. import config as cfgmod


class PlatformClass(str, enum.Enum):
    LOW_END = "low"
    MID_END = "mid"
    HIGH_END = "high"


@dataclass(frozen=True)
class EnvMetadata:
    os_name: str
    os_version: str
    cpu_model: str
    logical_cores: int
    host_id: str
    captured_at: datetime
    declared_class: PlatformClass | None = None


def host_id_for(hostname: str, salt: str) -> str:
    return hashlib.sha256(f"{salt}:{hostname}".encode()).hexdigest()[:16]


def _cpu_model() -> str:
    try:
        with open("/proc/cpuinfo", encoding="utf-8") as fh:
            for line in fh:
                if line.lower().startswith(("model name", "hardware", "cpu model")):
                    return line.split(":", 1)[1].strip() or "unknown"
    except OSError:
        pass
    return platform.processor() or platform.machine() or "unknown"


def capture_env(
    declared_class: PlatformClass | None = None, *, salt: str | None = None
) -> EnvMetadata:
    """Describe the current host. Never fails; unknown fields read "unknown"."""
    if salt is None:
        try:
            salt = cfgmod.install_salt()
        except OSError:
            salt = "unsalted"
    try:
        hostname = socket.gethostname() or "unknown"
    except OSError:
        hostname = "unknown"
    return EnvMetadata(
        os_name=platform.system() or "unknown",
        os_version=platform.release() or "unknown",
        cpu_model=_cpu_model(),
        logical_cores=max(1, os.cpu_count() or 1),
        host_id=host_id_for(hostname, salt),
        captured_at=datetime.now(timezone.utc),
        declared_class=declared_class,
    )
