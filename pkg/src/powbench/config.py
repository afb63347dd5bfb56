"""Operator configuration: one JSON file, overridable by CLI flags.

The file path comes from ``$POWBENCH_CONFIG`` and falls back to
``~/.config/powbench/config.json``. The per-install salt used to anonymise
the hostname is generated on first use and written back.
"""

from __future__ import annotations

import json
import os
import secrets
from dataclasses import asdict, dataclass, replace
from pathlib import Path

from .kernels.config import DEFAULT_MEMORY_CAP

ENV_VAR = "POWBENCH_CONFIG"
DEFAULT_BUDGET_S = 60.0


@dataclass(frozen=True)
class CliConfig:
    memory_cap_bytes: int = DEFAULT_MEMORY_CAP
    default_budget_s: float = DEFAULT_BUDGET_S
    install_salt: str = ""
    output_dir: str = "."

    def with_overrides(self, **overrides) -> "CliConfig":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def config_path() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".config" / "powbench" / "config.json"


def load_config(path: str | Path | None = None) -> CliConfig:
    path = Path(path) if path is not None else config_path()
    data = {}
    if path.exists():
        data = json.loads(path.read_text(encoding="utf-8"))
    known = {k: data[k] for k in CliConfig.__dataclass_fields__ if k in data}
    return CliConfig(**known)


def save_config(cfg: CliConfig, path: str | Path | None = None) -> None:
    path = Path(path) if path is not None else config_path()
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(asdict(cfg), indent=2, sort_keys=True) + "\n", encoding="utf-8")


def install_salt(path: str | Path | None = None) -> str:
    cfg = load_config(path)
    if cfg.install_salt:
        return cfg.install_salt
    cfg = replace(cfg, install_salt=secrets.token_hex(16))
    save_config(cfg, path)
    return cfg.install_salt
