"""Campaign, stats and gate files.

Campaign files are UTF-8 JSON (schema v1) with sorted keys. Second-valued
fields are decimal strings with at least six fractional digits, written
from the shortest repr of the double, so ``float(text)`` restores the
exact value on any platform.
"""

from __future__ import annotations

import csv
import json
import re
from datetime import datetime
from decimal import Decimal
from pathlib import Path
from typing import Any, Sequence

from .errors import EmptyInput, InvalidParam, InvariantViolation, SchemaError
from .kernels import Algorithm, Argon2iParams, CatenaParams, PowConfig, YescryptParams, cost_model, validate_config
from .measurement import (
    SCHEMA_VERSION,
    CampaignRecord,
    EnvMetadata,
    LoadCondition,
    LoadMode,
    PlatformClass,
    RunSample,
)
from .stats import GateSpec, StatsSummary

CSV_HEADER = ["label", "algorithm", "os", "declared_class", "load", "run_index", "duration_s", "completed"]
_DECIMAL = re.compile(r"^-?\d+\.\d{6,}$")


def format_seconds(x: float) -> str:
    d = Decimal(repr(float(x)))
    if not d.is_finite():
        raise InvalidParam("seconds", f"not finite: {x!r}")
    text = format(d, "f")
    whole, _, frac = text.partition(".")
    return f"{whole}.{frac.ljust(6, '0')}"


def parse_seconds(text: Any, field: str) -> float:
    if not isinstance(text, str) or not _DECIMAL.match(text):
        raise InvariantViolation(field, f"expected a decimal string with >= 6 fractional digits, got {text!r}")
    return float(text)


# -- config ---------------------------------------------------------------

def config_to_dict(config: PowConfig) -> dict:
    prm = config.params
    if isinstance(prm, Argon2iParams):
        params = {
            "p": prm.p,
            "t": prm.t,
            "m": prm.m,
            "tag_len": prm.tag_len,
            "secret": prm.secret.hex(),
            "associated_data": prm.associated_data.hex(),
        }
    elif isinstance(prm, CatenaParams):
        params = {"garlic": prm.garlic, "lambda": prm.lam}
    else:
        params = {"threads": prm.threads, "blocks": prm.blocks, "block_size": prm.block_size}
    return {"algorithm": Algorithm(config.algorithm).value, "label": config.label, "params": params}


def config_from_dict(data: dict) -> PowConfig:
    try:
        algorithm = Algorithm(data["algorithm"])
        p = data["params"]
        if algorithm is Algorithm.ARGON2I:
            params = Argon2iParams(
                p=p["p"],
                t=p["t"],
                m=p["m"],
                tag_len=p.get("tag_len", 32),
                secret=bytes.fromhex(p.get("secret", "")),
                associated_data=bytes.fromhex(p.get("associated_data", "")),
            )
        elif algorithm is Algorithm.CATENA_BRG:
            params = CatenaParams(garlic=p["garlic"], lam=p.get("lambda", 1))
        else:
            params = YescryptParams(threads=p["threads"], blocks=p["blocks"], block_size=p["block_size"])
        config = PowConfig(algorithm, params, data["label"])
        return validate_config(config)
    except InvalidParam as exc:
        raise InvariantViolation(f"config.{exc.field}", exc.reason) from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise InvariantViolation("config", str(exc)) from exc


# -- campaign -------------------------------------------------------------

def campaign_to_dict(record: CampaignRecord) -> dict:
    env = record.env
    return {
        "schema_version": record.schema_version,
        "campaign_id": record.campaign_id,
        "config": config_to_dict(record.config),
        "env": {
            "os_name": env.os_name,
            "os_version": env.os_version,
            "cpu_model": env.cpu_model,
            "logical_cores": env.logical_cores,
            "host_id": env.host_id,
            "declared_class": env.declared_class.value if env.declared_class else None,
            "captured_at": env.captured_at.isoformat(),
        },
        "load": {"mode": record.load.mode.value, "workers": record.load.workers},
        "budget_s": format_seconds(record.budget_s),
        "samples": [
            {
                "duration_s": format_seconds(s.duration_s),
                "started_offset_s": format_seconds(s.started_offset_s),
                "cost_blocks": s.cost_blocks,
                "completed": s.completed,
            }
            for s in record.samples
        ],
    }


def _require(cond: bool, field: str, reason: str = "") -> None:
    if not cond:
        raise InvariantViolation(field, reason)


def _int(value, field: str, minimum: int | None = None) -> int:
    _require(isinstance(value, int) and not isinstance(value, bool), field, "expected an integer")
    if minimum is not None:
        _require(value >= minimum, field, f"minimum is {minimum}")
    return value


def campaign_from_dict(data: dict) -> CampaignRecord:
    version = data.get("schema_version") if isinstance(data, dict) else None
    if version != SCHEMA_VERSION:
        raise SchemaError(version)
    config = config_from_dict(data.get("config", {}))

    e = data.get("env")
    _require(isinstance(e, dict), "env")
    try:
        captured_at = datetime.fromisoformat(e["captured_at"])
        declared = PlatformClass(e["declared_class"]) if e.get("declared_class") else None
        env = EnvMetadata(
            os_name=e["os_name"],
            os_version=e["os_version"],
            cpu_model=e["cpu_model"],
            logical_cores=_int(e["logical_cores"], "env.logical_cores", 1),
            host_id=e["host_id"],
            captured_at=captured_at,
            declared_class=declared,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvariantViolation("env", str(exc)) from exc
    for name in ("os_name", "os_version", "cpu_model", "host_id"):
        _require(isinstance(getattr(env, name), str) and getattr(env, name) != "", f"env.{name}")
    _require(captured_at.tzinfo is not None, "env.captured_at", "timestamp must carry a UTC offset")

    ld = data.get("load")
    _require(isinstance(ld, dict), "load")
    try:
        load = LoadCondition(LoadMode(ld.get("mode")), ld.get("workers"))
    except (ValueError, InvalidParam) as exc:
        raise InvariantViolation("load", str(exc)) from exc

    budget = parse_seconds(data.get("budget_s"), "budget_s")
    _require(budget > 0, "budget_s", "must be > 0")

    raw_samples = data.get("samples")
    _require(isinstance(raw_samples, list), "samples")
    expected_cost = cost_model(config)
    samples = []
    prev_offset = None
    for i, s in enumerate(raw_samples):
        field = f"samples[{i}]"
        _require(isinstance(s, dict), field)
        duration = parse_seconds(s.get("duration_s"), f"{field}.duration_s")
        offset = parse_seconds(s.get("started_offset_s"), f"{field}.started_offset_s")
        cost = _int(s.get("cost_blocks"), f"{field}.cost_blocks", 0)
        completed = s.get("completed")
        _require(isinstance(completed, bool), f"{field}.completed")
        _require(duration >= 0, f"{field}.duration_s", "must be >= 0")
        _require(0 <= offset < budget, f"{field}.started_offset_s", "must lie in [0, budget_s)")
        _require(prev_offset is None or offset >= prev_offset, f"{field}.started_offset_s", "samples out of order")
        if completed:
            _require(duration > 0, f"{field}.duration_s", "completed run must take > 0 s")
            _require(cost == expected_cost, f"{field}.cost_blocks", f"expected {expected_cost}")
        prev_offset = offset
        samples.append(RunSample(duration, offset, cost, completed))

    campaign_id = data.get("campaign_id", "")
    _require(isinstance(campaign_id, str), "campaign_id")
    return CampaignRecord(
        config=config,
        env=env,
        load=load,
        budget_s=budget,
        samples=tuple(samples),
        campaign_id=campaign_id,
        schema_version=version,
    )


def _write_json(data: dict, path: str | Path) -> None:
    text = json.dumps(data, sort_keys=True, indent=1, ensure_ascii=False) + "\n"
    Path(path).write_text(text, encoding="utf-8")


def _read_json(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvariantViolation("document", f"not valid JSON: {exc}") from exc


def save_campaign(record: CampaignRecord, path: str | Path) -> None:
    _write_json(campaign_to_dict(record), path)


def load_campaign(path: str | Path) -> CampaignRecord:
    return campaign_from_dict(_read_json(path))


# -- stats and gate -------------------------------------------------------

def save_stats(summary: StatsSummary, config: PowConfig, path: str | Path) -> None:
    _write_json(
        {
            "kind": "stats",
            "schema_version": SCHEMA_VERSION,
            "config": config_to_dict(config),
            "n": summary.n,
            "min_s": format_seconds(summary.min_s),
            "max_s": format_seconds(summary.max_s),
            "mean_s": format_seconds(summary.mean_s),
            "sigma_s": format_seconds(summary.sigma_s),
            "k_factor": repr(summary.k_factor),
            "coverage": repr(summary.coverage),
        },
        path,
    )


def stats_from_dict(data: dict) -> tuple[StatsSummary, PowConfig]:
    if data.get("schema_version") != SCHEMA_VERSION:
        raise SchemaError(data.get("schema_version"))
    _require(data.get("kind") == "stats", "kind", "not a stats file")
    try:
        summary = StatsSummary(
            n=_int(data["n"], "n", 2),
            min_s=parse_seconds(data["min_s"], "min_s"),
            max_s=parse_seconds(data["max_s"], "max_s"),
            mean_s=parse_seconds(data["mean_s"], "mean_s"),
            sigma_s=parse_seconds(data["sigma_s"], "sigma_s"),
            k_factor=float(data["k_factor"]),
            coverage=float(data["coverage"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvariantViolation("stats", str(exc)) from exc
    return summary, config_from_dict(data.get("config", {}))


def save_gate(gate: GateSpec, path: str | Path) -> None:
    _write_json(
        {
            "kind": "gate",
            "schema_version": SCHEMA_VERSION,
            "config": config_to_dict(gate.config),
            "n_required": gate.n_required,
            "t_budget_s": format_seconds(gate.t_budget_s),
        },
        path,
    )


def load_gate(path: str | Path) -> GateSpec:
    data = _read_json(path)
    if data.get("schema_version") != SCHEMA_VERSION:
        raise SchemaError(data.get("schema_version"))
    _require(data.get("kind") == "gate", "kind", "not a gate file")
    n = _int(data.get("n_required"), "n_required", 1)
    t = parse_seconds(data.get("t_budget_s"), "t_budget_s")
    return GateSpec(config=config_from_dict(data.get("config", {})), n_required=n, t_budget_s=t)


def read_document(path: str | Path) -> dict:
    """Raw JSON of any powbench file, for callers that dispatch on ``kind``."""
    return _read_json(path)


# -- CSV ------------------------------------------------------------------

def export_csv(records: Sequence[CampaignRecord], path: str | Path) -> None:
    if not records:
        raise EmptyInput("no campaign records to export")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
        writer.writerow(CSV_HEADER)
        for rec in records:
            declared = rec.env.declared_class.value if rec.env.declared_class else ""
            for i, s in enumerate(rec.samples):
                writer.writerow(
                    [
                        rec.config.label,
                        Algorithm(rec.config.algorithm).value,
                        rec.env.os_name,
                        declared,
                        str(rec.load),
                        i,
                        format_seconds(s.duration_s),
                        "true" if s.completed else "false",
                    ]
                )

