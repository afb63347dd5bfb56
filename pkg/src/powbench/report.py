"""Markdown tables in the layout of the published evaluation tables."""

from __future__ import annotations

from collections import OrderedDict
from typing import Sequence

from .errors import EmptyInput
from .kernels import Algorithm, Argon2iParams, CatenaParams, PowConfig
from .measurement import CampaignRecord, LoadMode
from .stats import StatsSummary

STAT_HEADERS = ["Min", "Max", "Sigma", "Mean", "K", "Chebyshev"]


def _size(nbytes: int) -> str:
    if nbytes % 1024 == 0:
        return f"{nbytes // 1024}KB"
    return f"{nbytes}B"


def _param_columns(config: PowConfig) -> tuple[list[str], list[str]]:
    prm = config.params
    if isinstance(prm, Argon2iParams):
        return ["Threads", "Iterations", "Memory"], [str(prm.p), str(prm.t), f"{prm.m} KiB"]
    if isinstance(prm, CatenaParams):
        return ["Garlic"], [str(prm.garlic)]
    return ["Threads", "Blocks", "Block Size"], [str(prm.threads), str(prm.blocks), _size(prm.block_size)]


def _row(cells: Sequence[str]) -> str:
    return "| " + " | ".join(cells) + " |"


def render_stats_table(
    rows: Sequence[tuple[PowConfig, StatsSummary]],
    *,
    k_digits: int | None = None,
    pct_digits: int | None = None,
) -> str:
    """Times print with 2 decimals. K and the coverage percentage use 2
    decimals for Catena tables and 1 otherwise unless overridden."""
    if not rows:
        raise EmptyInput("no rows to render")
    algorithms = {Algorithm(cfg.algorithm) for cfg, _ in rows}
    if len(algorithms) == 1:
        headers, _ = _param_columns(rows[0][0])
        params = [_param_columns(cfg)[1] for cfg, _ in rows]
    else:
        headers = ["Config"]
        params = [[cfg.label] for cfg, _ in rows]
    default = 2 if algorithms == {Algorithm.CATENA_BRG} else 1
    kd = default if k_digits is None else k_digits
    pd = default if pct_digits is None else pct_digits

    lines = [_row(headers + STAT_HEADERS), _row(["---"] * (len(headers) + len(STAT_HEADERS)))]
    for cells, (_, s) in zip(params, rows):
        lines.append(
            _row(
                cells
                + [
                    f"{s.min_s:.2f}",
                    f"{s.max_s:.2f}",
                    f"{s.sigma_s:.2f}",
                    f"{s.mean_s:.2f}",
                    f"{s.k_factor:.{kd}f}",
                    f"{s.coverage * 100:.{pd}f}%",
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _platform(rec: CampaignRecord) -> str:
    if rec.env.declared_class is not None:
        return rec.env.declared_class.value
    return rec.env.cpu_model


def render_counts_table(records: Sequence[CampaignRecord]) -> str:
    """Completed runs per platform (rows, idle before busy) and OS (columns)."""
    if not records:
        raise EmptyInput("no campaign records to tabulate")
    platforms: OrderedDict[str, None] = OrderedDict()
    oses: OrderedDict[str, None] = OrderedDict()
    counts: dict[tuple[str, LoadMode, str], int] = {}
    modes_seen: dict[str, set[LoadMode]] = {}
    for rec in records:
        plat, os_name, mode = _platform(rec), rec.env.os_name, rec.load.mode
        platforms.setdefault(plat)
        oses.setdefault(os_name)
        modes_seen.setdefault(plat, set()).add(mode)
        key = (plat, mode, os_name)
        counts[key] = counts.get(key, 0) + rec.completed_count

    lines = [_row(["Platform", "Status", *oses]), _row(["---"] * (2 + len(oses)))]
    for plat in platforms:
        first = True
        for mode in (LoadMode.IDLE, LoadMode.BUSY):
            if mode not in modes_seen[plat]:
                continue
            cells = [
                f"{counts[(plat, mode, o)]:,}" if (plat, mode, o) in counts else "-" for o in oses
            ]
            lines.append(_row([plat if first else "", mode.value, *cells]))
            first = False
    return "\n".join(lines) + "\n"
