"""powbench command line.

Pipeline: ``calibrate`` (profile a PoW on this host) -> ``stats`` (pooled,
optionally balanced Chebyshev summary) -> ``derive-gate`` (N, T) ->
``probe`` (classify this host) and ``report`` (markdown tables).

Exit codes: 0 success / BareMetalLike, 3 Constrained (probe only), 2 error.
"""

from __future__ import annotations

import argparse
import json
import logging
import signal
import sys
import threading
from pathlib import Path
from typing import Sequence

from . import config as cfgmod
from .errors import InvalidParam, PowBenchError
from .gate import EXIT_ERROR, evaluate_gate, expected_runs
from .kernels import PowConfig, PowOutput, cost_model, validate_config
from .kernels.kat import load_vectors, run_known_answers
from .measurement import (
    CampaignRecord,
    LoadCondition,
    MonotonicClock,
    PlatformClass,
    ScriptedClock,
    capture_env,
    run_campaign,
    start_load,
    stop_load,
)
from .report import render_counts_table, render_stats_table
from .stats import balanced_sample, derive_gate, summarize
from .storage import (
    config_to_dict,
    export_csv,
    load_campaign,
    load_gate,
    read_document,
    save_campaign,
    save_gate,
    save_stats,
    stats_from_dict,
)

log = logging.getLogger("powbench")

EPILOG = "exit codes: 0 success (probe: BareMetalLike), 3 Constrained (probe only), 2 any error"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _config_from_args(args) -> PowConfig:
    if args.algo == "argon2i":
        cfg = PowConfig.argon2i(args.p, args.t, args.m, args.tag_len, label=args.label)
    elif args.algo == "catena":
        cfg = PowConfig.catena(args.garlic, args.lam, label=args.label)
    else:
        cfg = PowConfig.yescrypt(args.threads, args.blocks, args.block_size, label=args.label)
    return validate_config(cfg)


def _load_records(paths: Sequence[str]) -> list[CampaignRecord]:
    return [load_campaign(p) for p in paths]


def _same_config(records: Sequence[CampaignRecord]) -> PowConfig:
    first = config_to_dict(records[0].config)
    for rec in records[1:]:
        other = config_to_dict(rec.config)
        other["label"] = first["label"]
        if other != first:
            raise InvalidParam("in", "campaign files were recorded with different PoW configs")
    return records[0].config


def _pooled(records: Sequence[CampaignRecord], balance: int | None, seed: int) -> list[float]:
    if balance is not None:
        return balanced_sample(records, balance, seed)
    return [d for rec in records for d in rec.completed_durations]


# -- subcommands ----------------------------------------------------------

def cmd_calibrate(args, cli_cfg: cfgmod.CliConfig) -> int:
    config = _config_from_args(args)
    load = LoadCondition.parse(args.load)
    budget = args.budget_s if args.budget_s is not None else cli_cfg.default_budget_s
    declared = PlatformClass(args.platform_class) if args.platform_class else None
    env = capture_env(declared)
    record = run_campaign(
        config,
        load,
        budget,
        MonotonicClock(),
        env=env,
        memory_cap_bytes=cli_cfg.memory_cap_bytes,
    )
    save_campaign(record, args.out)
    print(f"{record.completed_count} completed runs of {config.label} in {budget:g} s ({load}) -> {args.out}")
    return 0


def cmd_stats(args, cli_cfg: cfgmod.CliConfig) -> int:
    records = _load_records(args.inputs)
    config = _same_config(records)
    durations = _pooled(records, args.balance, args.seed)
    summary = summarize(durations)
    if args.save:
        save_stats(summary, config, args.save)
    text = f"{summary.n} durations from {len(records)} campaign file(s)\n\n"
    text += render_stats_table([(config, summary)])
    _emit(text, args.out)
    return 0


def cmd_derive_gate(args, cli_cfg: cfgmod.CliConfig) -> int:
    docs = [read_document(p) for p in args.inputs]
    if len(docs) == 1 and docs[0].get("kind") == "stats":
        summary, config = stats_from_dict(docs[0])
    else:
        records = _load_records(args.inputs)
        config = _same_config(records)
        summary = summarize(_pooled(records, args.balance, args.seed))
    gate = derive_gate(summary, config, args.n)
    save_gate(gate, args.out)
    print(f"T={gate.t_budget_s:g} N={gate.n_required}")
    print(
        f"reference: mean {summary.mean_s:.4f}s sigma {summary.sigma_s:.4f}s K {summary.k_factor:.2f} "
        f"coverage {summary.coverage * 100:.2f}%; about {expected_runs(summary, gate.t_budget_s)} runs fit in T"
    )
    print(f"gate written to {args.out}")
    return 0


def _simulated_kernel(clock: ScriptedClock, seconds: float):
    def kernel(config: PowConfig, message: bytes, salt: bytes) -> PowOutput:
        clock.advance(seconds)
        return PowOutput(b"", cost_model(config))

    return kernel


def cmd_probe(args, cli_cfg: cfgmod.CliConfig) -> int:
    gate = load_gate(args.gate)
    if args.simulate_run_s is not None:
        clock = ScriptedClock()
        verdict = evaluate_gate(gate, clock, kernel=_simulated_kernel(clock, args.simulate_run_s))
    else:
        verdict = evaluate_gate(gate, MonotonicClock(), memory_cap_bytes=cli_cfg.memory_cap_bytes)
    lines = [
        f"verdict: {verdict.classification.value}",
        f"gate: N={gate.n_required} T={gate.t_budget_s:g}s config={gate.config.label}",
        f"completed_runs: {verdict.completed_runs}",
        f"elapsed_s: {verdict.elapsed_s:.6f}",
        "per_run_s: " + ", ".join(f"{s.duration_s:.6f}" for s in verdict.per_run),
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return verdict.classification.exit_code


def cmd_report(args, cli_cfg: cfgmod.CliConfig) -> int:
    records = _load_records(args.inputs)
    groups: dict[str, list[CampaignRecord]] = {}
    for rec in records:
        key = json.dumps({**config_to_dict(rec.config), "label": ""}, sort_keys=True)
        groups.setdefault(key, []).append(rec)

    by_algorithm: dict[str, list] = {}
    for recs in groups.values():
        summary = summarize(_pooled(recs, args.balance, args.seed))
        by_algorithm.setdefault(recs[0].config.algorithm.value, []).append((recs[0].config, summary))

    parts = []
    for algorithm, rows in by_algorithm.items():
        parts.append(f"## {algorithm}\n\n" + render_stats_table(rows))
    parts.append("## Completed runs per platform and OS\n\n" + render_counts_table(records))
    _emit("\n".join(parts), args.out)
    if args.csv:
        export_csv(records, args.csv)
    return 0


def cmd_load(args, cli_cfg: cfgmod.CliConfig) -> int:
    handle = start_load(args.workers)
    done = threading.Event()

    def _shutdown(signum, frame):
        done.set()

    previous = {s: signal.signal(s, _shutdown) for s in (signal.SIGINT, signal.SIGTERM)}
    try:
        print(f"{args.workers} load worker(s) running for {args.seconds:g} s (Ctrl-C stops early)")
        done.wait(args.seconds)
    finally:
        stop_load(handle)
        for s, h in previous.items():
            signal.signal(s, h)
    print(f"stopped; live workers: {handle.alive_workers}")
    return 0


def cmd_kat(args, cli_cfg: cfgmod.CliConfig) -> int:
    vectors = load_vectors(args.vectors)
    report = run_known_answers(vectors)
    print(f"passed: {report.passed}")
    print("failed: " + (", ".join(report.failed) if report.failed else "none"))
    if report.no_vectors:
        print("warning: no vectors found")
    return 0 if report.ok else EXIT_ERROR


# -- parser ---------------------------------------------------------------

def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="powbench",
        description="Memory-hard PoW timing audit: calibrate, model, derive an (N, T) gate, probe.",
        epilog=f"Config file: ${cfgmod.ENV_VAR} (default ~/.config/powbench/config.json). {EPILOG}",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log debug output to stderr")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("calibrate", help="profile one PoW config on this host", epilog=EPILOG)
    p.add_argument("--algo", choices=["argon2i", "catena", "yescrypt"], required=True, help="PoW family")
    p.add_argument("--p", type=int, default=1, help="argon2i: lanes (default 1)")
    p.add_argument("--t", type=int, default=10, help="argon2i: passes (default 10)")
    p.add_argument("--m", type=int, default=1024, help="argon2i: memory in KiB (default 1024)")
    p.add_argument("--tag-len", type=int, default=32, help="argon2i: tag bytes (default 32)")
    p.add_argument("--garlic", type=int, default=15, help="catena: log2 of the word count (default 15)")
    p.add_argument("--lambda", dest="lam", type=int, default=1, help="catena: bit-reversal passes (default 1)")
    p.add_argument("--threads", type=int, default=1, help="yescrypt: lanes (default 1)")
    p.add_argument("--blocks", type=int, default=1024, help="yescrypt: blocks per lane (default 1024)")
    p.add_argument("--block-size", type=int, default=8192, help="yescrypt: block bytes, multiple of 64 (default 8192)")
    p.add_argument("--label", help="report label (default derived from the parameters)")
    p.add_argument("--budget-s", type=float, help="campaign wall-clock budget in seconds (default from config, 60)")
    p.add_argument("--load", default="idle", help="'idle' or 'busy:K' with K CPU load workers (default idle)")
    p.add_argument("--class", dest="platform_class", choices=[c.value for c in PlatformClass],
                   help="declared hardware class of this host")
    p.add_argument("--memory-cap-mib", type=int, help="kernel working-set cap in MiB (default 256)")
    p.add_argument("--out", required=True, help="campaign JSON file to write")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("stats", help="summarise campaign files (Chebyshev model)", epilog=EPILOG)
    p.add_argument("--in", dest="inputs", nargs="+", required=True, metavar="FILE", help="campaign files")
    p.add_argument("--balance", type=_positive_int, metavar="SIZE",
                   help="draw SIZE completed runs from every file (default: pool all)")
    p.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    p.add_argument("--save", metavar="FILE", help="also write the summary as a stats JSON file")
    p.add_argument("--out", help="write the table here instead of stdout")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("derive-gate", help="derive the (N, T) gate from stats or campaign files", epilog=EPILOG)
    p.add_argument("--in", dest="inputs", nargs="+", required=True, metavar="FILE",
                   help="one stats file, or campaign files")
    p.add_argument("--n", type=_positive_int, default=2, help="runs that must finish inside T (default 2)")
    p.add_argument("--balance", type=_positive_int, metavar="SIZE", help="balanced draw size for campaign inputs")
    p.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    p.add_argument("--out", default="gate.json", help="gate JSON file to write (default gate.json)")
    p.set_defaults(func=cmd_derive_gate)

    p = sub.add_parser("probe", help="classify this host against a gate", epilog=EPILOG)
    p.add_argument("--gate", required=True, help="gate JSON file")
    p.add_argument("--memory-cap-mib", type=int, help="kernel working-set cap in MiB (default 256)")
    p.add_argument("--simulate-run-s", type=float, metavar="SECONDS",
                   help="testing aid: scripted clock and a stub kernel taking SECONDS per run")
    p.add_argument("--out", help="write the verdict report here instead of stdout")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("report", help="stats and run-count tables for campaign files", epilog=EPILOG)
    p.add_argument("--in", dest="inputs", nargs="+", required=True, metavar="FILE", help="campaign files")
    p.add_argument("--balance", type=_positive_int, metavar="SIZE", help="balanced draw size per file")
    p.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    p.add_argument("--csv", metavar="FILE", help="also export every run as CSV")
    p.add_argument("--out", help="write the markdown here instead of stdout")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("load", help="run the CPU load generator standalone", epilog=EPILOG)
    p.add_argument("--workers", type=int, required=True, help="number of busy workers (>= 1)")
    p.add_argument("--seconds", type=float, required=True, help="how long to keep them busy")
    p.set_defaults(func=cmd_load)

    p = sub.add_parser("kat", help="run the bundled known-answer vectors", epilog=EPILOG)
    p.add_argument("--vectors", help="alternative vector file")
    p.set_defaults(func=cmd_kat)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cli_cfg = cfgmod.load_config()
        cap = getattr(args, "memory_cap_mib", None)
        cli_cfg = cli_cfg.with_overrides(memory_cap_bytes=cap * 1024 * 1024 if cap else None)
        return args.func(args, cli_cfg)
    except (PowBenchError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
