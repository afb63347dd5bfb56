"""Known-answer vectors.

Fixture format, one record per line (``#`` starts a comment)::

    algorithm, params, message_hex, salt_hex, tag_hex

``params`` is a ``;``-separated list of ``key=value`` pairs. Byte-valued
keys (``secret``, ``ad``) are hex. The optional ``id`` key names the vector
in reports; otherwise the id is ``<algorithm>@<line>``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..errors import PowBenchError
from . import compute_pow
from .config import Algorithm, Argon2iParams, CatenaParams, PowConfig, YescryptParams

log = logging.getLogger(__name__)

VECTOR_FILE = "kat_vectors.txt"


@dataclass(frozen=True)
class KnownAnswer:
    vector_id: str
    config: PowConfig
    message: bytes
    salt: bytes
    tag: bytes


@dataclass
class KatReport:
    passed: int = 0
    failed: list[str] = field(default_factory=list)
    no_vectors: bool = False

    @property
    def ok(self) -> bool:
        return not self.failed


def _parse_params(algorithm: Algorithm, text: str) -> tuple[dict, str | None]:
    kv = {}
    for item in filter(None, (s.strip() for s in text.split(";"))):
        key, _, value = item.partition("=")
        kv[key.strip()] = value.strip()
    vector_id = kv.pop("id", None)
    if algorithm is Algorithm.ARGON2I:
        prm = Argon2iParams(
            p=int(kv["p"]),
            t=int(kv["t"]),
            m=int(kv["m"]),
            tag_len=int(kv.get("tag_len", 32)),
            secret=bytes.fromhex(kv.get("secret", "")),
            associated_data=bytes.fromhex(kv.get("ad", "")),
        )
    elif algorithm is Algorithm.CATENA_BRG:
        prm = CatenaParams(garlic=int(kv["garlic"]), lam=int(kv.get("lambda", 1)))
    else:
        prm = YescryptParams(
            threads=int(kv["threads"]), blocks=int(kv["blocks"]), block_size=int(kv["block_size"])
        )
    return prm, vector_id


def format_params(config: PowConfig) -> str:
    prm = config.params
    if isinstance(prm, Argon2iParams):
        parts = [f"p={prm.p}", f"t={prm.t}", f"m={prm.m}", f"tag_len={prm.tag_len}"]
        if prm.secret:
            parts.append(f"secret={prm.secret.hex()}")
        if prm.associated_data:
            parts.append(f"ad={prm.associated_data.hex()}")
    elif isinstance(prm, CatenaParams):
        parts = [f"garlic={prm.garlic}", f"lambda={prm.lam}"]
    else:
        parts = [f"threads={prm.threads}", f"blocks={prm.blocks}", f"block_size={prm.block_size}"]
    return ";".join(parts)


def parse_vectors(text: str) -> list[KnownAnswer]:
    vectors = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 5:
            raise ValueError(f"line {lineno}: expected 5 fields, got {len(fields)}")
        algorithm = Algorithm(fields[0])
        prm, vector_id = _parse_params(algorithm, fields[1])
        vector_id = vector_id or f"{algorithm.value}@{lineno}"
        vectors.append(
            KnownAnswer(
                vector_id=vector_id,
                config=PowConfig(algorithm, prm, vector_id),
                message=bytes.fromhex(fields[2]),
                salt=bytes.fromhex(fields[3]),
                tag=bytes.fromhex(fields[4]),
            )
        )
    return vectors


def load_vectors(path: str | Path | None = None) -> list[KnownAnswer]:
    if path is None:
        text = resources.files("powbench.data").joinpath(VECTOR_FILE).read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return parse_vectors(text)


def run_known_answers(vectors: list[KnownAnswer] | None = None) -> KatReport:
    if vectors is None:
        vectors = load_vectors()
    report = KatReport()
    if not vectors:
        report.no_vectors = True
        log.warning("no known-answer vectors to run")
        return report
    for vec in vectors:
        try:
            out = compute_pow(vec.config, vec.message, vec.salt)
        except PowBenchError as exc:
            log.error("vector %s raised %s", vec.vector_id, exc)
            report.failed.append(vec.vector_id)
            continue
        if out.tag == vec.tag:
            report.passed += 1
        else:
            report.failed.append(vec.vector_id)
    return report
