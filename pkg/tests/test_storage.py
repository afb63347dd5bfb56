import csv
import json

import pytest
from hypothesis import HealthCheck, given, settings

from powbench.errors import EmptyInput, InvariantViolation, SchemaError
from powbench.kernels import PowConfig
from powbench.measurement import LoadCondition
from powbench.stats import GateSpec, summarize
from powbench.storage import (
    CSV_HEADER,
    campaign_from_dict,
    campaign_to_dict,
    export_csv,
    format_seconds,
    load_campaign,
    load_gate,
    parse_seconds,
    read_document,
    save_campaign,
    save_gate,
    save_stats,
    stats_from_dict,
)

from .conftest import make_record
from .strategies import records


@settings(max_examples=200, suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])
@given(records())
def test_round_trip_identity(tmp_path, rec):
    path = tmp_path / "c.json"
    save_campaign(rec, path)
    assert load_campaign(path) == rec


def test_keys_sorted_and_seconds_are_strings(tmp_path):
    path = tmp_path / "c.json"
    save_campaign(make_record([0.25, 0.5]), path)
    text = path.read_text()
    data = json.loads(text)
    assert text == json.dumps(data, sort_keys=True, indent=1, ensure_ascii=False) + "\n"
    assert data["samples"][0]["duration_s"] == "0.250000"
    assert data["budget_s"] == "1.750000"


@pytest.mark.parametrize("x, text", [(0.1, "0.100000"), (1e-9, "0.000000001"), (12.0, "12.000000"),
                                     (0.1234567891, "0.1234567891")])
def test_format_seconds(x, text):
    assert format_seconds(x) == text
    assert parse_seconds(text, "x") == x


@pytest.mark.parametrize("bad", ["1.5", "1e-3", 1.5, None, "abc"])
def test_parse_seconds_rejects(bad):
    with pytest.raises(InvariantViolation):
        parse_seconds(bad, "x")


def test_future_schema():
    data = campaign_to_dict(make_record([0.1, 0.2]))
    data["schema_version"] = 99
    with pytest.raises(SchemaError) as exc:
        campaign_from_dict(data)
    assert exc.value.found_version == 99


def mutate(fn):
    data = campaign_to_dict(make_record([0.1, 0.2]))
    fn(data)
    return data


@pytest.mark.parametrize(
    "change, field",
    [
        (lambda d: d["samples"][1].update(started_offset_s=d["budget_s"]), "samples[1].started_offset_s"),
        (lambda d: d["samples"][0].update(started_offset_s="0.200000"), "samples[1].started_offset_s"),
        (lambda d: d["samples"][0].update(cost_blocks=1), "samples[0].cost_blocks"),
        (lambda d: d["samples"][0].update(duration_s="0.000000"), "samples[0].duration_s"),
        (lambda d: d["samples"][0].update(completed="yes"), "samples[0].completed"),
        (lambda d: d.update(budget_s="0.000000"), "budget_s"),
        (lambda d: d["env"].update(captured_at="2024-05-01T12:00:00"), "env.captured_at"),
        (lambda d: d["env"].update(os_name=""), "env.os_name"),
        (lambda d: d["load"].update(mode="busy", workers=0), "load"),
        (lambda d: d["config"]["params"].update(t=0), "config.t"),
    ],
)
def test_invariants(change, field):
    with pytest.raises(InvariantViolation) as exc:
        campaign_from_dict(mutate(change))
    assert exc.value.field == field


def test_not_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{")
    with pytest.raises(InvariantViolation):
        load_campaign(path)


def test_stats_and_gate_files(tmp_path):
    cfg = PowConfig.catena(15)
    summary = summarize([0.1, 0.2, 0.3, 0.4, 0.5])
    save_stats(summary, cfg, tmp_path / "s.json")
    assert stats_from_dict(read_document(tmp_path / "s.json")) == (summary, cfg)

    gate = GateSpec(cfg, 2, 10.0)
    save_gate(gate, tmp_path / "g.json")
    assert load_gate(tmp_path / "g.json") == gate
    with pytest.raises(InvariantViolation):
        load_gate(tmp_path / "s.json")


class TestCsv:
    def test_row_count(self, tmp_path):
        recs = [make_record([0.1] * 7), make_record([0.2] * 5, load=LoadCondition.busy(2))]
        export_csv(recs, tmp_path / "out.csv")
        raw = (tmp_path / "out.csv").read_bytes()
        assert raw.count(b"\r\n") == 13
        with open(tmp_path / "out.csv", newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == CSV_HEADER
        assert len(rows) == 13
        assert rows[-1][4] == "busy:2" and rows[-1][7] == "true"

    def test_quoting(self, tmp_path):
        rec = make_record([0.1], label='argon2i, "fast"')
        export_csv([rec], tmp_path / "out.csv")
        with open(tmp_path / "out.csv", newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[1][0] == 'argon2i, "fast"'
        assert len(rows[1]) == len(CSV_HEADER)

    def test_empty(self, tmp_path):
        with pytest.raises(EmptyInput):
            export_csv([], tmp_path / "out.csv")
