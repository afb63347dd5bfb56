import json

import pytest

from powbench.cli import build_parser, main
from powbench.kernels import PowConfig
from powbench.measurement import LoadCondition
from powbench.stats import StatsSummary
from powbench.storage import load_campaign, load_gate, save_campaign, save_stats

from .conftest import make_record

SUBCOMMANDS = ["calibrate", "stats", "derive-gate", "probe", "report", "load", "kat"]


@pytest.mark.parametrize("command", SUBCOMMANDS)
def test_help(command, capsys):
    with pytest.raises(SystemExit) as exc:
        main([command, "--help"])
    assert exc.value.code == 0
    assert "exit codes" in capsys.readouterr().out


def test_top_level_help(capsys):
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args(["--help"])
    assert exc.value.code == 0


def test_zero_budget_is_an_error(tmp_path, capsys):
    rc = main(["calibrate", "--algo", "argon2i", "--budget-s", "0", "--out", str(tmp_path / "c.json")])
    assert rc == 2
    assert "InvalidBudget" in capsys.readouterr().err
    assert not (tmp_path / "c.json").exists()


def test_invalid_params_exit_2(tmp_path):
    assert main(["calibrate", "--algo", "argon2i", "--t", "0", "--budget-s", "1", "--out", str(tmp_path / "c")]) == 2


def test_calibrate_busy(tmp_path):
    out = tmp_path / "c.json"
    rc = main(["calibrate", "--algo", "catena", "--garlic", "10", "--budget-s", "0.3",
               "--load", "busy:2", "--class", "low", "--out", str(out)])
    assert rc == 0
    rec = load_campaign(out)
    assert rec.load == LoadCondition.busy(2)
    assert rec.env.declared_class.value == "low"
    assert rec.completed_count >= 1


def write_campaigns(tmp_path):
    a = make_record([0.1 + 0.001 * i for i in range(400)], label="host-a")
    b = make_record([0.3 + 0.002 * i for i in range(200)], label="host-b")
    save_campaign(a, tmp_path / "a.json")
    save_campaign(b, tmp_path / "b.json")
    return [str(tmp_path / "a.json"), str(tmp_path / "b.json")]


def test_stats_balanced(tmp_path, capsys):
    files = write_campaigns(tmp_path)
    assert main(["stats", "--in", *files, "--balance", "150", "--seed", "1"]) == 0
    assert capsys.readouterr().out.startswith("300 durations from 2 campaign file(s)")


def test_stats_oversize_balance(tmp_path, capsys):
    files = write_campaigns(tmp_path)
    assert main(["stats", "--in", *files, "--balance", "250"]) == 2
    assert "InsufficientSamples" in capsys.readouterr().err


def test_stats_seed_determinism(tmp_path):
    files = write_campaigns(tmp_path)
    outs = []
    for i, seed in enumerate(["5", "5", "6"]):
        path = tmp_path / f"s{i}.json"
        assert main(["stats", "--in", *files, "--balance", "150", "--seed", seed, "--save", str(path),
                     "--out", str(tmp_path / f"t{i}.md")]) == 0
        outs.append(path.read_text())
    assert outs[0] == outs[1] != outs[2]


def test_stats_rejects_mixed_configs(tmp_path):
    save_campaign(make_record([0.1, 0.2]), tmp_path / "a.json")
    save_campaign(make_record([0.1, 0.2], config=PowConfig.catena(12)), tmp_path / "b.json")
    assert main(["stats", "--in", str(tmp_path / "a.json"), str(tmp_path / "b.json")]) == 2


def reference_stats(tmp_path):
    path = tmp_path / "stats.json"
    save_stats(StatsSummary(300, 0.20, 9.28, 0.46, 1.07, 8.1, 0.98476), PowConfig.argon2i(1, 10, 1024), path)
    return path


def test_derive_gate_from_stats(tmp_path, capsys):
    gate_path = tmp_path / "gate.json"
    assert main(["derive-gate", "--in", str(reference_stats(tmp_path)), "--out", str(gate_path)]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "T=10 N=2"
    gate = load_gate(gate_path)
    assert (gate.t_budget_s, gate.n_required) == (10.0, 2)


def test_derive_gate_from_campaigns(tmp_path, capsys):
    files = write_campaigns(tmp_path)
    assert main(["derive-gate", "--in", *files, "--n", "3", "--out", str(tmp_path / "g.json")]) == 0
    assert load_gate(tmp_path / "g.json").n_required == 3


@pytest.mark.parametrize("seconds, code, verdict", [(6, 3, "Constrained"), (0.4, 0, "BareMetalLike")])
def test_probe_simulated(tmp_path, capsys, seconds, code, verdict):
    gate_path = tmp_path / "gate.json"
    main(["derive-gate", "--in", str(reference_stats(tmp_path)), "--out", str(gate_path)])
    capsys.readouterr()
    assert main(["probe", "--gate", str(gate_path), "--simulate-run-s", str(seconds)]) == code
    assert capsys.readouterr().out.splitlines()[0] == f"verdict: {verdict}"


def test_probe_missing_gate(tmp_path):
    assert main(["probe", "--gate", str(tmp_path / "none.json")]) == 2


def test_report(tmp_path, capsys):
    files = write_campaigns(tmp_path)
    csv_path = tmp_path / "runs.csv"
    assert main(["report", "--in", *files, "--csv", str(csv_path)]) == 0
    out = capsys.readouterr().out
    assert "## argon2i" in out and "| Platform | Status | Linux |" in out
    assert "| Test CPU | idle | 600 |" in out
    assert csv_path.read_bytes().count(b"\r\n") == 601


def test_kat(capsys):
    assert main(["kat"]) == 0
    assert "failed: none" in capsys.readouterr().out


def test_kat_bad_vector(tmp_path):
    path = tmp_path / "v.txt"
    path.write_text("catena, garlic=10;lambda=1;id=bad, 00, " + "00" * 16 + ", " + "00" * 64 + "\n")
    assert main(["kat", "--vectors", str(path)]) == 2


def test_load_command(capsys):
    assert main(["load", "--workers", "1", "--seconds", "0.1"]) == 0
    assert "live workers: 0" in capsys.readouterr().out


def test_memory_cap_override(tmp_path, capsys):
    rc = main(["calibrate", "--algo", "catena", "--garlic", "20", "--memory-cap-mib", "1",
               "--budget-s", "1", "--out", str(tmp_path / "c.json")])
    assert rc == 2
    assert "MemoryCapExceeded" in capsys.readouterr().err


def test_config_file_budget(tmp_path, isolated_config):
    isolated_config.write_text(json.dumps({"default_budget_s": 0.2}))
    assert main(["calibrate", "--algo", "catena", "--garlic", "10", "--out", str(tmp_path / "c.json")]) == 0
    assert load_campaign(tmp_path / "c.json").budget_s == 0.2
