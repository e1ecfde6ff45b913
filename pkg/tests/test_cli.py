"""Command-line interface: subcommands, formats, exit codes."""

import json

import pytest

from strandsim.cli import main


def test_simulate_csv(tmp_path, capsys):
    out = tmp_path / "trials.csv"
    rc = main(["simulate", "--n", "30", "--w0", "2", "--w1", "5",
               "--trials", "4", "--seed", "9", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "seed,decision,big_steps"
    assert len(lines) == 5
    assert "decided" in capsys.readouterr().out


def test_simulate_json_and_trace(tmp_path):
    out = tmp_path / "report.json"
    rc = main(["simulate", "--n", "30", "--w0", "2", "--w1", "5",
               "--trials", "3", "--seed", "4", "--trace",
               "--out", str(out), "--format", "json"])
    assert rc == 0
    payload = json.loads(out.read_text())
    assert payload["trials"] == 3
    assert len(payload["trials_table"]) == 3
    traj = out.with_suffix(".trajectory.csv")
    assert traj.exists()
    assert traj.read_text().splitlines()[0] == "step,zeros,ones,empties,collisions"


def test_simulate_deterministic_bytes(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    args = ["simulate", "--n", "30", "--w0", "2", "--w1", "5",
            "--trials", "5", "--seed", "33"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_simulate_variant_params(tmp_path):
    out = tmp_path / "ss.csv"
    rc = main(["simulate", "--n", "30", "--w0", "2", "--w1", "6",
               "--variant", "self-stabilizing", "--epsilon", "0.01",
               "--initial", "0" * 30, "--trials", "2", "--seed", "1",
               "--max-steps", "20000", "--out", str(out)])
    assert rc == 0


def test_sweep(tmp_path, capsys):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(
        "[experiment]\nname = mini\ntrials = 3\nseed_base = 5\n"
        "outputs = histogram\n\n"
        "[config only]\nn = 30\nw0 = 2\nw1 = 5\nvariant = basic\n"
    )
    outdir = tmp_path / "artifacts"
    rc = main(["sweep", "--config", str(cfg), "--outdir", str(outdir)])
    assert rc == 0
    assert (outdir / "mini-only-trials.csv").exists()
    assert (outdir / "mini-only-hist.csv").exists()
    assert (outdir / "mini-report.json").exists()
    assert "mini/only" in capsys.readouterr().out


def test_bounds_table(capsys):
    rc = main(["bounds", "--n", "100", "--w0", "10", "--w1", "30"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "majority_lower_bound" in out
    assert "strong_majority_bound" in out
    assert "expected_steps_bound" in out
    rc = main(["bounds", "--n", "100", "--w0", "10", "--w1", "30", "--format", "csv"])
    assert rc == 0
    assert capsys.readouterr().out.startswith("quantity,value")


def test_oracle_table(capsys):
    rc = main(["oracle", "--n", "10", "--w0", "10", "--w1", "30", "--format", "csv"])
    assert rc == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "i,absorb_prob,closed_form_prob,time_solve,time_closed_form"
    assert len(lines) == 13  # header + 11 states + exact decision row
    assert lines[-1].startswith("exact_decision_prob,")
    rc = main(["oracle", "--n", "10", "--w0", "10", "--w1", "30", "--start", "5"])
    assert rc == 0


def test_compare(tmp_path, capsys):
    out = tmp_path / "cmp.csv"
    rc = main(["compare", "--n", "40", "--w0", "3", "--w1", "6",
               "--trials", "6", "--seed", "2", "--out", str(out)])
    assert rc == 0
    assert out.read_text().splitlines()[0] == "seed,basic_steps,waiting_steps"
    assert "sign test" in capsys.readouterr().out


def test_exit_code_bad_arguments(capsys):
    with pytest.raises(SystemExit) as info:
        main(["simulate", "--n", "30"])  # missing required flags
    assert info.value.code == 1


def test_exit_code_config_error(capsys):
    rc = main(["oracle", "--n", "10", "--w0", "5", "--w1", "5"])
    assert rc == 1
    rc = main(["simulate", "--n", "1", "--w0", "1", "--w1", "1", "--out", "x.csv"])
    assert rc == 1


def test_exit_code_io_error(tmp_path, capsys):
    missing_dir = tmp_path / "absent" / "trials.csv"
    rc = main(["simulate", "--n", "30", "--w0", "2", "--w1", "5",
               "--trials", "1", "--seed", "0", "--out", str(missing_dir)])
    assert rc == 2
