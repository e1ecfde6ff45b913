"""Figure scripts against the golden simulator artifacts, including the
acceptance check: annotated means match the CSV columns within 0.5%."""

from pathlib import Path

import numpy as np
import pytest

from consensus_figures import FigureSpec, SchemaError, render
from consensus_figures.comparison import main as comparison_main
from consensus_figures.histogram import main as histogram_main
from consensus_figures.trajectory import main as trajectory_main

DATA = Path(__file__).parent / "data"
GOLDEN_TRIALS = DATA / "golden_trials.csv"
GOLDEN_TRAJECTORY = DATA / "golden_trajectory.csv"
GOLDEN_COMPARISON = DATA / "golden_comparison.csv"


def csv_column(path: Path, name: str) -> np.ndarray:
    lines = path.read_text().splitlines()
    idx = lines[0].split(",").index(name)
    return np.array([float(line.split(",")[idx]) for line in lines[1:]])


def test_acceptance_c14_golden_renders(tmp_path):
    """Histogram/trajectory/comparison images render from the golden CSVs
    and every annotated mean matches its recomputed column mean."""
    hist_out = tmp_path / "hist.png"
    stats = render(FigureSpec("histogram", GOLDEN_TRIALS, hist_out, title="steps"))
    assert hist_out.exists() and hist_out.stat().st_size > 0
    expected_mu = csv_column(GOLDEN_TRIALS, "big_steps").mean()
    assert abs(stats.mu - expected_mu) <= 0.005 * expected_mu
    assert f"{stats.mu:.1f}" in stats.mu_label

    traj_out = tmp_path / "traj.png"
    tstats = render(FigureSpec("trajectory", GOLDEN_TRAJECTORY, traj_out))
    assert traj_out.exists() and traj_out.stat().st_size > 0
    assert tstats.rows == len(csv_column(GOLDEN_TRAJECTORY, "step"))

    cmp_out = tmp_path / "cmp.png"
    cstats = render(FigureSpec("comparison", GOLDEN_COMPARISON, cmp_out))
    assert cmp_out.exists() and cmp_out.stat().st_size > 0
    mu_basic = csv_column(GOLDEN_COMPARISON, "basic_steps").mean()
    mu_waiting = csv_column(GOLDEN_COMPARISON, "waiting_steps").mean()
    assert abs(cstats.mu_basic - mu_basic) <= 0.005 * mu_basic
    assert abs(cstats.mu_waiting - mu_waiting) <= 0.005 * mu_waiting
    print(f"ACCEPTANCE 14 figure scripts: PASS (mu {stats.mu:.1f} vs column {expected_mu:.1f})")


def test_rendering_twice_gives_identical_stats(tmp_path):
    a = render(FigureSpec("histogram", GOLDEN_TRIALS, tmp_path / "a.png"))
    b = render(FigureSpec("histogram", GOLDEN_TRIALS, tmp_path / "b.png"))
    assert a == b


def test_histogram_uses_decided_trials_only(tmp_path):
    mixed = tmp_path / "mixed.csv"
    mixed.write_text(
        "seed,decision,big_steps\n1,1,10\n2,timeout,500\n3,0,30\n")
    stats = render(FigureSpec("histogram", mixed, tmp_path / "m.png"))
    assert stats.mu == pytest.approx(20.0)
    assert stats.rows == 3


def test_empty_csv_is_rejected_without_output(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("seed,decision,big_steps\n")
    out = tmp_path / "never.png"
    with pytest.raises(SchemaError):
        render(FigureSpec("histogram", empty, out))
    assert not out.exists()
    headerless = tmp_path / "zero.csv"
    headerless.write_text("")
    with pytest.raises(SchemaError):
        render(FigureSpec("histogram", headerless, out))
    assert not out.exists()


def test_schema_mismatch_names_offending_column(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("seed,verdict,big_steps\n1,1,10\n")
    with pytest.raises(SchemaError, match="'verdict'"):
        render(FigureSpec("histogram", bad, tmp_path / "x.png"))
    short = tmp_path / "short.csv"
    short.write_text("step,zeros,ones\n1,2,3\n")
    with pytest.raises(SchemaError, match="'empties'"):
        render(FigureSpec("trajectory", short, tmp_path / "y.png"))


def test_unknown_kind_rejected(tmp_path):
    with pytest.raises(ValueError):
        FigureSpec("heatmap", GOLDEN_TRIALS, tmp_path / "z.png")


def test_scripts_end_to_end(tmp_path, capsys):
    rc = histogram_main(["--in", str(GOLDEN_TRIALS), "--out", str(tmp_path / "h.png"),
                         "--title", "convergence"])
    assert rc == 0
    assert "mu = " in capsys.readouterr().out
    assert (tmp_path / "h.png").exists()

    rc = trajectory_main(["--in", str(GOLDEN_TRAJECTORY), "--out", str(tmp_path / "t.png")])
    assert rc == 0
    assert (tmp_path / "t.png").exists()

    rc = comparison_main(["--in", str(GOLDEN_COMPARISON), "--out", str(tmp_path / "c.png")])
    assert rc == 0
    assert (tmp_path / "c.png").exists()


def test_script_reports_schema_error(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("sid,decision,big_steps\n1,1,10\n")
    rc = histogram_main(["--in", str(bad), "--out", str(tmp_path / "no.png")])
    assert rc == 1
    assert "'sid'" in capsys.readouterr().err
    assert not (tmp_path / "no.png").exists()
