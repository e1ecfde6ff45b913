"""Experiment orchestration: seeded Monte-Carlo batches, variant
comparisons, trajectory averaging, self-stabilization runs, and the CSV
and JSON artifacts the plotting layer consumes.

Artifact schemas (stable contracts):
  trials file      seed,decision,big_steps
  trajectory file  step,zeros,ones,empties,collisions
  comparison file  seed,basic_steps,waiting_steps

Everything is deterministic given the experiment seed base: trial j of
config k runs with seed ``seed_base + k * trials + j`` (each config gets
an independent seed range), and reruns produce byte-identical files.
"""

from __future__ import annotations

import configparser
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .agents import Population, Variant
from .bounds import (
    binomial_tail_prob_ge,
    expected_steps_upper_bound,
    majority_prob_lower_bound,
    strong_majority_lower_bound,
    update_step_probs,
)
from .scheduler import TrialConfig, TrialResult, run_trial
from .strand import Strand

HISTOGRAM_BINS = 30
KNOWN_OUTPUTS = ("histogram", "trajectory", "comparison", "bounds-table")


@dataclass(frozen=True)
class ExperimentSpec:
    """A named batch: config templates, a trial count and a seed base."""

    name: str
    configs: dict[str, TrialConfig]
    trials: int
    seed_base: int
    outputs: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.name:
            raise ValueError("experiment needs a name")
        if not self.configs:
            raise ValueError("experiment needs at least one config")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        for out in self.outputs:
            if out not in KNOWN_OUTPUTS:
                raise ValueError(f"unknown output {out!r}; expected one of {KNOWN_OUTPUTS}")


def run_trials(template: TrialConfig, trials: int, seed_base: int) -> list[TrialResult]:
    """Run ``trials`` independent trials seeded seed_base, seed_base+1, ..."""
    return [run_trial(replace(template, seed=seed_base + j)) for j in range(trials)]


@dataclass
class ConfigSummary:
    label: str
    n: int
    w0: int
    w1: int
    variant: str
    p_one: float  # w1/(w0+w1) rounded to two decimals, the competition label
    trials: int
    decided: int
    timeouts: int
    decision_freq: dict[str, float]
    mean_steps: float | None
    median_steps: float | None
    std_steps: float | None
    min_steps: int | None
    max_steps: int | None
    hist_edges: list[float] | None
    hist_counts: list[int] | None
    majority_value: int | None = None
    majority_freq: float | None = None
    majority_bound: float | None = None
    strong_majority_bound: float | None = None
    steps_bound: float | None = None
    mean_within_steps_bound: bool | None = None
    validity_violations: int = 0

    def to_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items()}


def summarize_config(label: str, config: TrialConfig, results: list[TrialResult]) -> ConfigSummary:
    pop = config.population
    trials = len(results)
    decided = [r for r in results if r.decided]
    timeouts = trials - len(decided)
    freq = {
        "0": sum(1 for r in results if r.decision == 0) / trials,
        "1": sum(1 for r in results if r.decision == 1) / trials,
        "timeout": timeouts / trials,
    }
    steps = np.array([r.big_steps for r in decided], dtype=np.int64)
    if len(steps):
        counts, edges = np.histogram(steps, bins=HISTOGRAM_BINS)
        mean_steps = float(np.mean(steps))
        stats = dict(
            mean_steps=mean_steps,
            median_steps=float(np.median(steps)),
            std_steps=float(np.std(steps, ddof=1)) if len(steps) > 1 else 0.0,
            min_steps=int(steps.min()),
            max_steps=int(steps.max()),
            hist_edges=[float(e) for e in edges],
            hist_counts=[int(c) for c in counts],
        )
    else:
        mean_steps = None
        stats = dict(mean_steps=None, median_steps=None, std_steps=None,
                     min_steps=None, max_steps=None, hist_edges=None, hist_counts=None)

    violations = sum(
        1 for r in decided
        if (pop.w1 if r.decision == 1 else pop.w0) == 0
    )

    summary = ConfigSummary(
        label=label, n=config.n, w0=pop.w0, w1=pop.w1, variant=config.variant.kind,
        p_one=round(pop.w1 / (pop.w0 + pop.w1), 2),
        trials=trials, decided=len(decided), timeouts=timeouts,
        decision_freq=freq, validity_violations=violations, **stats,
    )

    major = pop.majority_value()
    if major is not None:
        minor_count = min(pop.w0, pop.w1)
        major_count = max(pop.w0, pop.w1)
        summary.majority_value = major
        summary.majority_freq = freq[str(major)]
        if minor_count > 0:
            summary.majority_bound = majority_prob_lower_bound(minor_count, major_count, config.n)
            if major_count >= 3 * minor_count:
                summary.strong_majority_bound = strong_majority_lower_bound(config.n)
        summary.steps_bound = expected_steps_upper_bound(minor_count, major_count, config.n)
        if mean_steps is not None:
            summary.mean_within_steps_bound = mean_steps <= summary.steps_bound
    return summary


@dataclass
class ExperimentReport:
    name: str
    trials: int
    seed_base: int
    summaries: list[ConfigSummary]
    results: dict[str, list[TrialResult]] = field(repr=False, default_factory=dict)

    def summary(self, label: str) -> ConfigSummary:
        for s in self.summaries:
            if s.label == label:
                return s
        raise KeyError(label)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "trials": self.trials,
            "seed_base": self.seed_base,
            "configs": [s.to_dict() for s in self.summaries],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


@dataclass
class TrajectoryAverages:
    """Per-big-step census curves averaged across trials on a shared step
    grid; shorter trials are padded with their terminal state so the
    consensus plateau survives the averaging."""

    n: int
    trials: int
    zeros: np.ndarray
    ones: np.ndarray
    empties: np.ndarray
    collisions: np.ndarray
    big_steps: list[int]

    @property
    def steps(self) -> np.ndarray:
        return np.arange(1, len(self.zeros) + 1)

    def early_phase_end(self) -> int:
        """Index right after the early phase: the first point past the
        zeros peak where zeros fall below half the peak."""
        peak_idx = int(np.argmax(self.zeros))
        peak = self.zeros[peak_idx]
        below = np.nonzero(self.zeros[peak_idx:] < 0.5 * peak)[0]
        return peak_idx + int(below[0]) if len(below) else len(self.zeros)

    def early_phase_correlation(self) -> float:
        """Correlation between zeros and collisions over the early phase
        (collision counts start out tracking the zeros linearly)."""
        end = self.early_phase_end()
        if end < 2:
            return float("nan")
        return float(np.corrcoef(self.zeros[:end], self.collisions[:end])[0, 1])

    def collision_collapse_step(self, ratio: float = 0.1, zeros_floor: float = 0.05) -> int | None:
        """First step (1-based) past the zeros peak where collisions <
        ratio * zeros while zeros > zeros_floor * n: the coarsened regime
        with few collisions left but plenty of zeros. The sparse filling
        phase before the peak is excluded."""
        start = int(np.argmax(self.zeros))
        mask = (self.collisions[start:] < ratio * self.zeros[start:]) \
            & (self.zeros[start:] > zeros_floor * self.n)
        hits = np.nonzero(mask)[0]
        return start + int(hits[0]) + 1 if len(hits) else None


def _terminal_row(result: TrialResult) -> np.ndarray:
    strand = Strand.from_text(result.final_strand)
    zeros, ones, empties = strand.census()
    return np.array([zeros, ones, empties, strand.count_collisions()], dtype=np.int64)


def average_trajectories(n: int, results: list[TrialResult]) -> TrajectoryAverages:
    trajs = []
    for r in results:
        if r.trajectory is None:
            raise ValueError("trajectory averaging needs record_trajectory=True trials")
        t = r.trajectory
        if len(t) == 0:
            t = _terminal_row(r).reshape(1, 4)
        trajs.append(t)
    longest = max(len(t) for t in trajs)
    stacked = np.empty((len(trajs), longest, 4), dtype=np.float64)
    for k, t in enumerate(trajs):
        stacked[k, : len(t)] = t
        stacked[k, len(t):] = t[-1]
    mean = stacked.mean(axis=0)
    return TrajectoryAverages(
        n=n,
        trials=len(results),
        zeros=mean[:, 0],
        ones=mean[:, 1],
        empties=mean[:, 2],
        collisions=mean[:, 3],
        big_steps=[r.big_steps for r in results],
    )


def trajectory_experiment(config: TrialConfig, trials: int, seed_base: int) -> TrajectoryAverages:
    """Averaged zeros/collisions curves (the shape of the census-vs-step
    figure) for one config."""
    template = replace(config, record_trajectory=True)
    results = run_trials(template, trials, seed_base)
    return average_trajectories(config.n, results)


@dataclass
class ComparisonResult:
    """Paired-seed steps for two variants plus a one-sided sign test that
    the second variant converges faster."""

    variant_a: str
    variant_b: str
    seeds: list[int]
    steps_a: list[int]
    steps_b: list[int]
    timeouts_a: int
    timeouts_b: int

    @property
    def mean_a(self) -> float:
        return float(np.mean(self.steps_a))

    @property
    def mean_b(self) -> float:
        return float(np.mean(self.steps_b))

    @property
    def mean_difference(self) -> float:
        return self.mean_a - self.mean_b

    @property
    def b_faster_wins(self) -> int:
        return sum(1 for a, b in zip(self.steps_a, self.steps_b) if b < a)

    @property
    def sign_test_p(self) -> float:
        """P(Binomial(non-ties, 1/2) >= wins): small when b is reliably faster."""
        wins = self.b_faster_wins
        nonties = sum(1 for a, b in zip(self.steps_a, self.steps_b) if a != b)
        return binomial_tail_prob_ge(wins, nonties, 0.5)


def compare_variants(config_a: TrialConfig, config_b: TrialConfig,
                     trials: int, seed_base: int) -> ComparisonResult:
    """Run both configs on shared per-trial seeds (identical spawns) and
    pair their big-step counts."""
    if config_a.n != config_b.n:
        raise ValueError("compared configs must share the strand length")
    if config_a.population != config_b.population:
        raise ValueError("compared configs must share the population")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    seeds, steps_a, steps_b = [], [], []
    timeouts_a = timeouts_b = 0
    for j in range(trials):
        seed = seed_base + j
        ra = run_trial(replace(config_a, seed=seed))
        rb = run_trial(replace(config_b, seed=seed))
        seeds.append(seed)
        steps_a.append(ra.big_steps)
        steps_b.append(rb.big_steps)
        timeouts_a += 0 if ra.decided else 1
        timeouts_b += 0 if rb.decided else 1
    return ComparisonResult(
        variant_a=config_a.variant.kind, variant_b=config_b.variant.kind,
        seeds=seeds, steps_a=steps_a, steps_b=steps_b,
        timeouts_a=timeouts_a, timeouts_b=timeouts_b,
    )


@dataclass
class SelfStabReport:
    """Convergence-to-majority statistics from a fixed initial strand."""

    target: int
    trials: int
    successes: int
    timeouts: int
    mean_steps: float | None
    median_steps: float | None
    results: list[TrialResult] = field(repr=False, default_factory=list)

    @property
    def success_fraction(self) -> float:
        return self.successes / self.trials


def self_stabilization_experiment(config: TrialConfig, initial_strand: str,
                                  trials: int, seed_base: int) -> SelfStabReport:
    """Run trials from an arbitrary initial strand until consensus on the
    majority-writer value (the all-Empty start assumption removed)."""
    target = config.population.majority_value()
    if target is None:
        raise ValueError("self-stabilization experiment needs an unequal writer split")
    template = replace(config, initial_strand=initial_strand, target_value=target)
    results = run_trials(template, trials, seed_base)
    done = [r for r in results if r.decided]
    steps = np.array([r.big_steps for r in done]) if done else None
    return SelfStabReport(
        target=target,
        trials=trials,
        successes=len(done),
        timeouts=trials - len(done),
        mean_steps=float(np.mean(steps)) if steps is not None else None,
        median_steps=float(np.median(steps)) if steps is not None else None,
        results=results,
    )


# ---------------------------------------------------------------------------
# file artifacts


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def write_trials_csv(path: str | Path, results: list[TrialResult]) -> None:
    lines = ["seed,decision,big_steps"]
    for r in results:
        decision = "timeout" if r.decision is None else str(r.decision)
        lines.append(f"{r.seed},{decision},{r.big_steps}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_trajectory_csv(path: str | Path, trajectory: np.ndarray) -> None:
    """Single-trial trajectory: integer census rows, one per big step."""
    lines = ["step,zeros,ones,empties,collisions"]
    for k, row in enumerate(trajectory, start=1):
        lines.append(f"{k},{int(row[0])},{int(row[1])},{int(row[2])},{int(row[3])}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_mean_trajectory_csv(path: str | Path, avg: TrajectoryAverages) -> None:
    lines = ["step,zeros,ones,empties,collisions"]
    for k in range(len(avg.zeros)):
        lines.append(
            f"{k + 1},{_fmt(avg.zeros[k])},{_fmt(avg.ones[k])},"
            f"{_fmt(avg.empties[k])},{_fmt(avg.collisions[k])}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_comparison_csv(path: str | Path, cmp: ComparisonResult) -> None:
    lines = ["seed,basic_steps,waiting_steps"]
    for seed, a, b in zip(cmp.seeds, cmp.steps_a, cmp.steps_b):
        lines.append(f"{seed},{a},{b}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_histogram_csv(path: str | Path, summary: ConfigSummary) -> None:
    lines = ["bin_left,bin_right,count"]
    if summary.hist_edges is not None:
        for k, count in enumerate(summary.hist_counts):
            lines.append(f"{_fmt(summary.hist_edges[k])},{_fmt(summary.hist_edges[k + 1])},{count}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_bounds_csv(path: str | Path, report: ExperimentReport) -> None:
    lines = ["label,n,w0,w1,win,lose,tie,majority_bound,strong_majority_bound,steps_bound"]
    for s in report.summaries:
        probs = update_step_probs(s.w0, s.w1)
        maj = _fmt(s.majority_bound) if s.majority_bound is not None else ""
        strong = _fmt(s.strong_majority_bound) if s.strong_majority_bound is not None else ""
        steps = _fmt(s.steps_bound) if s.steps_bound is not None else ""
        lines.append(
            f"{s.label},{s.n},{s.w0},{s.w1},{_fmt(probs.win)},{_fmt(probs.lose)},"
            f"{_fmt(probs.tie)},{maj},{strong},{steps}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def run_experiment(spec: ExperimentSpec, outdir: str | Path | None = None) -> ExperimentReport:
    """Run every config of the spec and, when ``outdir`` is given, write
    its artifacts (trials tables always; histogram/trajectory/bounds/
    comparison files per ``spec.outputs``)."""
    want_traj = "trajectory" in spec.outputs
    summaries = []
    all_results: dict[str, list[TrialResult]] = {}
    averages: dict[str, TrajectoryAverages] = {}
    for k, (label, template) in enumerate(spec.configs.items()):
        if want_traj:
            template = replace(template, record_trajectory=True)
        results = run_trials(template, spec.trials, spec.seed_base + k * spec.trials)
        all_results[label] = results
        summaries.append(summarize_config(label, template, results))
        if want_traj:
            averages[label] = average_trajectories(template.n, results)
    report = ExperimentReport(
        name=spec.name, trials=spec.trials, seed_base=spec.seed_base,
        summaries=summaries, results=all_results,
    )

    if outdir is not None:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        stem = spec.name.replace(" ", "-")
        for s in report.summaries:
            write_trials_csv(outdir / f"{stem}-{s.label}-trials.csv", all_results[s.label])
            if "histogram" in spec.outputs:
                write_histogram_csv(outdir / f"{stem}-{s.label}-hist.csv", s)
            if want_traj:
                write_mean_trajectory_csv(outdir / f"{stem}-{s.label}-trajectory.csv", averages[s.label])
        if "bounds-table" in spec.outputs:
            write_bounds_csv(outdir / f"{stem}-bounds.csv", report)
        if "comparison" in spec.outputs:
            labels = list(spec.configs)
            if len(labels) < 2:
                raise ValueError("comparison output needs at least two configs")
            cmp = compare_variants(spec.configs[labels[0]], spec.configs[labels[1]],
                                   spec.trials, spec.seed_base)
            write_comparison_csv(outdir / f"{stem}-comparison.csv", cmp)
        (outdir / f"{stem}-report.json").write_text(report.to_json() + "\n")
    return report


# ---------------------------------------------------------------------------
# declarative experiment files (key = value sections)


def _build_config(section: configparser.SectionProxy) -> TrialConfig:
    variant = Variant.from_name(
        section.get("variant", "basic"),
        epsilon=section.getfloat("epsilon", fallback=None),
        k1=section.getint("k1", fallback=None),
        k2=section.getint("k2", fallback=None),
    )
    max_steps = section.getint("max_steps", fallback=None)
    jitter = section.getfloat("extra_step_prob", fallback=None)
    return TrialConfig(
        n=section.getint("n"),
        population=Population(w0=section.getint("w0"), w1=section.getint("w1")),
        variant=variant,
        seed=0,  # placeholder; the experiment assigns per-trial seeds
        max_big_steps=max_steps,
        extra_step_prob=0.5 if jitter is None else jitter,
        initial_strand=section.get("initial_strand", fallback=None),
    )


def load_experiment_spec(path: str | Path) -> ExperimentSpec:
    """Parse a declarative experiment file.

    Format: an ``[experiment]`` section (name, trials, seed_base, outputs)
    plus one ``[config LABEL]`` section per trial template (n, w0, w1,
    variant, and optional epsilon/k1/k2/max_steps/extra_step_prob).
    """
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise FileNotFoundError(f"experiment file not found: {path}")
    if "experiment" not in parser:
        raise ValueError("experiment file needs an [experiment] section")
    exp = parser["experiment"]
    outputs = tuple(
        token.strip() for token in exp.get("outputs", "").split(",") if token.strip()
    )
    configs: dict[str, TrialConfig] = {}
    for section in parser.sections():
        if section.startswith("config"):
            label = section[len("config"):].strip() or f"config{len(configs)}"
            configs[label] = _build_config(parser[section])
    return ExperimentSpec(
        name=exp.get("name", Path(path).stem),
        configs=configs,
        trials=exp.getint("trials", fallback=1),
        seed_base=exp.getint("seed_base", fallback=0),
        outputs=outputs,
    )


# ---------------------------------------------------------------------------
# the two competition presets used throughout


def high_competition_config(variant: Variant | None = None) -> TrialConfig:
    """n=1000 with a 50/40 writer split (p = 0.56)."""
    return TrialConfig(
        n=1000, population=Population(w0=40, w1=50),
        variant=variant or Variant.basic(), seed=0,
    )


def low_competition_config(variant: Variant | None = None) -> TrialConfig:
    """n=1000 with a 50/32 writer split (p = 0.60)."""
    return TrialConfig(
        n=1000, population=Population(w0=32, w1=50),
        variant=variant or Variant.basic(), seed=0,
    )
