"""Trial driver: randomized scheduling, big-step accounting, termination.

Time model: one big step is one scheduling round. Within a round every
agent takes one atomic step and, independently with probability
``extra_step_prob``, one additional step (an asynchronous system puts no
lower bound on step time, so within one time unit a fast agent fits more
than one step; with all agents locked to exactly one step per round the
deterministic zigzag walks never change relative phase and minority
blocks can stall for millions of rounds). The whole step multiset is
executed in a fresh uniformly random order each round.

Every trial derives three independent substreams from its seed (spawn,
scheduling, variant randomness), so e.g. the self-stabilizing variant
sees the same spawn as a basic trial with the same seed. Two engines
share those streams: a compiled kernel (default) and a readable
reference path built on the pure step functions in ``agents``; the test
suite checks they produce identical trials.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .agents import (
    ACTIVE_INACTIVE,
    BASIC,
    NAIVE,
    SELF_STABILIZING,
    WAITING,
    Agent,
    NaiveRace,
    Population,
    Variant,
    eraser_step,
    naive_step,
    spawn_agents,
    writer_step,
)
from .strand import EMPTY, Strand

DEFAULT_EXTRA_STEP_PROB = 0.5
CHUNK_ROUNDS = 512

_VARIANT_CODE = {
    BASIC: _kernels.V_BASIC,
    WAITING: _kernels.V_WAITING,
    SELF_STABILIZING: _kernels.V_SELF_STAB,
    ACTIVE_INACTIVE: _kernels.V_ACTIVE_INACTIVE,
}


@dataclass(frozen=True)
class TrialConfig:
    """Everything one trial needs; equal configs give identical trials."""

    n: int
    population: Population
    variant: Variant
    seed: int
    max_big_steps: int | None = None  # default 100 * n^2
    record_trajectory: bool = False
    extra_step_prob: float = DEFAULT_EXTRA_STEP_PROB
    initial_strand: str | None = None  # serialized, e.g. "10V1"; None = all Empty
    target_value: int | None = None    # stop only at consensus on this mark

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"strand needs at least 2 cells, got {self.n}")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")
        if self.max_big_steps is not None and self.max_big_steps < 1:
            raise ValueError("max_big_steps must be >= 1")
        if not 0.0 <= self.extra_step_prob <= 1.0:
            raise ValueError("extra_step_prob must be in [0, 1]")
        if self.initial_strand is not None and len(self.initial_strand) != self.n:
            raise ValueError("initial_strand length must equal n")
        if self.target_value not in (None, 0, 1):
            raise ValueError("target_value must be 0, 1 or None")

    @property
    def step_cap(self) -> int:
        return self.max_big_steps if self.max_big_steps is not None else 100 * self.n * self.n


@dataclass
class TrialResult:
    """Outcome of one trial; ``decision`` is None on timeout."""

    seed: int
    decision: int | None
    big_steps: int
    final_strand: str
    trajectory: np.ndarray | None = None   # (big_steps, 4): zeros, ones, empties, collisions
    erase_counts: np.ndarray | None = None  # per big step, kept for diagnostics

    @property
    def decided(self) -> bool:
        return self.decision is not None


@dataclass
class StepMetrics:
    zeros: int
    ones: int
    empties: int
    collisions: int
    erases: int

    def as_row(self) -> tuple[int, int, int, int]:
        return (self.zeros, self.ones, self.empties, self.collisions)


class _ChunkedUniforms:
    """Serves per-round uniform rows, drawn from the generator in fixed
    (CHUNK_ROUNDS, width) blocks so fast and reference engines consume the
    stream identically."""

    def __init__(self, rng: np.random.Generator, width: int):
        self._rng = rng
        self._width = width
        self._chunk = None
        self._row = CHUNK_ROUNDS

    def next_chunk(self) -> np.ndarray:
        return self._rng.random((CHUNK_ROUNDS, self._width))

    def next_row(self) -> np.ndarray:
        if self._row >= CHUNK_ROUNDS:
            self._chunk = self.next_chunk()
            self._row = 0
        row = self._chunk[self._row]
        self._row += 1
        return row


class _RowCursor:
    """Sequential reader over one round's variant-uniform row."""

    def __init__(self, row: np.ndarray | None):
        self._row = row
        self._k = 0

    def random(self) -> float:
        u = float(self._row[self._k])
        self._k += 1
        return u


def _trial_rngs(seed: int):
    root = np.random.SeedSequence(seed)
    spawn_ss, sched_ss, variant_ss = root.spawn(3)
    return (
        np.random.default_rng(spawn_ss),
        np.random.default_rng(sched_ss),
        np.random.default_rng(variant_ss),
    )


def build_schedule(row: np.ndarray, a_count: int, extra_step_prob: float) -> list[int]:
    """The round's step order: every agent once plus Bernoulli bonus steps,
    shuffled by Fisher-Yates. Consumes row[0:a_count] for the bonus mask and
    subsequent entries for the shuffle, exactly like the compiled kernels."""
    steps = list(range(a_count))
    k = 0
    for a in range(a_count):
        if row[k] < extra_step_prob:
            steps.append(a)
        k += 1
    for i in range(len(steps) - 1, 0, -1):
        j = int(row[k] * (i + 1))
        k += 1
        steps[i], steps[j] = steps[j], steps[i]
    return steps


@dataclass
class TrialState:
    """Mutable state of an in-progress trial (reference engine)."""

    config: TrialConfig
    strand: Strand
    agents: list[Agent]
    race: NaiveRace | None
    rounds: int = 0
    decided: bool = False
    decision: int | None = None
    _sched: _ChunkedUniforms = field(default=None, repr=False)
    _var: _ChunkedUniforms = field(default=None, repr=False)


def _initial_strand(config: TrialConfig) -> Strand:
    if config.initial_strand is None:
        return Strand(config.n)
    return Strand.from_text(config.initial_strand)


def _consensus_decision(strand: Strand, target: int | None) -> int | None:
    value = strand.consensus_value()
    if value is None:
        return None
    if target is not None and value != target:
        return None
    return value


def init_trial(config: TrialConfig) -> TrialState:
    """Spawn agents and set up the reference engine's stream cursors."""
    spawn_rng, sched_rng, variant_rng = _trial_rngs(config.seed)
    agents = spawn_agents(config.population, config.n, spawn_rng)
    strand = _initial_strand(config)
    state = TrialState(
        config=config,
        strand=strand,
        agents=agents,
        race=NaiveRace() if config.variant.kind == NAIVE else None,
        _sched=_ChunkedUniforms(sched_rng, 3 * len(agents)),
        _var=_ChunkedUniforms(variant_rng, 2 * len(agents)),
    )
    dec = _consensus_decision(strand, config.target_value)
    if dec is not None:
        state.decided = True
        state.decision = dec
    return state


def big_step(state: TrialState) -> StepMetrics:
    """Run one scheduling round on the reference engine.

    Advances even a decided/absorbed state (useful for stability checks);
    ``run_trial`` is responsible for stopping at consensus.
    """
    config = state.config
    agents = state.agents
    a_count = len(agents)
    row = state._sched.next_row()
    order = build_schedule(row, a_count, config.extra_step_prob)
    variant = config.variant
    is_self_stab = variant.kind == SELF_STABILIZING
    vcur = _RowCursor(state._var.next_row() if is_self_stab else None)
    erases_before = state.strand.erase_count
    for a in order:
        agent = agents[a]
        if variant.kind == NAIVE:
            if agent.is_writer:
                agents[a] = naive_step(agent, state.strand, state.race)
        elif agent.is_writer:
            agents[a] = writer_step(agent, state.strand, variant)
        else:
            agents[a] = eraser_step(agent, state.strand, variant, vcur)
    state.rounds += 1
    dec = _consensus_decision(state.strand, config.target_value)
    if dec is not None and not state.decided:
        state.decided = True
        state.decision = dec
    zeros, ones, empties = state.strand.census()
    return StepMetrics(
        zeros=zeros,
        ones=ones,
        empties=empties,
        collisions=state.strand.count_collisions(),
        erases=state.strand.erase_count - erases_before,
    )


def _run_reference(config: TrialConfig) -> TrialResult:
    state = init_trial(config)
    cap = config.step_cap
    rows = []
    erases = []
    while not state.decided and state.rounds < cap:
        metrics = big_step(state)
        if config.record_trajectory:
            rows.append(metrics.as_row())
            erases.append(metrics.erases)
    trajectory = np.array(rows, dtype=np.int64).reshape(len(rows), 4) if config.record_trajectory else None
    erase_arr = np.array(erases, dtype=np.int64) if config.record_trajectory else None
    return TrialResult(
        seed=config.seed,
        decision=state.decision,
        big_steps=state.rounds,
        final_strand=state.strand.to_text(),
        trajectory=trajectory,
        erase_counts=erase_arr,
    )


def _run_fast(config: TrialConfig) -> TrialResult:
    spawn_rng, sched_rng, variant_rng = _trial_rngs(config.seed)
    agents = spawn_agents(config.population, config.n, spawn_rng)
    strand = _initial_strand(config)

    dec = _consensus_decision(strand, config.target_value)
    if dec is not None:
        empty_traj = np.zeros((0, 4), dtype=np.int64) if config.record_trajectory else None
        empty_er = np.zeros(0, dtype=np.int64) if config.record_trajectory else None
        return TrialResult(config.seed, dec, 0, strand.to_text(), empty_traj, empty_er)

    a_count = len(agents)
    cells = strand.cells  # int8, mutated by the kernel
    marks = np.array([a.mark for a in agents], dtype=np.int8)
    is_eraser = np.array([1 if a.is_eraser else 0 for a in agents], dtype=np.int8)
    pos = np.array([a.position for a in agents], dtype=np.int64)
    dirn = np.array([a.direction for a in agents], dtype=np.int64)
    waiting = np.zeros(a_count, dtype=np.int8)
    active = np.ones(a_count, dtype=np.int8)
    streak = np.zeros(a_count, dtype=np.int64)
    steplist = np.empty(2 * a_count, dtype=np.int64)

    zeros, ones, empties = strand.census()
    counters = np.array([zeros, ones, empties, strand.count_collisions()], dtype=np.int64)
    out = np.zeros(2, dtype=np.int64)

    variant = config.variant
    is_naive = variant.kind == NAIVE
    is_self_stab = variant.kind == SELF_STABILIZING
    target = -1 if config.target_value is None else config.target_value
    jitter = config.extra_step_prob
    sched = _ChunkedUniforms(sched_rng, 3 * a_count)
    var = _ChunkedUniforms(variant_rng, 2 * a_count) if is_self_stab else None
    dummy_var = np.zeros((CHUNK_ROUNDS, 1), dtype=np.float64)
    record = 1 if config.record_trajectory else 0
    traj_chunk = np.zeros((CHUNK_ROUNDS, 5), dtype=np.int64)
    traj_parts: list[np.ndarray] = []

    cap = config.step_cap
    done = 0
    decision = None
    while done < cap:
        rounds_now = min(CHUNK_ROUNDS, cap - done)
        sched_u = sched.next_chunk()[:rounds_now]
        var_u = var.next_chunk()[:rounds_now] if is_self_stab else dummy_var[:rounds_now]
        traj = traj_chunk[:rounds_now]
        if is_naive:
            status = _kernels.run_naive_rounds(
                cells, marks, is_eraser, pos, dirn, sched_u, steplist,
                jitter, target, counters, traj, record, out)
        else:
            status = _kernels.run_worker_rounds(
                cells, marks, is_eraser, pos, dirn, waiting, active, streak,
                sched_u, var_u, steplist, _VARIANT_CODE[variant.kind],
                jitter, variant.epsilon, variant.k1, variant.k2,
                target, counters, traj, record, out)
        ran = int(out[0])
        done += ran
        if record:
            traj_parts.append(traj[:ran].copy())
        if status == 1:
            decision = int(out[1])
            break

    # resync the Strand wrapper's tallies with the kernel-evolved cells
    final = Strand.from_text(strand.to_text())
    trajectory = None
    erase_arr = None
    if record:
        full = np.concatenate(traj_parts, axis=0) if traj_parts else np.zeros((0, 5), dtype=np.int64)
        trajectory = full[:, :4].copy()
        erase_arr = full[:, 4].copy()
    return TrialResult(
        seed=config.seed,
        decision=decision,
        big_steps=done,
        final_strand=final.to_text(),
        trajectory=trajectory,
        erase_counts=erase_arr,
    )


def run_trial(config: TrialConfig, engine: str = "fast") -> TrialResult:
    """Run one trial to consensus or the step cap.

    Deterministic given ``config.seed``; the two engines produce identical
    results ("fast" is the compiled kernel, "reference" replays the same
    streams through the pure step functions).
    """
    if engine == "fast":
        return _run_fast(config)
    if engine == "reference":
        return _run_reference(config)
    raise ValueError(f"unknown engine {engine!r}")


@dataclass
class RequirementsReport:
    decision: int
    validity_ok: bool
    writers_for_decision: int


def check_requirements(result: TrialResult, pop: Population) -> RequirementsReport:
    """Per-trial validity check: the decided value must have a writer."""
    if result.decision is None:
        raise ValueError("trial timed out; requirements apply to decided trials")
    writers = pop.w1 if result.decision == 1 else pop.w0
    return RequirementsReport(
        decision=result.decision,
        validity_ok=writers > 0,
        writers_for_decision=writers,
    )
