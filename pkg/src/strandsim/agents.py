"""Mobile writer/eraser agents and their per-variant step rules.

An agent carries a fixed kind and mark, a position, a travel direction,
and at most two behavior bits (a waiting flag and an active flag). The
step functions here are the readable reference semantics; the fast trial
engine inlines the same rules and is cross-checked against these in the
test suite.

Direction conventions: an agent advances one cell per step in its travel
direction and bounces at the strand ends (position N-1 moving +1 becomes
position N-2 moving -1). The cell an eraser "just passed" is therefore
always ``position - direction``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .strand import EMPTY, Strand

WRITER = 0
ERASER = 1

BASIC = "basic"
WAITING = "waiting"
SELF_STABILIZING = "self-stabilizing"
ACTIVE_INACTIVE = "active-inactive"
NAIVE = "naive"

VARIANT_NAMES = (NAIVE, BASIC, WAITING, SELF_STABILIZING, ACTIVE_INACTIVE)


@dataclass(frozen=True)
class Variant:
    """Behavior rule selector, chosen by name with optional parameters."""

    kind: str
    epsilon: float = 0.0  # self-stabilizing: unconditional-erase probability
    k1: int = 1           # active-inactive: hostile streak to deactivate
    k2: int = 1           # active-inactive: friendly streak to reactivate

    def __post_init__(self):
        if self.kind not in VARIANT_NAMES:
            raise ValueError(f"unknown variant {self.kind!r}; expected one of {VARIANT_NAMES}")
        if self.kind == SELF_STABILIZING and not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must be in (0, 1), got {self.epsilon}")
        if self.kind == ACTIVE_INACTIVE and (self.k1 < 1 or self.k2 < 1):
            raise ValueError(f"k1 and k2 must be >= 1, got k1={self.k1} k2={self.k2}")

    @classmethod
    def basic(cls) -> "Variant":
        return cls(BASIC)

    @classmethod
    def waiting(cls) -> "Variant":
        return cls(WAITING)

    @classmethod
    def self_stabilizing(cls, epsilon: float) -> "Variant":
        return cls(SELF_STABILIZING, epsilon=epsilon)

    @classmethod
    def active_inactive(cls, k1: int, k2: int) -> "Variant":
        return cls(ACTIVE_INACTIVE, k1=k1, k2=k2)

    @classmethod
    def naive(cls) -> "Variant":
        return cls(NAIVE)

    @classmethod
    def from_name(cls, name: str, *, epsilon: float | None = None,
                  k1: int | None = None, k2: int | None = None) -> "Variant":
        name = name.strip().lower()
        if name == SELF_STABILIZING:
            if epsilon is None:
                raise ValueError("self-stabilizing variant needs epsilon")
            return cls.self_stabilizing(epsilon)
        if name == ACTIVE_INACTIVE:
            if k1 is None or k2 is None:
                raise ValueError("active-inactive variant needs k1 and k2")
            return cls.active_inactive(k1, k2)
        return cls(name)


@dataclass(frozen=True)
class Population:
    """Writer counts; eraser counts are coupled (e0 = w1, e1 = w0)."""

    w0: int
    w1: int

    def __post_init__(self):
        if self.w0 < 0 or self.w1 < 0:
            raise ValueError("writer counts must be nonnegative")
        if self.w0 + self.w1 < 1:
            raise ValueError("population needs at least one writer")

    @property
    def e0(self) -> int:
        return self.w1

    @property
    def e1(self) -> int:
        return self.w0

    @property
    def total(self) -> int:
        return 2 * (self.w0 + self.w1)

    def majority_value(self) -> int | None:
        if self.w1 > self.w0:
            return 1
        if self.w0 > self.w1:
            return 0
        return None


@dataclass(frozen=True)
class Agent:
    """One mobile writer or eraser.

    ``waiting`` is used only by the waiting variant, ``active``/``streak``
    only by the active-inactive variant; every other variant leaves them
    at their defaults so the remaining behavioral state fits in two bits.
    """

    kind: int       # WRITER or ERASER
    mark: int       # the value it writes or erases
    position: int
    direction: int  # +1 or -1, local orientation only
    waiting: bool = False
    active: bool = True
    streak: int = 0

    @property
    def is_writer(self) -> bool:
        return self.kind == WRITER

    @property
    def is_eraser(self) -> bool:
        return self.kind == ERASER


@dataclass
class NaiveRace:
    """Shared state of the naive baseline: the first value written to cell 0."""

    decision: int | None = None


def writer(mark: int, position: int, direction: int) -> Agent:
    return Agent(WRITER, mark, position, direction)


def eraser(mark: int, position: int, direction: int) -> Agent:
    return Agent(ERASER, mark, position, direction)


def spawn_agents(pop: Population, n: int, rng: np.random.Generator) -> list[Agent]:
    """Place the full population uniformly at random with random directions.

    Agents are listed in a fixed order (0-writers, 1-writers, 0-erasers,
    1-erasers) so that equal seeds spawn identical populations.
    """
    if n < 2:
        raise ValueError(f"strand needs at least 2 cells, got {n}")
    kinds_marks = (
        [(WRITER, 0)] * pop.w0 + [(WRITER, 1)] * pop.w1
        + [(ERASER, 0)] * pop.e0 + [(ERASER, 1)] * pop.e1
    )
    positions = rng.integers(0, n, size=len(kinds_marks))
    directions = 2 * rng.integers(0, 2, size=len(kinds_marks)) - 1
    return [
        Agent(kind, mark, int(p), int(d))
        for (kind, mark), p, d in zip(kinds_marks, positions, directions)
    ]


def _advance(position: int, direction: int, n: int) -> tuple[int, int]:
    """One cell forward, bouncing at the ends (the previous cell is always
    position - direction afterwards)."""
    nxt = position + direction
    if 0 <= nxt < n:
        return nxt, direction
    return position - direction, -direction


def writer_step(agent: Agent, strand: Strand, variant: Variant) -> Agent:
    """One atomic writer step: write the current cell if Empty, then move.

    Mutates the strand in place and returns the updated agent. Under the
    active-inactive variant an inactive writer never writes, and the
    active flag toggles on k1/k2 streaks of hostile/friendly marks.
    """
    n = len(strand)
    p, m = agent.position, agent.mark
    if variant.kind == ACTIVE_INACTIVE:
        active, streak = agent.active, agent.streak
        if active:
            if strand.cells[p] == EMPTY:
                strand.try_write(p, m)
            observed = int(strand.cells[p])
            if observed == 1 - m:
                streak += 1
                if streak >= variant.k1:
                    active, streak = False, 0
            else:
                streak = 0
        else:
            if int(strand.cells[p]) == m:
                streak += 1
                if streak >= variant.k2:
                    active, streak = True, 0
            else:
                streak = 0
        pos, d = _advance(p, agent.direction, n)
        return replace(agent, position=pos, direction=d, active=active, streak=streak)

    if strand.cells[p] == EMPTY:
        strand.try_write(p, m)
    pos, d = _advance(p, agent.direction, n)
    return replace(agent, position=pos, direction=d)


def eraser_step(agent: Agent, strand: Strand, variant: Variant, rng) -> Agent:
    """One atomic eraser step.

    The eraser reads its current cell and the cell it just passed
    (position - direction) in one atomic action, erasing the current cell
    when it holds the eraser's mark preceded by the opposite mark:

    - basic / active-inactive: erase at the collision pattern, then move;
    - waiting: on an erase, halt at the site as a writer-eraser complex.
      While halted, the attached opposite-mark writer refills an empty
      site (in a later step than the erase, so other writers can slip in
      first and no erase+write atomicity exists), and the eraser re-erases
      refills that recreate the collision; it advances once the site is
      non-empty and the pair is no longer a collision;
    - self-stabilizing: additionally erase the current cell unconditionally
      with probability epsilon (one rng draw per step), which is what makes
      convergence from arbitrary initial strands possible.

    Mutates the strand in place and returns the updated agent; ``rng`` is
    consulted (exactly once) only by the self-stabilizing variant.
    """
    n = len(strand)
    p, d, m = agent.position, agent.direction, agent.mark

    if variant.kind == WAITING and agent.waiting:
        q = p - d
        cur = int(strand.cells[p])
        prev = int(strand.cells[q]) if 0 <= q < n else EMPTY
        if cur == m and prev == 1 - m:
            strand.try_erase(p, m)  # refill recreated the collision
            return agent
        if cur == EMPTY:
            strand.try_write(p, 1 - m)  # the attached writer's mark
            return agent
        if not (prev != EMPTY and prev != cur):
            pos, nd = _advance(p, d, n)
            return replace(agent, position=pos, direction=nd, waiting=False)
        return agent  # a collision of the other polarity; keep waiting

    erased = False
    if variant.kind == SELF_STABILIZING:
        u = rng.random()
        if u < variant.epsilon and strand.cells[p] == m:
            strand.try_erase(p, m)
            erased = True
    if not erased:
        q = p - d
        if 0 <= q < n and strand.cells[p] == m and strand.cells[q] == 1 - m:
            strand.try_erase(p, m)
            erased = True

    if variant.kind == WAITING and erased:
        return replace(agent, waiting=True)
    pos, nd = _advance(p, d, n)
    return replace(agent, position=pos, direction=nd)


def naive_step(agent: Agent, strand: Strand, race: NaiveRace) -> Agent:
    """One step of the naive baseline (writers only; erasers sit out).

    While cell 0 is unwritten, writers march toward it; the first writer
    to write cell 0 fixes the decision. Afterwards writers of the decided
    mark sweep normally while the others roam without writing.
    """
    if agent.is_eraser:
        raise ValueError("erasers do not participate in the naive variant")
    n = len(strand)
    p, m = agent.position, agent.mark
    if strand.cells[0] == EMPTY:
        if p == 0:
            strand.try_write(0, m)
            race.decision = m
            pos, d = _advance(p, agent.direction, n)
            return replace(agent, position=pos, direction=d)
        return replace(agent, position=p - 1)
    if m == race.decision and strand.cells[p] == EMPTY:
        strand.try_write(p, m)
    pos, d = _advance(p, agent.direction, n)
    return replace(agent, position=pos, direction=d)
