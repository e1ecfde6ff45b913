"""Numeric oracle for the update-step process: a birth-death chain on
0..n with absorbing ends, solved directly as tridiagonal linear systems.

No closed forms appear here on purpose. The ``bounds`` module derives
the same absorption probabilities and expected times analytically and
the test suite checks agreement, so each side guards the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import InitialWriteModel, update_step_probs

MAX_MIXTURE_N = 2000
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class BirthDeathChain:
    """States 0..n, absorbing at both ends; interior moves up/down/stay."""

    n: int
    up: float
    down: float
    stay: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"chain needs n >= 1, got {self.n}")
        if self.up <= 0.0 or self.down <= 0.0:
            raise ValueError(
                "degenerate chain (up or down is 0): absorption is forced to the "
                "open side, no solve needed"
            )
        if self.stay < 0.0:
            raise ValueError(f"stay must be >= 0, got {self.stay}")
        if abs(self.up + self.down + self.stay - 1.0) > 1e-12:
            raise ValueError(f"up + down + stay must equal 1, got {self.up + self.down + self.stay}")

    @classmethod
    def from_populations(cls, w0: int, w1: int, n: int) -> "BirthDeathChain":
        probs = update_step_probs(w0, w1)
        return cls(n=n, up=probs.win, down=probs.lose, stay=probs.tie)


def _solve_tridiagonal(sub: np.ndarray, diag: np.ndarray, sup: np.ndarray,
                       rhs: np.ndarray) -> np.ndarray:
    """Thomas elimination; sub and sup hold the m-1 off-diagonal entries."""
    m = len(diag)
    if m == 1:
        return rhs / diag
    cp = np.empty(m - 1)
    dp = np.empty(m)
    cp[0] = sup[0] / diag[0]
    dp[0] = rhs[0] / diag[0]
    for i in range(1, m):
        denom = diag[i] - sub[i - 1] * cp[i - 1]
        if i < m - 1:
            cp[i] = sup[i] / denom
        dp[i] = (rhs[i] - sub[i - 1] * dp[i - 1]) / denom
    x = np.empty(m)
    x[-1] = dp[-1]
    for i in range(m - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x


def _interior_solve(chain: BirthDeathChain, rhs: np.ndarray,
                    right_boundary: float) -> np.ndarray:
    """Solve (up+down) x_i - up x_{i+1} - down x_{i-1} = rhs_i for the
    interior states, with x_0 = 0 and x_n = right_boundary, and verify
    the residual."""
    m = chain.n - 1
    if m == 0:
        return np.zeros(0)
    diag = np.full(m, chain.up + chain.down)
    sub = np.full(m - 1, -chain.down)
    sup = np.full(m - 1, -chain.up)
    b = rhs.copy()
    b[-1] += chain.up * right_boundary
    x = _solve_tridiagonal(sub, diag, sup, b)

    residual = diag * x - b
    if m > 1:
        residual[1:] += sub * x[:-1]
        residual[:-1] += sup * x[1:]
    worst = float(np.max(np.abs(residual)))
    if worst > RESIDUAL_TOL:
        raise ArithmeticError(f"tridiagonal solve residual {worst:.3e} exceeds {RESIDUAL_TOL}")
    return x


def absorption_probs(chain: BirthDeathChain) -> np.ndarray:
    """h_i = Pr(absorb at n | start i) for i = 0..n, by linear solve."""
    h = np.empty(chain.n + 1)
    h[0] = 0.0
    h[-1] = 1.0
    h[1:-1] = _interior_solve(chain, np.zeros(chain.n - 1), right_boundary=1.0)
    return h


def absorption_prob(chain: BirthDeathChain, i: int) -> float:
    if not 0 <= i <= chain.n:
        raise ValueError(f"state {i} outside [0, {chain.n}]")
    return float(absorption_probs(chain)[i])


def absorption_times(chain: BirthDeathChain) -> np.ndarray:
    """t_i = expected steps to absorption (ties included) for i = 0..n,
    from t_i = 1 + up t_{i+1} + down t_{i-1} + stay t_i."""
    t = np.empty(chain.n + 1)
    t[0] = 0.0
    t[-1] = 0.0
    t[1:-1] = _interior_solve(chain, np.ones(chain.n - 1), right_boundary=0.0)
    return t


def absorption_time(chain: BirthDeathChain, i: int) -> float:
    if not 0 <= i <= chain.n:
        raise ValueError(f"state {i} outside [0, {chain.n}]")
    return float(absorption_times(chain)[i])


def exact_decision_prob(w0: int, w1: int, n: int) -> float:
    """Exact probability of deciding 1 in the abstracted model: the
    absorption probability mixed over the binomial first-write counts."""
    if w0 == w1:
        raise ValueError("exact decision probability needs w0 != w1")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > MAX_MIXTURE_N:
        raise ValueError(f"n = {n} exceeds the supported mixture range ({MAX_MIXTURE_N})")
    if w0 == 0:
        return 1.0
    if w1 == 0:
        return 0.0
    model = InitialWriteModel(n, w0, w1)
    h = absorption_probs(BirthDeathChain.from_populations(w0, w1, n))
    weights = np.array([math.exp(model.log_pmf(i)) for i in range(n + 1)])
    # the dot product can creep past 1 by accumulated rounding
    return float(min(1.0, max(0.0, np.dot(weights, h))))


@dataclass(frozen=True)
class ChainSimStats:
    """Monte-Carlo cross-check of the solves."""

    trials: int
    absorb_high_freq: float
    absorb_high_se: float
    mean_steps: float
    steps_se: float


def simulate_chain(chain: BirthDeathChain, i: int, seed: int, trials: int) -> ChainSimStats:
    """Random walks until absorption; frequencies and means with their
    standard errors, for comparison against the linear solves."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if not 0 <= i <= chain.n:
        raise ValueError(f"state {i} outside [0, {chain.n}]")
    rng = np.random.default_rng(seed)
    up, down, n = chain.up, chain.down, chain.n
    hits = 0
    steps = np.empty(trials)
    buf = rng.random(4096)
    k = 0
    for t in range(trials):
        x = i
        count = 0
        while 0 < x < n:
            if k == len(buf):
                buf = rng.random(4096)
                k = 0
            u = buf[k]
            k += 1
            if u < up:
                x += 1
            elif u < up + down:
                x -= 1
            count += 1
        if x == n:
            hits += 1
        steps[t] = count
    freq = hits / trials
    freq_se = math.sqrt(freq * (1.0 - freq) / trials)
    mean_steps = float(np.mean(steps))
    steps_se = float(np.std(steps, ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return ChainSimStats(trials, freq, freq_se, mean_steps, steps_se)
