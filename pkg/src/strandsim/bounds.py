"""Closed-form results: ruin probabilities, expected play counts, the
Chernoff tail bound, update-step probabilities, the majority-probability
lower bound and the expected-runtime upper bound.

Everything here is a pure function of its inputs. The companion
``chain`` module computes the same absorption quantities by linear solve
with no closed forms; the test suite holds the two against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_TIE_EPS = 1e-9  # below this |1 - q/p|, use the balanced-game limits


@dataclass(frozen=True)
class GamblerParams:
    """Per-play win/lose/tie probabilities (p + q + r = 1, 0 < p, q < 1)."""

    p: float
    q: float
    r: float = 0.0

    def __post_init__(self):
        if not (0.0 < self.p < 1.0 and 0.0 < self.q < 1.0):
            raise ValueError(f"p and q must be in (0, 1), got p={self.p} q={self.q}")
        if not 0.0 <= self.r < 1.0:
            raise ValueError(f"r must be in [0, 1), got {self.r}")
        if abs(self.p + self.q + self.r - 1.0) > 1e-12:
            raise ValueError(f"p + q + r must equal 1, got {self.p + self.q + self.r}")

    @property
    def is_fair(self) -> bool:
        return abs(1.0 - self.q / self.p) < _TIE_EPS


def _expm1_ratio(i: float, n: float, log_ratio: float) -> float:
    """(1 - rho^i) / (1 - rho^n) for rho = exp(log_ratio), stable for
    rho above and below 1 and for exponents far beyond float range."""
    if n * log_ratio > 700.0:
        # rho^n overflows; rescale by rho^(i-n) <= 1
        return math.exp((i - n) * log_ratio) * math.expm1(-i * log_ratio) / math.expm1(-n * log_ratio)
    return math.expm1(i * log_ratio) / math.expm1(n * log_ratio)


def _check_start(i: int, n: int) -> None:
    if n < 1:
        raise ValueError(f"target must be >= 1, got {n}")
    if not 0 <= i <= n:
        raise ValueError(f"start {i} outside [0, {n}]")


def gambler_ruin_prob(i: int, n: int, gp: GamblerParams) -> float:
    """Probability of reaching n before 0 from i units.

    f_i = (1 - (q/p)^i) / (1 - (q/p)^n); ties (r > 0) do not affect it.
    For p = q the i/n limit applies.
    """
    _check_start(i, n)
    if i == 0:
        return 0.0
    if i == n:
        return 1.0
    if gp.is_fair:
        return i / n
    return _expm1_ratio(i, n, math.log(gp.q) - math.log(gp.p))


def gambler_expected_time(i: int, n: int, gp: GamblerParams) -> float:
    """Expected number of plays before absorption, per the closed form

        E_i = ((n / (p - q)) f_i - i / (p - q)) * (1 / (p + q)).

    Note the trailing 1/(p+q) factor: with ties possible this value is
    smaller than the linear-system absorption time by exactly that factor
    (see ``expected_time_views``, which reports both). For p = q the
    formula's limit is i(n-i)/(p+q)^2, which reduces to i(n-i) when r = 0.
    """
    _check_start(i, n)
    if i == 0 or i == n:
        return 0.0
    s = gp.p + gp.q
    if gp.is_fair:
        return i * (n - i) / (s * s)
    f = gambler_ruin_prob(i, n, gp)
    return ((n * f - i) / (gp.p - gp.q)) * (1.0 / s)


@dataclass(frozen=True)
class ExpectedTimeComparison:
    """Two derivations of the expected play count, reported side by side.

    ``closed_form`` carries a trailing 1/(p+q) factor; ``chain_solve`` is
    the linear-system answer (n f_i - i)/(p - q), the one the numeric
    oracle reproduces. They agree exactly only when ties are impossible
    (r = 0); ``consistent`` flags that case.
    """

    closed_form: float
    chain_solve: float
    tie_factor: float
    consistent: bool


def expected_time_views(i: int, n: int, gp: GamblerParams) -> ExpectedTimeComparison:
    _check_start(i, n)
    closed = gambler_expected_time(i, n, gp)
    s = gp.p + gp.q
    if i == 0 or i == n:
        solve = 0.0
    elif gp.is_fair:
        solve = i * (n - i) / s
    else:
        f = gambler_ruin_prob(i, n, gp)
        solve = (n * f - i) / (gp.p - gp.q)
    return ExpectedTimeComparison(
        closed_form=closed,
        chain_solve=solve,
        tie_factor=1.0 / s,
        consistent=math.isclose(closed, solve, rel_tol=1e-9, abs_tol=1e-12),
    )


def chernoff_upper(mu: float, delta: float) -> float:
    """Tail bound Pr(X >= (1 + delta) mu) <= exp(-delta^2 mu / (2 + delta))
    for a sum of independent 0/1 variables with mean mu."""
    if mu <= 0.0:
        raise ValueError(f"mu must be positive, got {mu}")
    if delta <= 0.0:
        raise ValueError(f"delta must be positive, got {delta}")
    return math.exp(-(delta * delta) * mu / (2.0 + delta))


@dataclass(frozen=True)
class UpdateStepProbs:
    """Win/lose/tie probabilities of one collision update (erase, rewrite).

    win = (w1/(w0+w1))^2 raises the count of ones by one, lose lowers it,
    tie leaves it unchanged.
    """

    win: float
    lose: float
    tie: float

    def as_gambler(self) -> GamblerParams:
        return GamblerParams(p=self.win, q=self.lose, r=self.tie)


def update_step_probs(w0: int, w1: int) -> UpdateStepProbs:
    if w0 < 0 or w1 < 0 or w0 + w1 < 1:
        raise ValueError(f"need w0, w1 >= 0 with at least one writer, got {w0}, {w1}")
    total = w0 + w1
    win = (w1 / total) ** 2
    lose = (w0 / total) ** 2
    return UpdateStepProbs(win=win, lose=lose, tie=1.0 - win - lose)


def decision_prob_closed_form(i: int, n: int, w0: int, w1: int) -> float:
    """Probability the final agreed value is 1 when i of the n first
    writes were ones: (1 - (w0/w1)^(2i)) / (1 - (w0/w1)^(2n)).

    This is the ruin probability under the update-step win/lose odds;
    requires w0 != w1.
    """
    _check_start(i, n)
    if w0 == w1:
        raise ValueError("closed form needs an unequal writer split (w0 != w1)")
    if w0 == 0:
        return 1.0 if i > 0 else 0.0
    if w1 == 0:
        return 0.0 if i < n else 1.0
    if i == 0:
        return 0.0
    if i == n:
        return 1.0
    ratio_sq = (w0 * w0) / (w1 * w1)
    return _expm1_ratio(i, n, math.log(ratio_sq))


def majority_prob_lower_bound(w0: int, w1: int, n: int) -> float:
    """Lower bound on Pr(final value is 1) when w1 > w0 > 0:

        (1 - (w0/w1)^(4 w0 n / (w0+w1))) * (1 - exp(-w0 n / (3 (w0+w1))))

    The first factor bounds the walk conditioned on starting with at
    least twice the expected zeros worth of ones; the second (Chernoff)
    bounds the probability of such a start.
    """
    if not w1 > w0 > 0:
        raise ValueError(f"bound needs w1 > w0 > 0, got w0={w0} w1={w1}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    exponent = 4.0 * w0 * n / (w0 + w1)
    walk_term = -math.expm1(exponent * math.log(w0 / w1))
    start_term = -math.expm1(-w0 * n / (3.0 * (w0 + w1)))
    return walk_term * start_term


def strong_majority_lower_bound(n: int) -> float:
    """The ratio-3 simplification (1 - (1/3)^n) (1 - exp(-n/12)); equals
    ``majority_prob_lower_bound`` whenever w1/w0 is exactly 3."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return -math.expm1(n * math.log(1.0 / 3.0)) * -math.expm1(-n / 12.0)


def expected_steps_upper_bound(w0: int, w1: int, n: int) -> float:
    """Upper bound on the expected big steps to agreement for w1 > w0:

        E[T] <= 2 (w0+w1)^4 n^2 / (w1^4 - w0^4),

    which is 6.4 n^2 at ratio w1/w0 = 3 and 2 n^2 at w0 = 0.
    """
    if not w1 > w0 >= 0:
        raise ValueError(f"bound needs w1 > w0 >= 0, got w0={w0} w1={w1}")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    return 2.0 * (w0 + w1) ** 4 * n * n / (w1**4 - w0**4)


def update_steps_upper_bound(n: int, w0: int, w1: int, i: int | None = None) -> float:
    """Upper bound on expected update steps from i initial ones:
    (w0+w1)^4 (n-i) / (w1^4 - w0^4). With i omitted, the start-free worst
    case (i = 1) is returned."""
    if not w1 > w0 >= 0:
        raise ValueError(f"bound needs w1 > w0 >= 0, got w0={w0} w1={w1}")
    if i is None:
        i = 1
    _check_start(i, n)
    return (w0 + w1) ** 4 * (n - i) / (w1**4 - w0**4)


@dataclass(frozen=True)
class InitialWriteModel:
    """First-write statistics: each location's first value is 1 with
    probability w1/(w0+w1), independently, so the count of initial ones
    is Binomial(n, p_one)."""

    n: int
    w0: int
    w1: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.w0 < 0 or self.w1 < 0 or self.w0 + self.w1 < 1:
            raise ValueError("need at least one writer")

    @property
    def p_one(self) -> float:
        return self.w1 / (self.w0 + self.w1)

    @property
    def expected_zeros(self) -> float:
        return self.n * self.w0 / (self.w0 + self.w1)

    @property
    def expected_ones(self) -> float:
        return self.n * self.w1 / (self.w0 + self.w1)

    def log_pmf(self, i: int) -> float:
        """log Pr(initial ones = i), safe for n in the thousands."""
        if not 0 <= i <= self.n:
            raise ValueError(f"count {i} outside [0, {self.n}]")
        p = self.p_one
        if p == 0.0:
            return 0.0 if i == 0 else -math.inf
        if p == 1.0:
            return 0.0 if i == self.n else -math.inf
        return (
            math.lgamma(self.n + 1) - math.lgamma(i + 1) - math.lgamma(self.n - i + 1)
            + i * math.log(p) + (self.n - i) * math.log1p(-p)
        )

    def pmf(self, i: int) -> float:
        lp = self.log_pmf(i)
        return 0.0 if lp == -math.inf else math.exp(lp)


def binomial_tail_prob_ge(k: int, n: int, p: float) -> float:
    """Exact Pr(Binomial(n, p) >= k), accumulated in log space."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    if k <= 0:
        return 1.0
    if k > n:
        return 0.0
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0
    log_n1 = math.lgamma(n + 1)
    log_p, log_1p = math.log(p), math.log1p(-p)
    total = 0.0
    for i in range(k, n + 1):
        lp = log_n1 - math.lgamma(i + 1) - math.lgamma(n - i + 1) + i * log_p + (n - i) * log_1p
        total += math.exp(lp)
    return min(total, 1.0)
