"""Closed forms: ruin probability, expected plays, Chernoff, update-step
probabilities, majority and runtime bounds."""

import math

import numpy as np
import pytest

from strandsim.bounds import (
    GamblerParams,
    InitialWriteModel,
    binomial_tail_prob_ge,
    chernoff_upper,
    decision_prob_closed_form,
    expected_steps_upper_bound,
    expected_time_views,
    gambler_expected_time,
    gambler_ruin_prob,
    majority_prob_lower_bound,
    strong_majority_lower_bound,
    update_step_probs,
    update_steps_upper_bound,
)

FAIR = GamblerParams(p=0.5, q=0.5, r=0.0)


def test_params_validation():
    with pytest.raises(ValueError):
        GamblerParams(p=0.0, q=0.5, r=0.5)
    with pytest.raises(ValueError):
        GamblerParams(p=0.5, q=0.5, r=0.1)  # does not sum to 1
    with pytest.raises(ValueError):
        GamblerParams(p=0.3, q=0.3, r=-0.1)


def test_ruin_prob_boundaries():
    gp = GamblerParams(p=0.6, q=0.3, r=0.1)
    assert gambler_ruin_prob(0, 10, gp) == 0.0
    assert gambler_ruin_prob(10, 10, gp) == 1.0


def test_ruin_prob_fair_special_case():
    assert gambler_ruin_prob(3, 10, FAIR) == 0.3
    for i in range(11):
        assert gambler_ruin_prob(i, 10, FAIR) == i / 10


def test_ruin_prob_hand_value():
    # q/p = 1/9: f_1 = (1 - 1/9)/(1 - 1/81) = 0.9
    gp = GamblerParams(p=0.9, q=0.1, r=0.0)
    assert gambler_ruin_prob(1, 2, gp) == pytest.approx(0.9, abs=1e-15)


def test_ruin_prob_ties_do_not_matter():
    tied = GamblerParams(p=0.45, q=0.05, r=0.5)      # q/p = 1/9
    untied = GamblerParams(p=0.9, q=0.1, r=0.0)
    for i in range(0, 13):
        assert gambler_ruin_prob(i, 12, tied) == pytest.approx(
            gambler_ruin_prob(i, 12, untied), rel=1e-12)


def test_ruin_prob_extreme_exponents_stable():
    gp = GamblerParams(p=0.2, q=0.8, r=0.0)  # q/p = 4: (q/p)^1000 overflows naive math
    f = gambler_ruin_prob(998, 1000, gp)
    assert 0.0 < f < 1.0
    assert f == pytest.approx(4.0**-2, rel=1e-9)  # ratio form: ~ (q/p)^(i-n)
    tiny = gambler_ruin_prob(2, 1000, gp)
    assert 0.0 < tiny < 1e-500 or tiny == 0.0  # underflow to 0 is acceptable here


def test_expected_time_boundaries_and_fair_case():
    gp = GamblerParams(p=0.6, q=0.3, r=0.1)
    assert gambler_expected_time(0, 10, gp) == 0.0
    assert gambler_expected_time(10, 10, gp) == 0.0
    assert gambler_expected_time(3, 10, FAIR) == 21.0
    for i in range(11):
        assert gambler_expected_time(i, 10, FAIR) == i * (10 - i)


def test_expected_time_asymptotic_drift_form():
    # r = 0, p > 1/2, large i and n: E_i ~ (n - i)/(2p - 1)
    gp = GamblerParams(p=0.7, q=0.3, r=0.0)
    n = 40_000
    i = 20_000
    expected = (n - i) / (2 * gp.p - 1)
    assert gambler_expected_time(i, n, gp) == pytest.approx(expected, rel=1e-3)


def test_expected_time_views_flag_tie_factor():
    untied = GamblerParams(p=0.6, q=0.4, r=0.0)
    v = expected_time_views(5, 20, untied)
    assert v.consistent
    assert v.closed_form == pytest.approx(v.chain_solve, rel=1e-12)

    tied = GamblerParams(p=0.3, q=0.2, r=0.5)
    v = expected_time_views(5, 20, tied)
    assert not v.consistent
    assert v.closed_form == pytest.approx(v.chain_solve * v.tie_factor, rel=1e-12)
    assert v.tie_factor == pytest.approx(2.0)


def test_chernoff_values_and_shape():
    assert chernoff_upper(3.0, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-15)
    assert chernoff_upper(10.0, 1e-9) == pytest.approx(1.0, abs=1e-6)
    mus = np.linspace(0.5, 50, 60)
    values = [chernoff_upper(m, 0.7) for m in mus]
    assert all(a > b for a, b in zip(values, values[1:]))  # decreasing in mu
    with pytest.raises(ValueError):
        chernoff_upper(0.0, 1.0)
    with pytest.raises(ValueError):
        chernoff_upper(1.0, 0.0)


def test_update_step_probs_hand_values():
    probs = update_step_probs(40, 50)
    assert probs.win == pytest.approx(0.308641975308642, rel=1e-12)
    assert probs.lose == pytest.approx(0.197530864197531, rel=1e-12)
    assert probs.tie == pytest.approx(0.493827160493827, rel=1e-12)
    assert update_step_probs(0, 7) == update_step_probs(0, 1)
    degenerate = update_step_probs(0, 7)
    assert (degenerate.win, degenerate.lose, degenerate.tie) == (1.0, 0.0, 0.0)
    sym = update_step_probs(6, 6)
    assert (sym.win, sym.lose, sym.tie) == (0.25, 0.25, 0.5)
    with pytest.raises(ValueError):
        update_step_probs(0, 0)


def test_decision_prob_closed_form_values():
    assert decision_prob_closed_form(2, 2, 1, 3) == 1.0
    assert decision_prob_closed_form(0, 2, 1, 3) == 0.0
    # (w0/w1)^2 = 1/9: (1 - 1/9)/(1 - 1/81) = 0.9
    assert decision_prob_closed_form(1, 2, 1, 3) == pytest.approx(0.9, rel=1e-12)
    with pytest.raises(ValueError):
        decision_prob_closed_form(1, 2, 3, 3)


def test_decision_prob_matches_gambler_form():
    """The closed form is the ruin probability under update-step odds."""
    for (w0, w1) in [(1, 3), (10, 30), (32, 50), (40, 50), (50, 40)]:
        probs = update_step_probs(w0, w1)
        gp = probs.as_gambler()
        for n in (2, 7, 25):
            for i in range(n + 1):
                assert decision_prob_closed_form(i, n, w0, w1) == pytest.approx(
                    gambler_ruin_prob(i, n, gp), abs=1e-12)


def test_decision_prob_monotone():
    # near-critical odds keep the values resolvable away from 1.0
    values = [decision_prob_closed_form(i, 30, 40, 50) for i in range(31)]
    assert all(a < b for a, b in zip(values, values[1:]))
    by_ratio = [decision_prob_closed_form(10, 30, w0, 60) for w0 in (58, 55, 50, 45, 40)]
    assert all(a < b for a, b in zip(by_ratio, by_ratio[1:]))


def test_majority_bound_hand_value():
    # ratio 3, n = 12: (1 - (1/3)^12)(1 - e^-1)
    expected = (1 - (1 / 3) ** 12) * (1 - math.exp(-1))
    assert majority_prob_lower_bound(1, 3, 12) == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(0.6321, abs=1e-4)


def test_majority_bound_properties():
    values = [majority_prob_lower_bound(10, 30, n) for n in (10, 50, 100, 400)]
    assert all(0.0 < v < 1.0 for v in values)  # below 1 until float saturation
    assert all(a < b for a, b in zip(values, values[1:]))
    assert majority_prob_lower_bound(10, 30, 2000) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        majority_prob_lower_bound(30, 10, 50)
    with pytest.raises(ValueError):
        majority_prob_lower_bound(0, 10, 50)


def test_strong_majority_bound_matches_general_form_at_ratio_three():
    for (w0, w1) in [(1, 3), (10, 30), (17, 51)]:
        for n in (5, 40, 333):
            assert strong_majority_lower_bound(n) == pytest.approx(
                majority_prob_lower_bound(w0, w1, n), rel=1e-12)


def test_expected_steps_bound_values():
    assert expected_steps_upper_bound(10, 30, 1000) == pytest.approx(6.4e6, rel=1e-12)
    assert expected_steps_upper_bound(0, 5, 100) == pytest.approx(2 * 100**2, rel=1e-12)
    # quadratic in n
    assert expected_steps_upper_bound(10, 30, 2000) == pytest.approx(
        4 * expected_steps_upper_bound(10, 30, 1000), rel=1e-12)
    with pytest.raises(ValueError):
        expected_steps_upper_bound(30, 10, 100)


def test_update_steps_bound():
    assert update_steps_upper_bound(50, 10, 30, i=50) == 0.0
    assert update_steps_upper_bound(50, 10, 30) == update_steps_upper_bound(50, 10, 30, i=1)
    start_free = [update_steps_upper_bound(50, 10, 30, i=i) for i in range(1, 50)]
    assert max(start_free) == start_free[0]


def test_update_steps_bound_composes_into_runtime_bound():
    # worst-case update steps x 2(n-1) + n never exceeds the runtime bound
    for (w0, w1) in [(1, 3), (10, 30), (32, 50), (40, 50), (0, 5)]:
        for n in (2, 10, 100, 1000):
            per_update = update_steps_upper_bound(n, w0, w1)
            assert per_update * 2 * (n - 1) + n <= expected_steps_upper_bound(w0, w1, n) + 1e-9


def test_initial_write_model():
    model = InitialWriteModel(n=100, w0=40, w1=50)
    assert model.p_one == pytest.approx(5 / 9)
    assert model.expected_zeros + model.expected_ones == pytest.approx(100.0)
    total = sum(model.pmf(i) for i in range(101))
    assert total == pytest.approx(1.0, rel=1e-12)
    mean = sum(i * model.pmf(i) for i in range(101))
    assert mean == pytest.approx(model.expected_ones, rel=1e-10)


def test_binomial_tail():
    assert binomial_tail_prob_ge(0, 10, 0.5) == 1.0
    assert binomial_tail_prob_ge(11, 10, 0.5) == 0.0
    # hand value: P(X >= 9 | Bin(10, 1/2)) = 11/1024
    assert binomial_tail_prob_ge(9, 10, 0.5) == pytest.approx(11 / 1024, rel=1e-12)
    # symmetric midpoint check: P(X >= 3 | Bin(5, 1/2)) = 1/2
    assert binomial_tail_prob_ge(3, 5, 0.5) == pytest.approx(0.5, rel=1e-12)


def test_probability_outputs_in_unit_interval():
    rng = np.random.default_rng(2)
    for _ in range(200):
        w0 = int(rng.integers(1, 60))
        w1 = w0 + int(rng.integers(1, 60))
        n = int(rng.integers(2, 400))
        i = int(rng.integers(0, n + 1))
        assert 0.0 <= decision_prob_closed_form(i, n, w0, w1) <= 1.0
        assert 0.0 <= majority_prob_lower_bound(w0, w1, n) <= 1.0
        assert expected_steps_upper_bound(w0, w1, n) >= 0.0
        assert update_steps_upper_bound(n, w0, w1, i=i) >= 0.0
