import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chsh_randomness.core import WeightClassDist, evaluate_chsh_explicit, evaluate_chsh_weight_classes
from chsh_randomness.errors import ArgumentError, InfeasibleBudgetError
from chsh_randomness.numerics import partial_sum_root
from chsh_randomness.one_biased import (
    bracket_points,
    build_strategy_one_biased,
    critical_p_one_biased,
    evaluate_one_biased,
    find_threshold,
    s_max_one_biased,
    s_max_one_biased_asymptotic,
)

S_Q = 2 * math.sqrt(2)
DOMINANCE_RUNS = (1, 2, 5, 10, 50, 100)
GRID = np.linspace(0.25, 0.5, 100)


def exact_threshold(n, p):
    """Largest l with (2p)^n * sum_{k<=l} C(n,k) <= 1, by integer partial sums."""
    cap = (2 * p) ** n
    total, best = 0, -1
    for l in range(n + 1):
        total += math.comb(n, l)
        if cap * total <= 1 + 1e-12:
            best = l
    return best


class TestFindThreshold:
    def test_single_run(self):
        assert find_threshold(1, 0.3) == 0

    def test_two_runs(self):
        assert find_threshold(2, 0.3) == 0

    def test_boundary_equality_takes_larger_index(self):
        assert find_threshold(2, 0.5 / math.sqrt(3)) == 1

    def test_uniform_budget_is_full_ball(self):
        for n in (1, 2, 10, 500):
            assert find_threshold(n, 0.25) == n

    def test_half_is_empty_ball(self):
        for n in (1, 2, 10, 500):
            assert find_threshold(n, 0.5) == 0

    @pytest.mark.parametrize("p", [0.2, 0.51])
    def test_rejects_budget(self, p):
        with pytest.raises(InfeasibleBudgetError):
            find_threshold(3, p)

    def test_bracket_invariant(self):
        for n in (1, 3, 8, 40, 200):
            for p in np.linspace(0.25, 0.5, 57):
                l = find_threshold(n, p)
                assert p <= 0.5 * partial_sum_root(n, l) * (1 + 1e-12)
                if l < n:
                    assert 0.5 * partial_sum_root(n, l + 1) < p

    def test_against_integer_sums(self):
        for n in range(1, 30):
            for p in np.linspace(0.25, 0.5, 23):
                assert find_threshold(n, p) == exact_threshold(n, p), (n, p)

    def test_bracket_points_descending(self):
        points = bracket_points(6)
        assert points[0] == 0.5
        assert points[-1] == pytest.approx(0.25, rel=1e-14)
        assert all(a > b for a, b in zip(points, points[1:]))


class TestBuildStrategy:
    def test_two_runs(self):
        assert build_strategy_one_biased(2, 0.3).q == pytest.approx((0.36, 0.32, 0.0), abs=1e-14)

    def test_single_run(self):
        assert build_strategy_one_biased(1, 0.3).q == pytest.approx((0.6, 0.4), abs=1e-14)

    def test_exact_saturation(self):
        q = build_strategy_one_biased(2, 0.5 / math.sqrt(3)).q
        assert q == pytest.approx((1 / 3, 1 / 3, 0.0), abs=1e-12)

    def test_uniform_budget(self):
        d = build_strategy_one_biased(3, 0.25)
        assert d.q == pytest.approx((0.125,) * 4, abs=1e-15)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(min_value=1, max_value=300), st.floats(min_value=0.25, max_value=0.5))
    def test_feasible(self, n, p):
        d = build_strategy_one_biased(n, p)
        assert math.fsum(d.masses()) == pytest.approx(1.0, abs=1e-12)
        assert max(d.q) <= (2 * p) ** n + 1e-12
        l = find_threshold(n, p)
        assert all(v == 0.0 for v in d.q[l + 2:])

    def test_cap_respected_on_explicit_strings(self):
        for n in range(1, 9):
            for p in np.linspace(0.25, 0.5, 11):
                probs = build_strategy_one_biased(n, p).to_explicit().probs
                assert probs.max() <= (2 * p) ** n + 1e-12
                assert probs.sum() == pytest.approx(1.0, abs=1e-12)


class TestSMaxOneBiased:
    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=0.25, max_value=0.5))
    def test_single_run_is_eight_p(self, p):
        assert s_max_one_biased(1, p).s == pytest.approx(8 * p, abs=1e-12)

    def test_two_runs(self):
        assert s_max_one_biased(2, 0.3).s == pytest.approx(2.72, abs=1e-12)

    def test_two_runs_near_uniform(self):
        report = s_max_one_biased(2, 0.26)
        assert report.dist_a.q == pytest.approx((0.2704, 0.2704, 0.1888), abs=1e-12)
        assert report.dist_a.weighted_mass() == pytest.approx(0.9184, abs=1e-12)
        assert report.s == pytest.approx(2.1632, abs=1e-12)

    def test_uniform_budget(self):
        assert s_max_one_biased(2, 0.25).s == pytest.approx(2.0, abs=1e-12)

    def test_above_half_is_no_signalling(self):
        report = s_max_one_biased(5, 0.7)
        assert report.s == 4.0
        assert report.dist_a.q[0] == 1.0

    def test_explicit_check_two_runs(self):
        report = s_max_one_biased(2, 0.3)
        explicit = evaluate_chsh_explicit(report.dist_a.to_explicit(), report.dist_b.to_explicit())
        assert explicit == pytest.approx(2.72, abs=1e-12)

    def test_report_consistent_with_own_strategy(self):
        for n in (1, 2, 7, 30, 400):
            for p in np.linspace(0.25, 0.5, 13):
                report = s_max_one_biased(n, p)
                assert report.s == pytest.approx(
                    evaluate_chsh_weight_classes(report.dist_a, report.dist_b), abs=1e-12
                )
                assert report.s == pytest.approx(evaluate_one_biased(report.dist_a), abs=1e-12)
                assert report.budget.p == p

    def test_rejects_budget(self):
        with pytest.raises(InfeasibleBudgetError):
            s_max_one_biased(3, 0.249)

    def test_finite_dominance(self):
        for n in DOMINANCE_RUNS:
            for p in GRID:
                s_n = s_max_one_biased(n, p).s
                s_2n = s_max_one_biased(2 * n, p).s
                assert s_n <= s_2n + 1e-12, (n, p)
                assert s_2n <= s_max_one_biased_asymptotic(p) + 1e-9, (n, p)

    @pytest.mark.parametrize("n", [1, 2, 4, 10, 25])
    def test_affine_in_cap_between_brackets(self, n):
        # inside a bracket only the leftover weight class moves, and it moves linearly in (2p)^n
        points = bracket_points(n)
        for hi, lo in zip(points, points[1:]):
            caps = np.linspace((2 * lo) ** n, (2 * hi) ** n, 7)[1:-1]
            values = [s_max_one_biased(n, c ** (1 / n) / 2).s for c in caps]
            second = np.diff(values, 2)
            assert np.max(np.abs(second)) <= 1e-9, (n, lo, hi)

    @pytest.mark.parametrize("n", [1, 3, 10, 60])
    def test_nondecreasing(self, n):
        ps = np.linspace(0.25, 0.5, 2001)
        values = np.array([s_max_one_biased(n, p).s for p in ps])
        assert np.all(np.diff(values) >= -1e-12)

    def test_continuous_across_bracket_points(self):
        for n in (2, 5, 12):
            for b in bracket_points(n)[1:-1]:
                left = s_max_one_biased(n, b * (1 - 1e-12)).s
                right = s_max_one_biased(n, b * (1 + 1e-12)).s
                assert right - left == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.parametrize("p", [0.27, 0.3, 0.35])
    def test_converges_to_asymptote(self, p):
        gap = s_max_one_biased_asymptotic(p) - s_max_one_biased(1000, p).s
        assert 0.0 <= gap <= 0.02


class TestAsymptotic:
    def test_endpoints(self):
        assert s_max_one_biased_asymptotic(0.25) == pytest.approx(2.0, abs=1e-12)
        assert s_max_one_biased_asymptotic(0.5) == 4.0
        assert s_max_one_biased_asymptotic(0.8) == 4.0

    def test_quantum_point(self):
        assert s_max_one_biased_asymptotic(0.273) == pytest.approx(S_Q, abs=2e-3)

    def test_rejects_budget(self):
        with pytest.raises(InfeasibleBudgetError):
            s_max_one_biased_asymptotic(0.2)

    def test_nondecreasing(self):
        values = [s_max_one_biased_asymptotic(p) for p in np.linspace(0.25, 0.5, 500)]
        assert all(b >= a for a, b in zip(values, values[1:]))


class TestCritical:
    def test_endpoints(self):
        assert critical_p_one_biased(2.0) == pytest.approx(0.25, abs=1e-12)
        assert critical_p_one_biased(4.0) == 0.5

    def test_quantum_target(self):
        assert critical_p_one_biased(S_Q) == pytest.approx(0.27310, abs=5e-4)
        assert critical_p_one_biased(S_Q) == pytest.approx(0.273, abs=5e-4)

    def test_closed_form(self):
        for s in np.linspace(2.0, 3.99, 50):
            t = (4 - s) / 4
            assert critical_p_one_biased(s) == pytest.approx(0.5 * t ** t * (1 - t) ** (1 - t), rel=1e-13)

    def test_monotone(self):
        values = [critical_p_one_biased(s) for s in np.linspace(2, 4, 400)]
        assert all(b > a for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("s", [1.5, 4.5])
    def test_rejects_target(self, s):
        with pytest.raises(ArgumentError):
            critical_p_one_biased(s)

    def test_round_trip(self):
        for p in np.linspace(0.25, 0.5, 101):
            assert critical_p_one_biased(s_max_one_biased_asymptotic(p)) == pytest.approx(p, abs=1e-9)

    def test_weight_class_dist_roundtrip(self):
        # a hand-built distribution evaluates the same through both one-sided routes
        d = WeightClassDist(2, (0.36, 0.32, 0.0))
        assert evaluate_one_biased(d) == pytest.approx(2.72, abs=1e-14)
