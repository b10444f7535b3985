"""Multiple-run attack with both sides biased, inputs uncorrelated.

Both input distributions are restricted to be constant on Hamming-weight
classes; each side then saturates a Hamming ball under its own per-run cap
and the caps multiply to the joint budget, ``p_a * p_b = p``. Restricting
to this family gives a valid attack (a lower bound on the adversary's best
value), not a proven optimum; :mod:`chsh_randomness.oracle` probes the gap.
"""

from __future__ import annotations

import math

from .core import (
    AttackReport,
    RandomnessBudget,
    S_CLASSICAL,
    S_NO_SIGNALLING,
    WeightClassDist,
    check_budget,
    check_runs,
    check_target,
    evaluate_chsh_weight_classes,
)
from .numerics import inverse_weight_fraction_bound, minimize_scalar, weight_fraction_bound
from .one_biased import saturated_ball, saturation_threshold

SPLIT_TOL = 1e-10


def _check_side(p_side: float) -> float:
    return check_budget(p_side, 0.5, 1.0)


def find_thresholds(n: int, p_a: float, p_b: float) -> tuple[int, int]:
    n = check_runs(n)
    p_a, p_b = _check_side(p_a), _check_side(p_b)
    return (
        saturation_threshold(n, n * math.log(p_a)),
        saturation_threshold(n, n * math.log(p_b)),
    )


def build_strategies_both(n: int, p_a: float, p_b: float) -> tuple[WeightClassDist, WeightClassDist]:
    l_a, l_b = find_thresholds(n, p_a, p_b)
    return (
        saturated_ball(n, n * math.log(p_a), l_a),
        saturated_ball(n, n * math.log(p_b), l_b),
    )


def s_max_both_biased_given_split(n: int, p_a: float, p_b: float) -> AttackReport:
    n = check_runs(n)
    l_a, l_b = find_thresholds(n, p_a, p_b)
    dist_a = saturated_ball(n, n * math.log(p_a), l_a)
    dist_b = saturated_ball(n, n * math.log(p_b), l_b)
    return AttackReport(
        "both-biased", n, RandomnessBudget(p_a * p_b, p_a, p_b),
        evaluate_chsh_weight_classes(dist_a, dist_b), dist_a, dist_b, (l_a, l_b),
    )


def _split_value(n: int, p: float, p_a: float) -> float:
    p_b = min(max(p / p_a, 0.5), 1.0)
    l_a, l_b = find_thresholds(n, p_a, p_b)
    dist_a = saturated_ball(n, n * math.log(p_a), l_a)
    dist_b = saturated_ball(n, n * math.log(p_b), l_b)
    return evaluate_chsh_weight_classes(dist_a, dist_b)


def best_split(n: int, p: float) -> tuple[float, float]:
    """Alice's cap ``p_a`` maximizing the structured value, and that value.

    The search covers ``p_a in [sqrt(p), 2p]``; by exchange symmetry the
    mirrored half is redundant. The objective has kinks and is not unimodal
    at finite ``n``, hence the grid-first minimizer; the one-sided split
    ``p_a = 2p`` is compared explicitly and loses ties.
    """
    n = check_runs(n)
    p = check_budget(p, 0.25, 0.5)
    lo, hi = math.sqrt(p), min(1.0, 2.0 * p)
    if hi - lo <= SPLIT_TOL:
        return hi, _split_value(n, p, hi)
    x, neg = minimize_scalar(lambda pa: -_split_value(n, p, pa), lo, hi, SPLIT_TOL)
    edge = _split_value(n, p, hi)
    if edge > -neg:
        return hi, edge
    return x, -neg


def s_max_both_biased(n: int, p: float) -> AttackReport:
    n = check_runs(n)
    p = check_budget(p)
    if p > 0.5:
        return AttackReport(
            "both-biased", n, RandomnessBudget(p), S_NO_SIGNALLING,
            WeightClassDist.deterministic_zero(n), WeightClassDist.uniform(n), (0, n),
        )
    p_a, _ = best_split(n, p)
    p_b = min(max(p / p_a, 0.5), 1.0)
    report = s_max_both_biased_given_split(n, p_a, p_b)
    return AttackReport(
        report.scenario, n, RandomnessBudget(p, p_a, p_b), report.s,
        report.dist_a, report.dist_b, report.thresholds,
    )


def _partner_fraction(p: float, lbar_a: float) -> float:
    ratio = min(max(p / weight_fraction_bound(lbar_a), 0.5), 1.0)
    return inverse_weight_fraction_bound(ratio)


def s_max_both_biased_asymptotic(p: float) -> float:
    """Large-run value ``4 - 8 * la * lb`` maximized over fractions with ``P_A(la) * P_B(lb) = p``."""
    p = check_budget(p)
    if p >= 0.5:
        return S_NO_SIGNALLING
    if p == 0.25:
        return S_CLASSICAL
    # Alice's fraction must leave Bob a feasible cap: P_A(la) <= 2p
    lo = inverse_weight_fraction_bound(2.0 * p)
    _, product = minimize_scalar(lambda la: la * _partner_fraction(p, la), lo, 0.5, SPLIT_TOL)
    return 4.0 - 8.0 * product


def critical_p_both_biased(s_target: float) -> float:
    """Smallest large-run budget at which the structured two-sided attack reaches ``s_target``."""
    s = check_target(s_target)
    c = (4.0 - s) / 8.0
    if c == 0.0:
        return 0.5
    lo = 2.0 * c
    if 0.5 - lo <= SPLIT_TOL:
        return weight_fraction_bound(0.5) ** 2

    def joint(la: float) -> float:
        return weight_fraction_bound(la) * weight_fraction_bound(min(c / la, 0.5))

    _, value = minimize_scalar(joint, lo, 0.5, SPLIT_TOL)
    return value
