"""Optimal multiple-run attack when only Alice's inputs are biased.

Bob's strings are uniform, so each of Alice's strings ``x`` contributes
``4 * (1 - |x| / n)`` and the problem is a linear program with a per-string
cap ``(2p)^n``. The optimum saturates every string of Hamming weight up to
some threshold ``l`` and pours the leftover mass evenly into weight
``l + 1``.
"""

from __future__ import annotations

import bisect as _bisect
import math

from .core import (
    AttackReport,
    RandomnessBudget,
    S_NO_SIGNALLING,
    WeightClassDist,
    check_budget,
    check_runs,
    check_target,
    evaluate_chsh_weight_classes,
)
from .errors import InfeasibleBudgetError
from .numerics import (
    inverse_weight_fraction_bound,
    log_binomial_row,
    log_partial_sums,
    partial_sum_root,
    weight_fraction_bound,
)

# slack on the saturated mass when deciding whether a Hamming ball still fits
SATURATION_TOL = 1e-12


def saturation_threshold(n: int, log_cap: float) -> int:
    """Largest ``l`` such that capping every string of weight ``<= l`` fits in unit mass.

    ``log_cap`` is the log of the per-string cap. The result satisfies
    ``cap * sum_{k<=l} C(n,k) <= 1`` up to :data:`SATURATION_TOL` and
    the same sum at ``l + 1`` exceeds 1.
    """
    sums = log_partial_sums(n)
    return _bisect.bisect_right(sums, SATURATION_TOL - log_cap) - 1


def saturated_ball(n: int, log_cap: float, l: int) -> WeightClassDist:
    """Cap weights ``0..l``, spread the remainder over weight ``l + 1``."""
    row = log_binomial_row(n)
    log_ball = log_partial_sums(n)[l]
    q = [0.0] * (n + 1)
    if l == n or log_cap + log_ball >= 0.0:
        # ball is (numerically) full: flat over it, nothing left over
        flat = math.exp(-log_ball)
        q[: l + 1] = [flat] * (l + 1)
        return WeightClassDist(n, q)
    cap = math.exp(log_cap)
    q[: l + 1] = [cap] * (l + 1)
    remainder = -math.expm1(log_cap + log_ball)
    q[l + 1] = math.exp(math.log(remainder) - row[l + 1])
    return WeightClassDist(n, q)


def _check_one_biased_budget(p: float) -> float:
    p = check_budget(p)
    if p > 0.5:
        raise InfeasibleBudgetError(f"one-biased strategies need p in [0.25, 0.5], got {p}")
    return p


def bracket_points(n: int) -> list[float]:
    """Budgets ``(1/2) * partial_sum_root(n, l)`` for ``l = 0..n``, descending."""
    check_runs(n)
    return [0.5 * partial_sum_root(n, l) for l in range(n + 1)]


def find_threshold(n: int, p: float) -> int:
    n = check_runs(n)
    p = _check_one_biased_budget(p)
    return saturation_threshold(n, n * math.log(2.0 * p))


def build_strategy_one_biased(n: int, p: float) -> WeightClassDist:
    n = check_runs(n)
    p = _check_one_biased_budget(p)
    log_cap = n * math.log(2.0 * p)
    return saturated_ball(n, log_cap, saturation_threshold(n, log_cap))


def evaluate_one_biased(dist_a: WeightClassDist) -> float:
    """CHSH value of Alice's distribution against a uniform Bob."""
    return 4.0 * (1.0 - dist_a.weighted_mass() / dist_a.n)


def s_max_one_biased(n: int, p: float) -> AttackReport:
    n = check_runs(n)
    p = check_budget(p)
    uniform = WeightClassDist.uniform(n)
    if p > 0.5:
        return AttackReport(
            "one-biased", n, RandomnessBudget(p), S_NO_SIGNALLING,
            WeightClassDist.deterministic_zero(n), uniform, (0, n),
        )
    log_cap = n * math.log(2.0 * p)
    l = saturation_threshold(n, log_cap)
    dist_a = saturated_ball(n, log_cap, l)
    return AttackReport(
        "one-biased", n, RandomnessBudget(p, 2.0 * p, 0.5),
        evaluate_chsh_weight_classes(dist_a, uniform), dist_a, uniform, (l, n),
    )


def s_max_one_biased_asymptotic(p: float) -> float:
    p = check_budget(p)
    if p >= 0.5:
        return S_NO_SIGNALLING
    lbar = inverse_weight_fraction_bound(2.0 * p)
    return 4.0 - 4.0 * lbar


def critical_p_one_biased(s_target: float) -> float:
    """Large-run budget needed to reach ``s_target`` with one biased side."""
    s = check_target(s_target)
    return 0.5 * weight_fraction_bound((4.0 - s) / 4.0)
