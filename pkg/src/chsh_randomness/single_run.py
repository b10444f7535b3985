"""Single-run optimal attacks: closed forms and their inverses.

With inputs drawn independently per run, the best local strategy reaches
``S = 8p`` when Alice's and Bob's settings are uncorrelated and
``S = 24p - 4`` when they may be correlated, saturating the no-signalling
value 4 at ``p = 1/2`` and ``p = 1/3`` respectively.
"""

from __future__ import annotations

from .core import S_NO_SIGNALLING, check_budget, check_target
from .errors import InfeasibleBudgetError


def s_max_single(p: float, correlated: bool = False) -> float:
    p = check_budget(p)
    s = 24.0 * p - 4.0 if correlated else 8.0 * p
    return min(s, S_NO_SIGNALLING)


def critical_p_single(s_target: float, correlated: bool = False) -> float:
    """Smallest budget at which a single-run attack reaches ``s_target``."""
    s = check_target(s_target)
    return (s + 4.0) / 24.0 if correlated else s / 8.0


def single_run_optimal_split(p: float) -> tuple[float, float]:
    """Per-side caps ``(p_a, p_b)`` of the uncorrelated optimum: bias Alice fully, leave Bob uniform."""
    p = check_budget(p)
    if p > 0.5:
        raise InfeasibleBudgetError(f"split is defined for p in [0.25, 0.5], got {p}")
    return 2.0 * p, 0.5
