"""Bell-test randomness loophole: how much CHSH violation a local model can fake
when an adversary partly controls the measurement settings."""

from .both_biased import (
    best_split,
    build_strategies_both,
    critical_p_both_biased,
    find_thresholds,
    s_max_both_biased,
    s_max_both_biased_asymptotic,
    s_max_both_biased_given_split,
)
from .core import (
    BELL_BOUNDS,
    S_CLASSICAL,
    S_NO_SIGNALLING,
    S_QUANTUM,
    AttackReport,
    BellBounds,
    CurveTable,
    ExplicitDist,
    RandomnessBudget,
    WeightClassDist,
    budget_of,
    evaluate_chsh_explicit,
    evaluate_chsh_weight_classes,
)
from .errors import (
    ArgumentError,
    BracketingError,
    ChshError,
    InfeasibleBudgetError,
    SizeError,
)
from .one_biased import (
    build_strategy_one_biased,
    critical_p_one_biased,
    find_threshold,
    s_max_one_biased,
    s_max_one_biased_asymptotic,
)
from .single_run import critical_p_single, s_max_single, single_run_optimal_split

__version__ = "0.1.0"

__all__ = [
    "ArgumentError",
    "AttackReport",
    "BELL_BOUNDS",
    "BellBounds",
    "BracketingError",
    "ChshError",
    "CurveTable",
    "ExplicitDist",
    "InfeasibleBudgetError",
    "RandomnessBudget",
    "S_CLASSICAL",
    "S_NO_SIGNALLING",
    "S_QUANTUM",
    "SizeError",
    "WeightClassDist",
    "best_split",
    "budget_of",
    "build_strategies_both",
    "build_strategy_one_biased",
    "critical_p_both_biased",
    "critical_p_one_biased",
    "critical_p_single",
    "evaluate_chsh_explicit",
    "evaluate_chsh_weight_classes",
    "find_threshold",
    "find_thresholds",
    "s_max_both_biased",
    "s_max_both_biased_asymptotic",
    "s_max_both_biased_given_split",
    "s_max_one_biased",
    "s_max_one_biased_asymptotic",
    "s_max_single",
    "single_run_optimal_split",
]
