"""Input distributions, attack reports and the CHSH evaluators.

Conventions
-----------
An input string of ``n`` runs is stored as the integer whose binary
expansion, most significant bit first, lists the settings of runs
``1..n``. Index order therefore equals lexicographic string order, and the
inner product ``x . y`` of two strings is ``popcount(x & y)``.

All evaluators assume the all-zero deterministic output strategy, under
which the multiple-run CHSH score of a single hidden-variable value is::

    S = 4 * (1 - (2/n) * sum_{x,y} (x . y) q_A(x) q_B(y))
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .errors import ArgumentError, InfeasibleBudgetError, SizeError
from .numerics import log_binomial_row

MAX_EXPLICIT_RUNS = 24
NORMALIZATION_TOL = 1e-12

SCENARIOS = ("single-uncorrelated", "single-correlated", "one-biased", "both-biased")


@dataclass(frozen=True)
class BellBounds:
    classical: float = 2.0
    quantum: float = 2.0 * math.sqrt(2.0)
    no_signalling: float = 4.0


BELL_BOUNDS = BellBounds()
S_CLASSICAL = BELL_BOUNDS.classical
S_QUANTUM = BELL_BOUNDS.quantum
S_NO_SIGNALLING = BELL_BOUNDS.no_signalling

# Multiple-run, correlated-input threshold; quoted from the literature, not computed here.
P_Q_MULTIPLE_CORRELATED_REFERENCE = 0.258


def check_runs(n: int, explicit: bool = False) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise ArgumentError(f"run count must be a positive integer, got {n!r}")
    if explicit and n > MAX_EXPLICIT_RUNS:
        raise SizeError(f"explicit distributions support n <= {MAX_EXPLICIT_RUNS}, got {n}")
    return int(n)


def check_budget(p: float, lo: float = 0.25, hi: float = 1.0) -> float:
    if not (isinstance(p, (int, float, np.floating)) and math.isfinite(p)):
        raise InfeasibleBudgetError(f"budget must be a finite number, got {p!r}")
    if not lo <= p <= hi:
        raise InfeasibleBudgetError(f"budget {p} outside feasible range [{lo}, {hi}]")
    return float(p)


def check_target(s: float) -> float:
    if not (isinstance(s, (int, float, np.floating)) and S_CLASSICAL <= s <= S_NO_SIGNALLING):
        raise ArgumentError(f"target CHSH value must lie in [2, 4], got {s!r}")
    return float(s)


@dataclass(frozen=True)
class RandomnessBudget:
    """Per-run maximum joint input probability, optionally split per side."""

    p: float
    p_a: Optional[float] = None
    p_b: Optional[float] = None

    def __post_init__(self):
        check_budget(self.p)
        if (self.p_a is None) != (self.p_b is None):
            raise ArgumentError("a split budget needs both p_a and p_b")
        if self.p_a is not None:
            check_budget(self.p_a, 0.5, 1.0)
            check_budget(self.p_b, 0.5, 1.0)
            if abs(self.p_a * self.p_b - self.p) > 1e-12:
                raise ArgumentError(
                    f"split ({self.p_a}, {self.p_b}) does not multiply to p={self.p}"
                )

    @property
    def is_split(self) -> bool:
        return self.p_a is not None


@dataclass(frozen=True)
class WeightClassDist:
    """Distribution over n-bit strings that is constant on each Hamming-weight class.

    ``q[k]`` is the probability of each *individual* string of weight ``k``;
    the class carries total mass ``q[k] * C(n, k)``.
    """

    n: int
    q: tuple[float, ...]

    def __post_init__(self):
        check_runs(self.n)
        object.__setattr__(self, "q", tuple(float(v) for v in self.q))
        if len(self.q) != self.n + 1:
            raise ArgumentError(f"need {self.n + 1} weight classes, got {len(self.q)}")
        if any(not (v >= 0.0) for v in self.q):
            raise ArgumentError("per-string probabilities must be nonnegative")
        if max(self.q) > 1.0 + NORMALIZATION_TOL:
            raise ArgumentError("per-string probability exceeds 1")
        total = math.fsum(self.masses())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ArgumentError(f"weight-class masses sum to {total!r}, not 1")

    @classmethod
    def uniform(cls, n: int) -> "WeightClassDist":
        return cls(n, (2.0 ** -n,) * (n + 1))

    @classmethod
    def deterministic_zero(cls, n: int) -> "WeightClassDist":
        """All mass on the all-zero string."""
        return cls(n, (1.0,) + (0.0,) * n)

    def masses(self) -> list[float]:
        row = log_binomial_row(self.n)
        return [math.exp(math.log(v) + lc) if v > 0.0 else 0.0 for v, lc in zip(self.q, row)]

    def weighted_mass(self) -> float:
        """``sum_k k * q[k] * C(n,k)``, the expected Hamming weight."""
        return math.fsum(k * m for k, m in enumerate(self.masses()))

    def max_probability(self) -> float:
        return max(self.q)

    def per_run_cap(self) -> float:
        """``(max_x q(x))^(1/n)``."""
        return self.max_probability() ** (1.0 / self.n)

    def to_explicit(self) -> "ExplicitDist":
        check_runs(self.n, explicit=True)
        weights = popcounts(self.n)
        return ExplicitDist(self.n, np.asarray(self.q, dtype=float)[weights])


@dataclass(frozen=True)
class ExplicitDist:
    """Raw probability vector over all ``2^n`` input strings."""

    n: int
    probs: np.ndarray = field(repr=False)

    def __post_init__(self):
        check_runs(self.n, explicit=True)
        probs = np.array(self.probs, dtype=float)
        if probs.shape != (1 << self.n,):
            raise ArgumentError(f"need {1 << self.n} probabilities, got shape {probs.shape}")
        if np.any(probs < 0.0) or not np.all(np.isfinite(probs)):
            raise ArgumentError("probabilities must be finite and nonnegative")
        total = math.fsum(probs.tolist())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ArgumentError(f"probabilities sum to {total!r}, not 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def uniform(cls, n: int) -> "ExplicitDist":
        check_runs(n, explicit=True)
        return cls(n, np.full(1 << n, 2.0 ** -n))

    def run_marginals(self) -> np.ndarray:
        """Probability that run ``i`` gets setting 1, for ``i = 1..n``."""
        idx = np.arange(1 << self.n)
        return np.array(
            [self.probs[(idx >> (self.n - 1 - i)) & 1 == 1].sum() for i in range(self.n)]
        )


@dataclass(frozen=True)
class AttackReport:
    scenario: str
    n: int
    budget: RandomnessBudget
    s: float
    dist_a: WeightClassDist
    dist_b: WeightClassDist
    thresholds: tuple[int, int]


@dataclass
class CurveTable:
    """Rows of ``(p, s)`` sorted by ``p``."""

    scenario: str
    runs: Union[int, str]
    rows: list[tuple[float, float]]

    def __post_init__(self):
        ps = [p for p, _ in self.rows]
        if ps != sorted(ps):
            raise ArgumentError("curve rows must be sorted ascending in p")

    def to_csv(self) -> str:
        lines = ["p,s"] + [f"{p:.9g},{s:.9g}" for p, s in self.rows]
        return "\n".join(lines) + "\n"

    @staticmethod
    def parse_csv(text: str) -> list[tuple[float, float]]:
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        if header != ["p", "s"]:
            raise ArgumentError(f"unexpected curve header {header}")
        return [(float(p), float(s)) for p, s in reader]


def popcounts(n: int) -> np.ndarray:
    """Hamming weight of every index ``0 .. 2^n - 1``."""
    idx = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        out += (idx >> i) & 1
    return out


def evaluate_chsh_explicit(dist_a: ExplicitDist, dist_b: ExplicitDist) -> float:
    if dist_a.n != dist_b.n:
        raise ArgumentError(f"run counts differ: {dist_a.n} vs {dist_b.n}")
    n = check_runs(dist_a.n, explicit=True)
    # sum_{x,y} (x.y) qA(x) qB(y) = sum_i P(x_i=1) P(y_i=1)
    overlap = math.fsum((dist_a.run_marginals() * dist_b.run_marginals()).tolist())
    return 4.0 * (1.0 - 2.0 * overlap / n)


def evaluate_chsh_weight_classes(dist_a: WeightClassDist, dist_b: WeightClassDist) -> float:
    if dist_a.n != dist_b.n:
        raise ArgumentError(f"run counts differ: {dist_a.n} vs {dist_b.n}")
    n = dist_a.n
    # the double sum over (k_A, k_B) of mass_A * mass_B * k_A * k_B factorizes
    return 4.0 * (1.0 - 2.0 * dist_a.weighted_mass() * dist_b.weighted_mass() / (n * n))


def budget_of(dist_a: ExplicitDist, dist_b: ExplicitDist) -> RandomnessBudget:
    if dist_a.n != dist_b.n:
        raise ArgumentError(f"run counts differ: {dist_a.n} vs {dist_b.n}")
    n = dist_a.n
    max_a = float(dist_a.probs.max())
    max_b = float(dist_b.probs.max())
    p_a = _snap(max_a ** (1.0 / n), 0.5)
    p_b = _snap(max_b ** (1.0 / n), 0.5)
    return RandomnessBudget(_snap((max_a * max_b) ** (1.0 / n), 0.25), p_a, p_b)


def _snap(value: float, floor: float) -> float:
    # n-th roots of exact powers of two can round a few ulps below the floor
    return floor if abs(value - floor) <= 1e-12 else value


def as_explicit(probs: Sequence[float]) -> ExplicitDist:
    """Wrap a probability list of length ``2^n`` as an :class:`ExplicitDist`."""
    size = len(probs)
    n = size.bit_length() - 1
    if size < 2 or 1 << n != size:
        raise ArgumentError(f"length {size} is not a power of two >= 2")
    return ExplicitDist(n, np.asarray(probs, dtype=float))
