"""Brute-force checks that bypass the weight-class reduction.

Everything here works on explicit probability vectors over all ``2^n``
input strings and on explicit deterministic output tables, so it shares
no code path with the structured strategies beyond the input validation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .both_biased import best_split, build_strategies_both, s_max_both_biased
from .core import S_NO_SIGNALLING, check_budget, check_runs
from .errors import SizeError

MAX_GREEDY_RUNS = 12
MAX_ENUMERATION_RUNS = 2
MAX_ALTERNATING_RUNS = 10
COUNTEREXAMPLE_MARGIN = 1e-6

SPLIT_GRID_POINTS = 16
MAX_ITERATIONS = 200
CONVERGENCE_TOL = 1e-12


@dataclass(frozen=True)
class DeterministicOutputStrategy:
    """Output strings chosen as a function of the full input string on each side.

    ``table_a[x]`` is Alice's n-bit output (as an integer) on input ``x``.
    """

    n: int
    table_a: tuple[int, ...]
    table_b: tuple[int, ...]

    def __post_init__(self):
        size = 1 << self.n
        if len(self.table_a) != size or len(self.table_b) != size:
            raise ValueError(f"output tables must cover all {size} inputs")

    @classmethod
    def all_zero(cls, n: int) -> "DeterministicOutputStrategy":
        return cls(n, (0,) * (1 << n), (0,) * (1 << n))


def _popcount(v):
    return bin(v).count("1")


def payoff_coefficient(strategy: DeterministicOutputStrategy, x: int, y: int) -> int:
    """``sum_i (-1)^(a_i xor b_i + x_i y_i)`` with ``a, b`` read from the output tables."""
    flips = strategy.table_a[x] ^ strategy.table_b[y] ^ (x & y)
    return strategy.n - 2 * _popcount(flips)


def _popcount_array(v: np.ndarray, n: int) -> np.ndarray:
    # every entry is an n-bit value, so a 2^n lookup table covers it
    table = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        table[1 << i:2 << i] = table[: 1 << i] + 1
    return table[v]


def payoff_matrix(strategy: DeterministicOutputStrategy) -> np.ndarray:
    """All payoff coefficients at once; entry ``[x, y]``."""
    idx = np.arange(1 << strategy.n)
    a = np.asarray(strategy.table_a)[:, None]
    b = np.asarray(strategy.table_b)[None, :]
    flips = a ^ b ^ (idx[:, None] & idx[None, :])
    return strategy.n - 2 * _popcount_array(flips, strategy.n)


def chsh_value(payoff: np.ndarray, q_a: np.ndarray, q_b: np.ndarray, n: int) -> float:
    return 4.0 / n * float(q_a @ payoff @ q_b)


def greedy_fill(scores: np.ndarray, cap: float, maximize: bool = True) -> np.ndarray:
    """Exact optimum of ``max/min scores . q`` over ``{0 <= q <= cap, sum q = 1}``.

    This is a fractional knapsack with unit weights: fill the best scores
    to the cap in order. Ties keep index (lexicographic) order.
    """
    size = scores.shape[-1]
    cap = max(cap, 1.0 / size)
    order = np.argsort(-scores if maximize else scores, kind="stable")
    q = np.empty(size)
    q[order] = _fill_pattern(size, cap)
    return q


def _fill_pattern(size: int, cap: float) -> np.ndarray:
    return np.clip(1.0 - cap * np.arange(size), 0.0, cap)


def greedy_lp_one_biased(n: int, p: float) -> float:
    """One-biased optimum by a fractional knapsack over every explicit string."""
    n = check_runs(n)
    if n > MAX_GREEDY_RUNS:
        raise SizeError(f"greedy oracle supports n <= {MAX_GREEDY_RUNS}, got {n}")
    p = check_budget(p, 0.25, 0.5)
    payoff = payoff_matrix(DeterministicOutputStrategy.all_zero(n))
    q_b = np.full(1 << n, 2.0 ** -n)
    q_a = greedy_fill(payoff @ q_b, (2.0 * p) ** n)
    return chsh_value(payoff, q_a, q_b, n)


@dataclass(frozen=True)
class EnumerationResult:
    s: float
    strategy: DeterministicOutputStrategy
    all_zero_s: float
    pairs: int

    @property
    def all_zero_optimal(self) -> bool:
        return self.s <= self.all_zero_s + 1e-9


def _all_tables(n: int) -> np.ndarray:
    size = 1 << n
    return np.array(list(itertools.product(range(size), repeat=size)), dtype=np.int64)


def _polytope_vertices(size: int, cap: float) -> np.ndarray:
    """Vertices of ``{0 <= q <= cap, sum q = 1}``: permutations of the greedy fill."""
    pattern = _fill_pattern(size, max(cap, 1.0 / size))
    return np.array(sorted(set(itertools.permutations(pattern.tolist()))))


def _split_grid(n: int, p: float) -> list[float]:
    lo, hi = math.sqrt(p), min(1.0, 2.0 * p)
    grid = set(np.linspace(lo, hi, SPLIT_GRID_POINTS).tolist())
    grid.add(best_split(n, p)[0])
    return sorted(grid)


def enumerate_deterministic(n: int, p: float, both_sided: bool = False) -> EnumerationResult:
    """Best value over every deterministic output-strategy pair.

    One-sided: Bob uniform, Alice's distribution by greedy LP.
    Two-sided: for each split on the oracle grid, the bilinear program is
    solved exactly by scanning all vertex pairs of the two feasible
    polytopes (a bilinear maximum over a product of polytopes sits at a
    vertex pair).
    """
    n = check_runs(n)
    if n > MAX_ENUMERATION_RUNS:
        raise SizeError(f"strategy enumeration supports n <= {MAX_ENUMERATION_RUNS}, got {n}")
    p = check_budget(p, 0.25, 0.5)
    size = 1 << n
    tables = _all_tables(n)
    idx = np.arange(size)
    # payoff[a, b, x, y] over all table pairs
    flips = (
        tables[:, None, :, None]
        ^ tables[None, :, None, :]
        ^ (idx[:, None] & idx[None, :])[None, None]
    )
    payoff = n - 2 * _popcount_array(flips, n)

    if not both_sided:
        scores = payoff.mean(axis=3)
        ranked = -np.sort(-scores, axis=2)
        values = 4.0 / n * ranked @ _fill_pattern(size, (2.0 * p) ** n)
    else:
        flat = payoff.reshape(-1, size, size)
        unique, inverse = np.unique(flat, axis=0, return_inverse=True)
        best = np.full(len(unique), -np.inf)
        for p_a in _split_grid(n, p):
            p_b = min(max(p / p_a, 0.5), 1.0)
            va = _polytope_vertices(size, p_a ** n)
            vb = _polytope_vertices(size, p_b ** n)
            vals = np.einsum("ix,uxy,jy->uij", va, unique, vb).reshape(len(unique), -1)
            best = np.maximum(best, vals.max(axis=1))
        values = (4.0 / n * best[inverse.ravel()]).reshape(len(tables), len(tables))

    a, b = np.unravel_index(int(np.argmax(values)), values.shape)
    strategy = DeterministicOutputStrategy(n, tuple(tables[a].tolist()), tuple(tables[b].tolist()))
    return EnumerationResult(float(values[a, b]), strategy, float(values[0, 0]), values.size)


@dataclass(frozen=True)
class AlternatingResult:
    s: float
    structured_s: float
    p_a: float
    q_a: np.ndarray
    q_b: np.ndarray

    @property
    def excess(self) -> float:
        return self.s - self.structured_s

    @property
    def counterexample(self) -> bool:
        """True when explicit strings beat the weight-class family by a clear margin."""
        return self.excess > COUNTEREXAMPLE_MARGIN


def _bits(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    return np.stack([(idx >> (n - 1 - i)) & 1 for i in range(n)], axis=1).astype(float)


def _alternate(bits, q_b, cap_a, cap_b, n):
    value = -math.inf
    for _ in range(MAX_ITERATIONS):
        q_a = greedy_fill(bits @ (bits.T @ q_b), cap_a, maximize=False)
        q_b = greedy_fill(bits @ (bits.T @ q_a), cap_b, maximize=False)
        overlap = float((bits.T @ q_a) @ (bits.T @ q_b))
        new = 4.0 * (1.0 - 2.0 * overlap / n)
        if abs(new - value) < CONVERGENCE_TOL:
            return new, q_a, q_b
        value = new
    return value, q_a, q_b


def alternating_opt_both_biased(
    n: int, p: float, restarts: int = 8, seed: int = 0, structured_s: Optional[float] = None
) -> AlternatingResult:
    """Heuristic search over explicit two-sided distributions by alternating best responses.

    Splits come from a 16-point grid on ``[sqrt(p), 2p]`` plus the
    structured optimizer's own split. Restart 0 starts Bob at the
    structured strategy; later restarts blend in a random feasible vertex.
    """
    n = check_runs(n)
    if n > MAX_ALTERNATING_RUNS:
        raise SizeError(f"alternating oracle supports n <= {MAX_ALTERNATING_RUNS}, got {n}")
    p = check_budget(p, 0.25, 0.5)
    if structured_s is None:
        structured_s = s_max_both_biased(n, p).s
    rng = np.random.default_rng(seed)
    bits = _bits(n)
    size = 1 << n
    best = None
    for p_a in _split_grid(n, p):
        p_b = min(max(p / p_a, 0.5), 1.0)
        cap_a, cap_b = p_a ** n, p_b ** n
        start = build_strategies_both(n, p_a, p_b)[1].to_explicit().probs
        for r in range(max(restarts, 1)):
            q_b = start
            if r:
                vertex = rng.permutation(_fill_pattern(size, max(cap_b, 1.0 / size)))
                t = rng.uniform()
                q_b = (1.0 - t) * start + t * vertex
            value, q_a, q_b = _alternate(bits, q_b, cap_a, cap_b, n)
            if best is None or value > best[0] + 1e-15:
                best = (value, p_a, q_a, q_b)
    value, p_a, q_a, q_b = best
    return AlternatingResult(min(value, S_NO_SIGNALLING), structured_s, p_a, q_a, q_b)

