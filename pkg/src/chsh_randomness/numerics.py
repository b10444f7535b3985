"""Log-space combinatorics and deterministic scalar solvers.

Binomial coefficients for a hundred or more runs overflow 64-bit integers
and lose all precision as floats, so every binomial sum here is carried in
log space and only exponentiated once it has been scaled back to a
per-run probability.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable

from .errors import ArgumentError, BracketingError

DEFAULT_TOL = 1e-10
DEFAULT_CELLS = 64

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _compensated_prefix_sums(terms) -> list[float]:
    # Neumaier summation: the running error term keeps each prefix within an ulp or so
    total, err, out = 0.0, 0.0, []
    for t in terms:
        y = total + t
        err += (total - y) + t if abs(total) >= abs(t) else (t - y) + total
        total = y
        out.append(total + err)
    return out


@lru_cache(maxsize=256)
def log_binomial_row(n: int) -> tuple[float, ...]:
    """``(ln C(n,0), ..., ln C(n,n))``, cached per run count.

    Built from the ratio ``C(n,k+1) / C(n,k) = (n-k) / (k+1)`` by summing the
    logs of the ratios, so no term is larger than ``ln n``; taking
    differences of log-factorials instead loses about ``ulp(ln n!)`` which
    is ~1e-12 already at ``n = 1000``. The row is mirrored, so it is exactly
    symmetric.
    """
    if n < 0:
        raise ArgumentError(f"log_binomial needs nonnegative arguments, got n={n}")
    half = n // 2
    lower = [0.0] + _compensated_prefix_sums(math.log((n - k) / (k + 1)) for k in range(half))
    return tuple(lower + lower[: n + 1 - len(lower)][::-1])


def log_binomial(n: int, k: int) -> float:
    """Return ``ln C(n, k)`` without forming any factorial."""
    if n < 0 or k < 0:
        raise ArgumentError(f"log_binomial needs nonnegative arguments, got ({n}, {k})")
    if k > n:
        raise ArgumentError(f"log_binomial needs k <= n, got ({n}, {k})")
    return log_binomial_row(n)[k]


@lru_cache(maxsize=256)
def log_partial_sums(n: int) -> tuple[float, ...]:
    """Entry ``l`` is ``ln sum_{k<=l} C(n,k)``; nondecreasing, ends at ``n ln 2``.

    Up to the middle the sum is carried relative to its last term,
    ``r_l = sum_{k<=l} C(n,k) / C(n,l) = 1 + r_{l-1} * l / (n-l+1)``, which
    stays below 2 there. Past the middle the complement
    ``2^n - sum_{k<n-l} C(n,k)`` is used, so the full ball comes out as
    exactly ``n * ln 2``.
    """
    row = log_binomial_row(n)
    half = n // 2
    out = []
    ratio = 0.0
    for l in range(half + 1):
        ratio = 1.0 + ratio * l / (n - l + 1)
        out.append(row[l] + math.log(ratio))
    total = n * math.log(2.0)
    for l in range(half + 1, n + 1):
        rest = out[n - l - 1] if n - l - 1 >= 0 else -math.inf
        out.append(total + math.log1p(-math.exp(rest - total)))
    return tuple(out)


def partial_sum_root(n: int, l: int) -> float:
    """Per-run cap at which the Hamming ball of radius ``l`` is exactly saturated.

    Returns ``[sum_{k<=l} C(n,k)]^(-1/n)``.
    """
    if n < 1:
        raise ArgumentError(f"run count must be >= 1, got {n}")
    if not 0 <= l <= n:
        raise ArgumentError(f"threshold index must lie in [0, {n}], got {l}")
    return math.exp(-log_partial_sums(n)[l] / n)


def weight_fraction_bound(lbar: float) -> float:
    """``lbar^lbar * (1-lbar)^(1-lbar)`` with ``0 ln 0 = 0``.

    This is ``2^(-H(lbar))`` for the binary entropy ``H``: the large-run
    limit of :func:`partial_sum_root` at ``l = lbar * n``.
    """
    if not 0.0 <= lbar <= 1.0:
        raise ArgumentError(f"weight fraction must lie in [0, 1], got {lbar}")
    return math.exp(_xlogx(lbar) + _xlogx(1.0 - lbar))


def _xlogx(x: float) -> float:
    return x * math.log(x) if x > 0.0 else 0.0


def inverse_weight_fraction_bound(value: float, tol: float = 1e-14) -> float:
    """The unique ``lbar`` in ``[0, 1/2]`` with ``weight_fraction_bound(lbar) = value``."""
    if not 0.5 <= value <= 1.0:
        raise ArgumentError(f"weight_fraction_bound takes values in [1/2, 1], got {value}")
    return bisect(lambda x: weight_fraction_bound(x) - value, 0.0, 0.5, tol)


def bisect(f: Callable[[float], float], lo: float, hi: float, tol: float = DEFAULT_TOL) -> float:
    """Root of ``f`` on ``[lo, hi]`` to an interval width of ``tol``.

    An exact zero at either endpoint is returned as is.
    """
    if tol <= 0:
        raise ArgumentError(f"tolerance must be positive, got {tol}")
    if lo > hi:
        lo, hi = hi, lo
    flo = f(lo)
    if flo == 0.0:
        return lo
    fhi = f(hi)
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise BracketingError(f"no sign change on [{lo}, {hi}]: f={flo}, {fhi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            # interval is down to adjacent floats
            break
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0.0) == (flo > 0.0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def golden_section(f: Callable[[float], float], lo: float, hi: float, tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """Plain golden-section search; assumes ``f`` is unimodal on ``[lo, hi]``."""
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def minimize_scalar(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = DEFAULT_TOL,
    cells: int = DEFAULT_CELLS,
) -> tuple[float, float]:
    """Global-ish minimum of ``f`` on ``[lo, hi]``: coarse grid, then golden section.

    The grid is evaluated at ``cells + 1`` evenly spaced points; the
    golden-section refinement runs on the two cells adjacent to the best
    grid point. The refined point is kept only if it strictly improves on
    the grid, so ties resolve toward the smallest grid argument.
    """
    if not lo < hi:
        raise ArgumentError(f"minimize_scalar needs lo < hi, got [{lo}, {hi}]")
    if tol <= 0:
        raise ArgumentError(f"tolerance must be positive, got {tol}")
    if cells < 1:
        raise ArgumentError(f"cells must be >= 1, got {cells}")
    width = (hi - lo) / cells
    grid = [lo + i * width for i in range(cells)] + [hi]
    values = [f(x) for x in grid]
    best = min(range(len(grid)), key=lambda i: (values[i], i))
    a = grid[max(best - 1, 0)]
    b = grid[min(best + 1, cells)]
    x, fx = golden_section(f, a, b, tol)
    if fx < values[best]:
        return x, fx
    return grid[best], values[best]
