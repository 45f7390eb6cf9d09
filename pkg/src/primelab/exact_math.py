"""Exact floor-log arithmetic, fractional parts and Stirling terms.

Floors of log2(x/n) are computed from integers only. The identity
floor(log2(x/n)) == bit_length(x // n) - 1 holds because n * 2**j <= x
exactly when 2**j <= x // n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

LOG2 = math.log(2.0)
LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

# float64 represents every integer below 2**53, so frexp-based bit lengths are exact.
_EXACT_FLOAT_INT = 1 << 53


@dataclass(frozen=True)
class FloorLogResult:
    k: int
    exact_power_hit: bool


def _check_pair(x: int, n: int) -> tuple[int, int]:
    x, n = int(x), int(n)
    if n < 1 or n > x:
        raise ValueError(f"need 1 <= n <= x, got x={x}, n={n}")
    return x, n


def floor_log2_ratio(x: int, n: int) -> FloorLogResult:
    """Largest k >= 0 with n * 2**k <= x."""
    x, n = _check_pair(x, n)
    k = (x // n).bit_length() - 1
    return FloorLogResult(k=k, exact_power_hit=(n << k) == x)


def floor_log2_ratio_doubling(x: int, n: int) -> int:
    """Same floor by repeated doubling; kept as the slow reference route."""
    x, n = _check_pair(x, n)
    k = 0
    m = n
    # stop before m exceeds x; Python ints cannot overflow but x // 2 keeps the guard explicit
    while m <= x // 2:
        m <<= 1
        k += 1
    return k


def floor_log2_ratios(x: int, ns: np.ndarray) -> np.ndarray:
    """Vectorised floor(log2(x/n)) for an array of 1 <= n <= x."""
    if x >= _EXACT_FLOAT_INT:
        raise OverflowError("x must be below 2**53 for the vectorised path")
    q = x // np.asarray(ns, dtype=np.int64)
    return (np.frexp(q.astype(np.float64))[1] - 1).astype(np.int64)


def frac_log2_ratio(x: int, n: int) -> float:
    """Fractional part of log2(x/n); exactly 0.0 when x/n is a power of two."""
    r = floor_log2_ratio(x, n)
    if r.exact_power_hit:
        return 0.0
    v = (math.log(x) - math.log(n)) / LOG2 - r.k
    return min(max(v, 0.0), math.nextafter(1.0, 0.0))


def frac_log2_ratios(x: int, ns: np.ndarray, log_ns: np.ndarray | None = None) -> np.ndarray:
    """Vectorised ``frac_log2_ratio``; ``log_ns`` may be passed to reuse logs."""
    ns = np.asarray(ns, dtype=np.int64)
    k = floor_log2_ratios(x, ns)
    if log_ns is None:
        log_ns = np.log(ns.astype(np.float64))
    v = (math.log(x) - log_ns) / LOG2 - k
    v = np.clip(v, 0.0, math.nextafter(1.0, 0.0))
    v[(ns << k) == x] = 0.0
    return v


def compensated_cumsum(values) -> np.ndarray:
    """Running sums with a Neumaier correction term carried along.

    Every output entry is within about one rounding unit of the exact prefix
    sum, which plain ``np.cumsum`` does not guarantee for long inputs.
    """
    out = np.empty(len(values), dtype=np.float64)
    s = 0.0
    c = 0.0
    for i, v in enumerate(np.asarray(values, dtype=np.float64).tolist()):
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
        out[i] = s + c
    return out


def compensated_sum(values) -> float:
    """Correctly rounded float sum (``math.fsum``)."""
    return math.fsum(np.asarray(values, dtype=np.float64).tolist())


def log_factorial_exact(x: int) -> float:
    """log(x!) as a compensated sum of log n, n = 1..x."""
    x = int(x)
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    return compensated_sum(np.log(np.arange(1, x + 1, dtype=np.float64)))


def stirling_main_terms(x: int) -> float:
    """x log x - x + (1/2) log x + log sqrt(2 pi), without the O(1/x) tail."""
    x = int(x)
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    lx = math.log(x)
    return x * lx - x + 0.5 * lx + LOG_SQRT_2PI


def _stirling_steps(ns: np.ndarray) -> np.ndarray:
    """r(n) - r(n+1) where r(n) = log n! - stirling_main_terms(n).

    With u = 1/(2n+1) the step is atanh(u)/u - 1 = sum_k u**(2k) / (2k+1),
    summed here term by term so no cancellation occurs.
    """
    u2 = (1.0 / (2.0 * np.asarray(ns, dtype=np.float64) + 1.0)) ** 2
    acc = np.zeros_like(u2)
    # u2 <= 1/9, so 24 terms leave a tail below 1e-23
    for k in range(24, 0, -1):
        acc = u2 * (1.0 / (2 * k + 1) + acc)
    return acc


def stirling_remainder(x: int) -> float:
    """log(x!) - stirling_main_terms(x), evaluated without cancellation.

    Subtracting two doubles near x log x loses everything below one ulp of
    that size; this route telescopes from r(1) = 1 - log sqrt(2 pi) instead and
    stays accurate to ~1e-16 absolute.
    """
    x = int(x)
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    steps = _stirling_steps(np.arange(1, x, dtype=np.float64))
    return math.fsum([1.0 - LOG_SQRT_2PI, *(-steps).tolist()])


def stirling_remainders(limit: int) -> np.ndarray:
    """``stirling_remainder`` for every x in [1, limit]; index 0 is x = 1."""
    steps = _stirling_steps(np.arange(1, limit, dtype=np.float64))
    out = np.empty(limit, dtype=np.float64)
    out[0] = 1.0 - LOG_SQRT_2PI
    out[1:] = out[0] - compensated_cumsum(steps)
    return out
