"""Both sides of the floor-log identities and the prime counting estimators.

Scalar functions evaluate one x directly from its definition. The ``*_table``
and ``*_batch`` functions cover every integer in a range at once by reusing
prefix data; the test suite checks each batch route against the scalar one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from primelab.exact_math import (
    LOG2,
    compensated_cumsum,
    compensated_sum,
    floor_log2_ratio,
    floor_log2_ratios,
    frac_log2_ratios,
)
from primelab.sieve import OmegaTable, PrimeTable, TableRangeError, pi_of, theta_of

# Dusart (2010) bounds as quoted, with the validity thresholds as quoted.
DUSART_LOWER_THRESHOLD = 88783
DUSART_UPPER_THRESHOLD = 2953652287
DUSART_LOWER_COEFF = 2.0
DUSART_UPPER_COEFF = 2.334


@dataclass(frozen=True)
class IdentityRow:
    x: int
    lhs: int | float
    rhs: int | float
    diff: float
    exact_match: bool


@dataclass
class IdentityReport:
    identity_name: str
    rows: list[IdentityRow] = field(default_factory=list)

    @property
    def mismatch_count(self) -> int:
        return sum(not r.exact_match for r in self.rows)


@dataclass(frozen=True)
class EstimateRecord:
    x: int
    pi: int
    theta: float
    estimate: float
    raw_error: float
    scaled_error: float

    @classmethod
    def from_estimate(cls, x: int, pi: int, theta: float, estimate: float) -> "EstimateRecord":
        raw = pi - estimate
        return cls(x, pi, theta, estimate, raw, raw * math.log(x))


@dataclass(frozen=True)
class HGTTriple:
    h: float
    g: int
    t: int


@dataclass(frozen=True)
class DusartResult:
    x: int
    pi: int
    lower_bound: float
    upper_bound: float
    lower_holds: bool | None  # None: x below the quoted threshold
    upper_holds: bool | None
    lower_margin: float
    upper_margin: float


def _need(x: int, lo: int) -> int:
    x = int(x)
    if x < lo:
        raise ValueError(f"x must be >= {lo}, got {x}")
    return x


def _cover(x: int, table) -> None:
    if table is not None and x > table.limit:
        raise TableRangeError(f"x={x} exceeds table limit {table.limit}")


# -- floor sums -------------------------------------------------------------


def odd_floor_sum(x: int, omega_unused=None) -> int:
    """Sum of floor(log2(x/n)) over odd n <= x, as an exact integer."""
    x = _need(x, 1)
    ns = np.arange(1, x + 1, 2, dtype=np.int64)
    return int(floor_log2_ratios(x, ns).sum())


def rhs_general(x: int) -> int:
    """(x-1)/2 + (1+(-1)^x)/4 in integer arithmetic; equals x // 2."""
    x = _need(x, 1)
    num = 2 * (x - 1) + 1 + (1 if x % 2 == 0 else -1)
    q, r = divmod(num, 4)
    assert r == 0
    return q


def count_evens(x: int) -> int:
    """Even integers in [1, x], counted by enumeration."""
    return len(range(2, int(x) + 1, 2))


def floor_sum_table(ns: np.ndarray, limit: int) -> np.ndarray:
    """S[x] = sum over n in ns with n <= x of floor(log2(x/n)), for x = 0..limit.

    floor(log2(x/n)) counts the j >= 1 with n * 2**j <= x, so each pair (n, j)
    is an event at n * 2**j that adds one to every later x.
    """
    ns = np.asarray(ns, dtype=np.int64)
    m = ns[ns <= limit // 2] * 2
    events = []
    while m.size:
        events.append(m)
        m = m[m <= limit // 2] * 2
    counts = np.zeros(limit + 1, dtype=np.int64)
    if events:
        counts = np.bincount(np.concatenate(events), minlength=limit + 1).astype(np.int64)
    return np.cumsum(counts)


def floor_log2_ratios_table(q: np.ndarray) -> np.ndarray:
    """floor(log2 q) for positive integers q, exactly."""
    return (np.frexp(np.asarray(q, dtype=np.float64))[1] - 1).astype(np.int64)


def odd_floor_sum_table(limit: int) -> np.ndarray:
    """``odd_floor_sum`` for every x in [0, limit] (index = x)."""
    return floor_sum_table(np.arange(1, limit + 1, 2, dtype=np.int64), limit)


# -- fractional-part sums ---------------------------------------------------


def frac_sum(x: int, filter: str = "all") -> float:
    """Compensated sum of {log2(x/n)} over n <= x (``all``) or odd n only (``odd_only``)."""
    x = _need(x, 1)
    if filter == "all":
        ns = np.arange(1, x + 1, dtype=np.int64)
    elif filter == "odd_only":
        ns = np.arange(1, x + 1, 2, dtype=np.int64)
    else:
        raise ValueError(f"unknown filter {filter!r}")
    return compensated_sum(frac_log2_ratios(x, ns))


def frac_sum_main_terms(x: int) -> float:
    x = _need(x, 1)
    return x / LOG2 - x - math.log(x) / math.log(4.0)


def frac_sum_table(limit: int, filter: str = "all") -> np.ndarray:
    """``frac_sum`` for every x in [1, limit]; entry i is x = i + 1.

    Uses sum{.} = sum log2(x/n) - sum floor(.), where the real sum is
    count(x) * log x minus a running compensated sum of log n.
    """
    step = {"all": 1, "odd_only": 2}.get(filter)
    if step is None:
        raise ValueError(f"unknown filter {filter!r}")
    xs = np.arange(1, limit + 1, dtype=np.int64)
    ns = np.arange(1, limit + 1, step, dtype=np.int64)
    logs = np.zeros(limit + 1)
    logs[ns] = np.log(ns.astype(np.float64))
    log_prefix = compensated_cumsum(logs)[1:]
    counts = (xs + (step - 1)) // step
    floors = floor_sum_table(ns, limit)[1:]
    return (counts * np.log(xs.astype(np.float64)) - log_prefix) / LOG2 - floors


# -- H, G, T and the exact formula -------------------------------------------


def hgt(x: int, primes: PrimeTable, omegas: OmegaTable) -> HGTTriple:
    """H: fractional parts over primes; G: floor-logs over 1 and odd Omega >= 2; T: the p = 2 floor."""
    x = _need(x, 2)
    _cover(x, primes)
    _cover(x, omegas)
    c = pi_of(primes, x)
    h = compensated_sum(frac_log2_ratios(x, primes.primes[:c], primes.log_primes[:c]))
    oc = omegas.odd_composites
    m = int(np.searchsorted(oc, x, side="right"))
    g = floor_log2_ratio(x, 1).k + int(floor_log2_ratios(x, oc[:m]).sum())
    t = floor_log2_ratio(x, 2).k
    return HGTTriple(h=h, g=g, t=t)


def _parity_term(x: int) -> float:
    return (1 + (-1) ** (x % 2)) * LOG2 / 4


def pi_exact_formula(x: int, primes: PrimeTable, omegas: OmegaTable) -> float:
    x = _need(x, 2)
    tr = hgt(x, primes, omegas)
    num = math.fsum(
        [
            (x - 1) * 0.5 * LOG2,
            theta_of(primes, x),
            LOG2 * (tr.h - tr.g + tr.t),
            _parity_term(x),
        ]
    )
    return num / math.log(x)


@dataclass(frozen=True)
class PiFormulaBatch:
    """Arrays over x = 2..limit (entry i is x = i + 2)."""

    x: np.ndarray
    pi: np.ndarray
    h: np.ndarray
    g: np.ndarray
    t: np.ndarray
    value: np.ndarray


def pi_formula_batch(limit: int, primes: PrimeTable, omegas: OmegaTable) -> PiFormulaBatch:
    """The exact formula at every x in [2, limit] in O(limit log limit) total.

    Direct evaluation costs pi(x) fractional parts per x. Here H reuses prefix
    data over the primes: H(x) = (pi(x) log x - theta(x)) / log 2 - K(x), where
    K(x) = sum_{p <= x} floor(log2(x/p)) comes from one event table over all
    (p, 2**j) pairs. G's odd part comes from the same event table over the odd
    Omega >= 2 integers.
    """
    limit = _need(limit, 2)
    _cover(limit, primes)
    _cover(limit, omegas)
    xs = np.arange(2, limit + 1, dtype=np.int64)
    lx = np.log(xs.astype(np.float64))
    pi = primes.pi_many(xs)
    theta = primes.theta_many(xs)
    k_primes = floor_sum_table(primes.primes[primes.primes <= limit], limit)[2:]
    h = (pi * lx - theta) / LOG2 - k_primes
    oc = omegas.odd_composites
    g = floor_log2_ratios_table(xs) + floor_sum_table(oc[oc <= limit], limit)[2:]
    t = floor_log2_ratios_table(xs // 2)
    parity = np.where(xs % 2 == 0, LOG2 / 2, 0.0)
    num = (xs - 1) * (0.5 * LOG2) + theta + LOG2 * (h - g + t) + parity
    return PiFormulaBatch(xs, pi, h, g, t, num / lx)


# -- estimators --------------------------------------------------------------


def s2_odd_log_sum(x: int, omegas: OmegaTable) -> float:
    """Sum of log2(x/n), real valued, over odd n <= x with Omega(n) >= 2."""
    x = _need(x, 1)
    _cover(x, omegas)
    oc = omegas.odd_composites
    m = int(np.searchsorted(oc, x, side="right"))
    return compensated_sum((math.log(x) - omegas.log_odd_composites[:m]) / LOG2)


def big_theta(x: int, primes: PrimeTable, omegas: OmegaTable) -> float:
    x = _need(x, 2)
    lx = math.log(x)
    return theta_of(primes, x) / lx + x / (2 * lx) - 0.25 - LOG2 / lx * s2_odd_log_sum(x, omegas)


def nu(x: int, omegas: OmegaTable) -> float:
    x = _need(x, 2)
    lx = math.log(x)
    return 3 * x / (2 * lx) - 0.25 - LOG2 / lx * s2_odd_log_sum(x, omegas)


def r_estimate(x: int, omegas: OmegaTable) -> float:
    x = _need(x, 2)
    lx = math.log(x)
    return x / (2 * lx) - 0.25 - LOG2 / lx * s2_odd_log_sum(x, omegas)


def eta_estimate(x: int, omegas: OmegaTable) -> float:
    x = _need(x, 2)
    return x / 2 - math.log(x) / 4 - LOG2 * s2_odd_log_sum(x, omegas)


# -- closed-form integrals ---------------------------------------------------


def integral_theta_closed(x: int, primes: PrimeTable) -> float:
    """Integral of theta(t) / (t log^2 t) over [2, x], summed jump by jump.

    theta jumps by log p at each prime, and the antiderivative of
    1 / (t log^2 t) is -1 / log t, so each prime contributes 1 - log p / log x.
    """
    x = _need(x, 2)
    _cover(x, primes)
    c = pi_of(primes, x)
    return compensated_sum(1.0 - primes.log_primes[:c] / math.log(x))


def integral_pi_closed(x: int, primes: PrimeTable) -> float:
    """Integral of pi(t) / t over [2, x]: each prime contributes log x - log p."""
    x = _need(x, 2)
    _cover(x, primes)
    c = pi_of(primes, x)
    return compensated_sum(math.log(x) - primes.log_primes[:c])


# -- Dusart ------------------------------------------------------------------


def dusart_bounds(x) -> tuple[np.ndarray, np.ndarray]:
    """(lower, upper) bound values; works on scalars or arrays."""
    x = np.asarray(x, dtype=np.float64)
    lx = np.log(x)
    base = x / lx + x / lx**2
    return base + DUSART_LOWER_COEFF * x / lx**3, base + DUSART_UPPER_COEFF * x / lx**3


def dusart_check(x: int, primes: PrimeTable) -> DusartResult:
    x = _need(x, 2)
    _cover(x, primes)
    p = pi_of(primes, x)
    lo, up = (float(v) for v in dusart_bounds(x))
    lower_margin = p - lo
    upper_margin = up - p
    return DusartResult(
        x=x,
        pi=p,
        lower_bound=lo,
        upper_bound=up,
        lower_holds=(lower_margin >= 0) if x >= DUSART_LOWER_THRESHOLD else None,
        upper_holds=(upper_margin >= 0) if x >= DUSART_UPPER_THRESHOLD else None,
        lower_margin=lower_margin,
        upper_margin=upper_margin,
    )
