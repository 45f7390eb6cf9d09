"""Prime and Omega tables built by sieving.

Both tables are built once and never grown. Query functions are pure.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import isqrt

import numpy as np

from primelab.exact_math import compensated_cumsum

# 256 KiB of bytes per segment; fits L2 on most machines.
DEFAULT_SEGMENT_SIZE = 1 << 18


class TableRangeError(ValueError):
    """A query point lies outside the range a table was built for."""


def _check_limit(limit: int) -> int:
    if isinstance(limit, bool) or int(limit) != limit:
        raise TypeError(f"limit must be an integer, got {limit!r}")
    limit = int(limit)
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    return limit


def _small_primes(n: int) -> np.ndarray:
    """Plain sieve for the base primes up to n."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    is_prime = np.ones(n + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, isqrt(n) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def segmented_primes(limit: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> np.ndarray:
    """All primes <= limit, sieving [low, high) windows of ``segment_size`` integers."""
    limit = _check_limit(limit)
    if segment_size < 2:
        raise ValueError("segment_size must be >= 2")
    base = _small_primes(isqrt(limit))
    chunks = []
    low = 2
    while low <= limit:
        high = min(low + segment_size, limit + 1)
        mask = np.ones(high - low, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= high:
                break
            start = max(p * p, -(-low // p) * p)
            mask[start - low :: p] = False
        chunks.append(np.flatnonzero(mask).astype(np.int64) + low)
        low = high
    if not chunks:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(chunks)


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """Primes up to ``limit`` with prefix sums of their logarithms.

    ``cumulative_log[i]`` is log(primes[0]) + ... + log(primes[i]). Entries
    carry roughly one ulp of error each, so consecutive differences agree with
    log(p) to within a few ulps of the running total (about 2e-9 near 1e7).
    """

    limit: int
    primes: np.ndarray
    cumulative_log: np.ndarray

    def __len__(self) -> int:
        return len(self.primes)

    @cached_property
    def log_primes(self) -> np.ndarray:
        return np.log(self.primes.astype(np.float64))

    def _check(self, x) -> None:
        if np.any(np.asarray(x) > self.limit):
            raise TableRangeError(f"x exceeds table limit {self.limit}")
        if np.any(np.asarray(x) < 1):
            raise TableRangeError("x must be >= 1")

    def pi_many(self, xs) -> np.ndarray:
        """Vectorised pi over an array of query points."""
        self._check(xs)
        return np.searchsorted(self.primes, np.asarray(xs, dtype=np.int64), side="right")

    @cached_property
    def _theta_prefix(self) -> np.ndarray:
        return np.concatenate(([0.0], self.cumulative_log))

    def theta_many(self, xs) -> np.ndarray:
        return self._theta_prefix[self.pi_many(xs)]


def build_prime_table(limit: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> PrimeTable:
    limit = _check_limit(limit)
    primes = segmented_primes(limit, segment_size)
    cumulative = compensated_cumsum(np.log(primes.astype(np.float64)))
    primes.setflags(write=False)
    cumulative.setflags(write=False)
    return PrimeTable(limit=limit, primes=primes, cumulative_log=cumulative)


def pi_of(table: PrimeTable, x: int) -> int:
    """Number of primes <= x."""
    return int(table.pi_many(int(x)))


def theta_of(table: PrimeTable, x: int) -> float:
    """Chebyshev theta: sum of log p over primes p <= x."""
    return float(table.theta_many(int(x)))


@dataclass(frozen=True, eq=False)
class OmegaTable:
    """Omega(n), prime factors counted with multiplicity, for 1 <= n <= limit.

    ``omega`` is indexed directly by n; slot 0 is unused and holds 0.
    """

    limit: int
    omega: np.ndarray

    @cached_property
    def odd_composites(self) -> np.ndarray:
        """Odd n <= limit with Omega(n) >= 2, ascending (prime powers included)."""
        odd = self.omega[1::2]
        return (2 * np.flatnonzero(odd >= 2) + 1).astype(np.int64)

    @cached_property
    def log_odd_composites(self) -> np.ndarray:
        return np.log(self.odd_composites.astype(np.float64))


def build_omega_table(limit: int, primes: np.ndarray | None = None) -> OmegaTable:
    """Omega by prime-power striding: every p**k adds one to each of its multiples.

    Primes above sqrt(limit) divide n at most once, so their contributions are
    added per cofactor m in one vectorised step instead of one stride per prime.
    """
    limit = _check_limit(limit)
    if primes is None:
        primes = segmented_primes(limit)
    primes = np.asarray(primes, dtype=np.int64)
    primes = primes[primes <= limit]
    omega = np.zeros(limit + 1, dtype=np.uint8)
    root = isqrt(limit)
    split = int(np.searchsorted(primes, root, side="right"))
    for p in primes[:split].tolist():
        pk = p
        while pk <= limit:
            omega[pk::pk] += 1
            pk *= p
    big = primes[split:]
    for m in range(1, root + 1):
        cut = int(np.searchsorted(big, limit // m, side="right"))
        if cut == 0:
            break
        omega[big[:cut] * m] += 1
    omega.setflags(write=False)
    return OmegaTable(limit=limit, omega=omega)


def omega_of(table: OmegaTable, n: int) -> int:
    n = int(n)
    if not 1 <= n <= table.limit:
        raise TableRangeError(f"n={n} outside [1, {table.limit}]")
    return int(table.omega[n])
