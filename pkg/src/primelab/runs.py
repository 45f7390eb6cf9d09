"""Verification runs, error scans, point tables and their CSV/JSON export."""
from __future__ import annotations

import io
import json
import math
import time
from dataclasses import dataclass, fields
from typing import Sequence

import numpy as np

from primelab import identities as ids
from primelab.sieve import OmegaTable, PrimeTable, build_omega_table, build_prime_table, pi_of, theta_of

DEFAULT_SIEVE_BUDGET = 10**7
DEFAULT_SCAN_POINTS = 25

# |pi_exact_formula(x) - pi(x)| must stay below this for a row to match.
PI_FORMULA_TOL = 1e-6
# Relative tolerance for the per-prime closed-form integrals.
INTEGRAL_REL_TOL = 1e-9
# Tolerance, relative to max(1, |rhs|), for algebraic estimator cross-checks.
ALGEBRAIC_TOL = 1e-10
# Bound on |frac_sum(x, all) - frac_sum_main_terms(x)|: twice the largest
# residual found by direct summation over every x <= 10**4 (11.674237 at x = 8191).
FRAC_RESIDUAL_BOUND = 23.348475

VERIFY_IDENTITIES = (
    "general",
    "pi-formula",
    "frac-sum",
    "integrals",
    "theta-estimate",
    "nu",
    "r",
    "eta",
    "dusart",
)
SCAN_ESTIMATORS = ("theta-estimate", "nu", "r", "eta", "dusart")

# Identities that need the Omega table as well as the prime table.
_NEEDS_OMEGA = {"pi-formula", "theta-estimate", "nu", "r", "eta"}
_MIN_X = {"general": 1, "frac-sum": 1}

IDENTITY_COLUMNS = ("x", "lhs", "rhs", "diff", "exact_match")
ESTIMATE_COLUMNS = ("x", "pi", "theta", "estimate", "raw_error", "scaled_error")
TABLE_COLUMNS = (
    "x", "pi", "theta", "H", "G", "T", "Theta", "nu", "R", "eta",
    "integral_theta", "integral_pi",
)


class ConfigError(ValueError):
    """Invalid range, grid or identity selection."""


@dataclass(frozen=True)
class ScanConfig:
    mode: str
    identity: str
    start: int
    stop: int
    points: int | None = None  # None: every integer
    format: str = "csv"
    output_path: str | None = None  # None: standard output
    allow_large: bool = False
    sieve_budget: int = DEFAULT_SIEVE_BUDGET

    def validate(self) -> "ScanConfig":
        if self.mode not in ("verify", "scan", "table"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        known = VERIFY_IDENTITIES if self.mode == "verify" else SCAN_ESTIMATORS
        if self.mode != "table" and self.identity not in known:
            raise ConfigError(f"unknown {self.mode} target {self.identity!r}; choose from {', '.join(known)}")
        lo = _MIN_X.get(self.identity, 2)
        if self.start < lo:
            raise ConfigError(f"{self.identity} needs --from >= {lo}")
        if self.start > self.stop:
            raise ConfigError(f"empty range: from={self.start} > to={self.stop}")
        if self.points is not None and self.points < 2:
            raise ConfigError("a geometric grid needs at least 2 points")
        if self.stop > self.sieve_budget and not self.allow_large:
            raise ConfigError(
                f"to={self.stop} exceeds the sieve budget {self.sieve_budget}; pass --allow-large to override"
            )
        if self.format not in ("csv", "json"):
            raise ConfigError(f"unknown format {self.format!r}")
        return self

    def grid(self) -> np.ndarray:
        if self.points is None:
            return np.arange(self.start, self.stop + 1, dtype=np.int64)
        return geometric_grid(self.start, self.stop, self.points)


@dataclass(frozen=True)
class RunSummary:
    identity: str
    rows_evaluated: int
    mismatches: int
    max_abs_diff: float
    max_scaled_diff: float
    wall_time_seconds: float

    @property
    def ok(self) -> bool:
        return self.mismatches == 0


def geometric_grid(start: int, stop: int, points: int) -> np.ndarray:
    """``points`` log-spaced values in [start, stop], rounded to integers and deduplicated."""
    if points < 2:
        raise ConfigError("a geometric grid needs at least 2 points")
    raw = np.geomspace(start, stop, points)
    return np.unique(np.clip(np.rint(raw), start, stop).astype(np.int64))


def build_tables(config: ScanConfig, need_omega: bool | None = None):
    top = max(int(config.stop), 2)
    primes = build_prime_table(top)
    if need_omega is None:
        need_omega = config.mode == "table" or config.identity in _NEEDS_OMEGA
    omegas = build_omega_table(top, primes.primes) if need_omega else None
    return primes, omegas


# -- verify --------------------------------------------------------------------


def _rel_close(a: float, b: float, tol: float) -> tuple[float, bool]:
    d = a - b
    return d, abs(d) <= tol * max(1.0, abs(b))


def _verify_general(xs, primes, omegas):
    if _is_dense(xs):
        table = ids.odd_floor_sum_table(int(xs[-1]))
        lhs_of = lambda x: int(table[x])  # noqa: E731
    else:
        lhs_of = ids.odd_floor_sum
    for x in xs.tolist():
        lhs = lhs_of(x)
        rhs = ids.rhs_general(x)
        yield ids.IdentityRow(x, lhs, rhs, float(lhs - rhs), lhs == rhs == ids.count_evens(x))


def _verify_pi_formula(xs, primes, omegas):
    if _is_dense(xs):
        batch = ids.pi_formula_batch(int(xs[-1]), primes, omegas)
        vals = dict(zip(batch.x.tolist(), batch.value.tolist()))
        value_of = vals.__getitem__
    else:
        value_of = lambda x: ids.pi_exact_formula(x, primes, omegas)  # noqa: E731
    pis = primes.pi_many(xs).tolist()
    for x, p in zip(xs.tolist(), pis):
        v = value_of(x)
        yield ids.IdentityRow(x, v, p, v - p, round(v) == p and abs(v - p) < PI_FORMULA_TOL)


def _verify_frac_sum(xs, primes, omegas):
    if _is_dense(xs):
        table = ids.frac_sum_table(int(xs[-1]))
        value_of = lambda x: float(table[x - 1])  # noqa: E731
    else:
        value_of = ids.frac_sum
    for x in xs.tolist():
        lhs = value_of(x)
        rhs = ids.frac_sum_main_terms(x)
        d = lhs - rhs
        yield ids.IdentityRow(x, lhs, rhs, d, abs(d) <= FRAC_RESIDUAL_BOUND)


def _verify_integrals(xs, primes, omegas):
    pis = primes.pi_many(xs).tolist()
    thetas = primes.theta_many(xs).tolist()
    for x, p, th in zip(xs.tolist(), pis, thetas):
        lx = math.log(x)
        lhs = ids.integral_theta_closed(x, primes)
        d, ok = _rel_close(lhs, p - th / lx, INTEGRAL_REL_TOL)
        yield ids.IdentityRow(x, lhs, p - th / lx, d, ok)
        lhs = ids.integral_pi_closed(x, primes)
        d, ok = _rel_close(lhs, p * lx - th, INTEGRAL_REL_TOL)
        yield ids.IdentityRow(x, lhs, p * lx - th, d, ok)


def _algebraic(pair):
    def run(xs, primes, omegas):
        for x in xs.tolist():
            lhs, rhs = pair(x, primes, omegas)
            d, ok = _rel_close(lhs, rhs, ALGEBRAIC_TOL)
            yield ids.IdentityRow(x, lhs, rhs, d, ok)

    return run


def _theta_pair(x, primes, omegas):
    lx = math.log(x)
    return ids.big_theta(x, primes, omegas) - theta_of(primes, x) / lx, ids.r_estimate(x, omegas)


def _r_pair(x, primes, omegas):
    return ids.r_estimate(x, omegas) * math.log(x), ids.eta_estimate(x, omegas)


def _eta_pair(x, primes, omegas):
    return ids.eta_estimate(x, omegas), ids.r_estimate(x, omegas) * math.log(x)


def _nu_pair(x, primes, omegas):
    lx = math.log(x)
    theta = theta_of(primes, x)
    return ids.nu(x, omegas), ids.big_theta(x, primes, omegas) + (x - theta) / lx


def _verify_dusart(xs, primes, omegas):
    pis = primes.pi_many(xs)
    lower, upper = ids.dusart_bounds(xs)
    for x, p, lo, up in zip(xs.tolist(), pis.tolist(), lower.tolist(), upper.tolist()):
        ok = True
        if x >= ids.DUSART_LOWER_THRESHOLD:
            ok = p >= lo
        if x >= ids.DUSART_UPPER_THRESHOLD:
            ok = ok and p <= up
        yield ids.IdentityRow(x, p, lo, p - lo, ok)


_VERIFIERS = {
    "general": _verify_general,
    "pi-formula": _verify_pi_formula,
    "frac-sum": _verify_frac_sum,
    "integrals": _verify_integrals,
    "theta-estimate": _algebraic(_theta_pair),
    "r": _algebraic(_r_pair),
    "eta": _algebraic(_eta_pair),
    "nu": _algebraic(_nu_pair),
    "dusart": _verify_dusart,
}


def _is_dense(xs: np.ndarray) -> bool:
    return len(xs) > 1 and int(xs[-1] - xs[0]) + 1 == len(xs)


def run_verify(
    config: ScanConfig, primes: PrimeTable, omegas: OmegaTable | None
) -> tuple[RunSummary, ids.IdentityReport]:
    config.validate()
    if config.mode != "verify":
        raise ConfigError("run_verify needs mode='verify'")
    t0 = time.perf_counter()
    xs = config.grid()
    report = ids.IdentityReport(config.identity, list(_VERIFIERS[config.identity](xs, primes, omegas)))
    diffs = np.array([abs(r.diff) for r in report.rows]) if report.rows else np.zeros(1)
    scales = np.array([max(1.0, abs(float(r.rhs))) for r in report.rows]) if report.rows else np.ones(1)
    summary = RunSummary(
        identity=config.identity,
        rows_evaluated=len(report.rows),
        mismatches=report.mismatch_count,
        max_abs_diff=float(diffs.max()),
        max_scaled_diff=float((diffs / scales).max()),
        wall_time_seconds=time.perf_counter() - t0,
    )
    return summary, report


# -- scan ----------------------------------------------------------------------


def _estimate(label: str, x: int, theta: float, primes, omegas) -> float:
    lx = math.log(x)
    if label == "theta-estimate":
        return ids.big_theta(x, primes, omegas)
    if label == "nu":
        return ids.nu(x, omegas)
    if label == "r":
        # pi - estimate is then the integral minus R
        return theta / lx + ids.r_estimate(x, omegas)
    if label == "eta":
        # scaled_error is then the integral of pi(t)/t minus eta
        return (theta + ids.eta_estimate(x, omegas)) / lx
    if label == "dusart":
        return float(ids.dusart_bounds(x)[0])
    raise ConfigError(f"unknown estimator {label!r}")


def run_scan(
    config: ScanConfig, primes: PrimeTable, omegas: OmegaTable | None
) -> tuple[RunSummary, list[ids.EstimateRecord]]:
    config.validate()
    if config.mode != "scan":
        raise ConfigError("run_scan needs mode='scan'")
    t0 = time.perf_counter()
    xs = config.grid()
    pis = primes.pi_many(xs).tolist()
    thetas = primes.theta_many(xs).tolist()
    records = [
        ids.EstimateRecord.from_estimate(x, p, th, _estimate(config.identity, x, th, primes, omegas))
        for x, p, th in zip(xs.tolist(), pis, thetas)
    ]
    mismatches = 0
    if config.identity == "dusart":
        mismatches = sum(r.x >= ids.DUSART_LOWER_THRESHOLD and r.raw_error < 0 for r in records)
    summary = RunSummary(
        identity=config.identity,
        rows_evaluated=len(records),
        mismatches=mismatches,
        max_abs_diff=max((abs(r.raw_error) for r in records), default=0.0),
        max_scaled_diff=max((abs(r.scaled_error) for r in records), default=0.0),
        wall_time_seconds=time.perf_counter() - t0,
    )
    return summary, records


# -- table ---------------------------------------------------------------------


def table_rows(xs: Sequence[int], primes: PrimeTable, omegas: OmegaTable) -> list[dict]:
    rows = []
    for x in xs:
        x = int(x)
        tr = ids.hgt(x, primes, omegas)
        rows.append(
            {
                "x": x,
                "pi": pi_of(primes, x),
                "theta": theta_of(primes, x),
                "H": tr.h,
                "G": tr.g,
                "T": tr.t,
                "Theta": ids.big_theta(x, primes, omegas),
                "nu": ids.nu(x, omegas),
                "R": ids.r_estimate(x, omegas),
                "eta": ids.eta_estimate(x, omegas),
                "integral_theta": ids.integral_theta_closed(x, primes),
                "integral_pi": ids.integral_pi_closed(x, primes),
            }
        )
    return rows


# -- export --------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.12g}"


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    v = float(v)
    if not math.isfinite(v):
        return None
    return float(f"{v:.12g}")


def _rows_and_columns(report) -> tuple[str, tuple[str, ...], list[dict]]:
    if isinstance(report, ids.IdentityReport):
        rows = [{c: getattr(r, c) for c in IDENTITY_COLUMNS} for r in report.rows]
        return report.identity_name, IDENTITY_COLUMNS, rows
    report = list(report)
    if report and isinstance(report[0], dict):
        return "table", TABLE_COLUMNS, report
    names = tuple(f.name for f in fields(ids.EstimateRecord))
    return "scan", names, [{c: getattr(r, c) for c in names} for r in report]


def render_report(report, fmt: str = "csv") -> str:
    """Serialise an IdentityReport, a list of EstimateRecords or table rows."""
    name, columns, rows = _rows_and_columns(report)
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(",".join(columns) + "\n")
        for row in rows:
            buf.write(",".join(_fmt(row[c]) for c in columns) + "\n")
        return buf.getvalue()
    if fmt == "json":
        payload = {
            "name": name,
            "columns": list(columns),
            "rows": [{c: _json_value(row[c]) for c in columns} for row in rows],
        }
        return json.dumps(payload, indent=1) + "\n"
    raise ConfigError(f"unknown format {fmt!r}")


def export_report(report, fmt: str, path) -> None:
    """Write ``render_report`` output to ``path``; raises OSError if unwritable."""
    text = render_report(report, fmt)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
