"""Estimators and significance tests for CHSH and no-signaling.

Delta order everywhere is (dP_0*, dP_1*, dP_*0, dP_*1) with

    dP_a* = P_a0(+*) - P_a1(+*)      (does A's marginal depend on b?)
    dP_*b = P_0b(*+) - P_1b(*+)      (does B's marginal depend on a?)

Standard errors use the per-setting form sum P(1-P)/N_setting, which is the
usual N sigma^2 = sum_b P(+*)P(-*) when every setting has the same N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.stats import rankdata

from .counts import CountsTable, sum_tables

DEFAULT_LOOK_ELSEWHERE = 127 * 8
SIGNIFICANCE_Z = 5.0
DELTA_NAMES = ("0*", "1*", "*0", "*1")
CHSH_SIGNS = np.array([[1, -1], [-1, -1]])

_SQRT_PI = math.sqrt(math.pi)


class StatsError(ValueError):
    pass


class DegenerateCountsError(StatsError):
    """A setting has no trials."""


class ZeroVarianceError(StatsError):
    """Deterministic counts; the Gaussian error model has nothing to say."""


# ----------------------------------------------------------------------------
# complementary error function

def _erfc_series(x: float) -> float:
    # erf(x) = 2x/sqrt(pi) exp(-x^2) sum_n (2x^2)^n / (1*3*...*(2n+1)); all terms positive
    term = 1.0
    total = 1.0
    two_x2 = 2 * x * x
    n = 0
    while term > 1e-17 * total:
        n += 1
        term *= two_x2 / (2 * n + 1)
        total += term
    return 1.0 - 2 * x / _SQRT_PI * math.exp(-x * x) * total


def _erfc_cf(x: float) -> float:
    # erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), modified Lentz
    tiny = 1e-300
    f = x
    c = x
    d = 0.0
    for n in range(1, 500):
        a = n / 2
        d = x + a * d
        d = 1.0 / (d if d != 0 else tiny)
        c = x + a / c
        if c == 0:
            c = tiny
        delta = c * d
        f *= delta
        if abs(delta - 1) < 1e-16:
            break
    return math.exp(-x * x) / _SQRT_PI / f


def erfc(x: float) -> float:
    """Complementary error function, relatively accurate deep into the tail."""
    x = float(x)
    if math.isnan(x):
        return math.nan
    if x < 0:
        return 2.0 - erfc(-x)
    if x > 27.3:  # exp(-x^2) underflows
        return 0.0
    if x < 2.5:
        return _erfc_series(x)
    return _erfc_cf(x)


def p_value(delta: float, sigma: float) -> float:
    """Two-sided Gaussian tail probability of |delta| at standard error sigma."""
    if not sigma > 0:
        raise StatsError(f"sigma must be positive, got {sigma}")
    return erfc(abs(delta) / (math.sqrt(2) * sigma))


def bonferroni(p: float, m: int = DEFAULT_LOOK_ELSEWHERE) -> float:
    if m < 1:
        raise StatsError("number of comparisons must be at least 1")
    return min(1.0, m * p)


# ----------------------------------------------------------------------------
# estimators

def _counts(table) -> np.ndarray:
    c = table.counts if isinstance(table, CountsTable) else np.asarray(table)
    if c.shape != (2, 2, 4):
        raise StatsError(f"counts must have shape (2, 2, 4), got {c.shape}")
    if np.any(c.sum(axis=2) <= 0):
        raise DegenerateCountsError("every setting needs at least one trial")
    return c


def marginals(table) -> tuple[np.ndarray, np.ndarray]:
    """P(+*)[a, b] and P(*+)[a, b]."""
    c = _counts(table)
    n = c.sum(axis=2)
    return (c[..., 0] + c[..., 1]) / n, (c[..., 0] + c[..., 2]) / n


def delta_p(table, exact: bool = False):
    """(dP_0*, dP_1*, dP_*0, dP_*1), from integer counts.

    With ``exact=True`` the four deltas are returned as Fractions; otherwise
    they are rounded to float only after the exact difference is formed.
    """
    c = np.asarray(_counts(table), dtype=object)
    n = c.sum(axis=2)
    pa = [[Fraction(int(c[a, b, 0] + c[a, b, 1]), int(n[a, b])) for b in (0, 1)] for a in (0, 1)]
    pb = [[Fraction(int(c[a, b, 0] + c[a, b, 2]), int(n[a, b])) for b in (0, 1)] for a in (0, 1)]
    deltas = [pa[0][0] - pa[0][1], pa[1][0] - pa[1][1], pb[0][0] - pb[1][0], pb[0][1] - pb[1][1]]
    if exact:
        return deltas
    return np.array([float(d) for d in deltas])


def correlators(table) -> np.ndarray:
    """<AB>[a, b] with + -> +1 and - -> -1."""
    c = _counts(table)
    return (c[..., 0] - c[..., 1] - c[..., 2] + c[..., 3]) / c.sum(axis=2)


def sigma_marginals(table) -> np.ndarray:
    """Standard errors (s_0*, s_1*, s_*0, s_*1) of the four deltas."""
    c = _counts(table)
    n = c.sum(axis=2)
    pa, pb = marginals(c)
    var_a = pa * (1 - pa) / n  # [a, b]
    var_b = pb * (1 - pb) / n
    var = np.array([var_a[0].sum(), var_a[1].sum(), var_b[:, 0].sum(), var_b[:, 1].sum()])
    if np.any(var <= 0):
        raise ZeroVarianceError("deterministic marginals: zero variance for "
                                + ", ".join(n for n, v in zip(DELTA_NAMES, var) if v <= 0))
    return np.sqrt(var)


def sigma_chsh(table) -> float:
    c = _counts(table)
    var = float(np.sum((1 - correlators(c) ** 2) / c.sum(axis=2)))
    if var <= 0:
        raise ZeroVarianceError("deterministic correlators: zero CHSH variance")
    return math.sqrt(var)


@dataclass(frozen=True)
class CHSHReport:
    value: float
    sigma: float | None
    z: float | None
    correlators: np.ndarray
    signs: np.ndarray = field(default_factory=lambda: CHSH_SIGNS.copy())


def chsh(table) -> CHSHReport:
    corr = correlators(table)
    value = float(np.sum(CHSH_SIGNS * corr))
    try:
        sigma = sigma_chsh(table)
    except ZeroVarianceError:
        sigma = None
    z = (value - 2.0) / sigma if sigma else None
    return CHSHReport(value, sigma, z, corr)


@dataclass(frozen=True)
class NoSigReport:
    deltas: np.ndarray
    sigmas: np.ndarray
    z: np.ndarray
    p_raw: np.ndarray
    p_corrected: np.ndarray
    max_abs_z: float
    p_corrected_max: float
    m: int

    @property
    def significant(self) -> np.ndarray:
        return np.abs(self.z) > SIGNIFICANCE_Z


def nosig_report(table, m: int = DEFAULT_LOOK_ELSEWHERE) -> NoSigReport:
    deltas = delta_p(table)
    sigmas = sigma_marginals(table)
    z = deltas / sigmas
    p_raw = np.array([p_value(d, s) for d, s in zip(deltas, sigmas)])
    p_corr = np.array([bonferroni(p, m) for p in p_raw])
    k = int(np.argmax(np.abs(z)))
    return NoSigReport(deltas, sigmas, z, p_raw, p_corr, float(abs(z[k])), float(p_corr[k]), m)


# ----------------------------------------------------------------------------
# series and cross-pair analysis

@dataclass(frozen=True)
class PerJobSeries:
    jobs: list
    deltas: np.ndarray  # (n_jobs, 4)
    aggregate: np.ndarray  # (4,) deltas of the summed counts


def per_job(series) -> PerJobSeries:
    series = list(series)
    if not series:
        raise StatsError("empty job series")
    first = series[0]
    for t in series[1:]:
        if t.pair != first.pair or t.test != first.test:
            raise StatsError("per-job series mixes different pairs or tests")
    deltas = np.array([delta_p(t) for t in series])
    return PerJobSeries([t.job for t in series], deltas, delta_p(sum_tables(series)))


def spearman(x, y) -> float:
    """Spearman rank correlation with mid-ranked ties; 0 if either side is constant."""
    rx = rankdata(np.asarray(x, dtype=float))
    ry = rankdata(np.asarray(y, dtype=float))
    rx -= rx.mean()
    ry -= ry.mean()
    denom = math.sqrt(float(np.dot(rx, rx) * np.dot(ry, ry)))
    return 0.0 if denom == 0 else float(np.dot(rx, ry) / denom)


def freq_correlation(reports) -> float:
    """Rank correlation between max |z| and 1/|delta f| over pairs.

    ``reports`` holds (NoSigReport or max-|z| float, delta_f_mhz) tuples.
    """
    zs, inv_df = [], []
    for rep, df in reports:
        if df is None:
            continue
        zs.append(rep.max_abs_z if isinstance(rep, NoSigReport) else float(rep))
        inv_df.append(math.inf if df == 0 else 1.0 / abs(df))
    if len(zs) < 3:
        raise StatsError("need at least 3 pairs with a frequency difference")
    return spearman(zs, inv_df)
