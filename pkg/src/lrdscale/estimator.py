"""Wavelet log-scale estimation of the Hurst exponent.

Pipeline: detail pyramid -> per-octave wavelet variance ``v_j`` -> bias
corrected ``y_j = log2(v_j) + g(n_j)`` with known variance ``sigma2_j`` ->
weighted line fit of ``y_j`` against ``j`` over an alignment range. The slope
is the scaling exponent ``alpha`` and ``H = (1 + alpha) / 2``.

The statistics treat the detail coefficients as independent Gaussians, so
``n_j * v_j / E[v_j]`` is chi-square with ``n_j`` degrees of freedom. This is
an idealisation: coefficients are only approximately decorrelated.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, replace
from math import log, sqrt

import numpy as np
from scipy import special, stats

from .dwt import DetailPyramid

LN2 = log(2.0)
ASYMPTOTIC_NJ = 64
MIN_FIT_POINTS = 3


class EstimationError(ValueError):
    """The requested fit cannot be computed from the diagram."""


class DegenerateOctaveWarning(UserWarning):
    """An octave had only zero details and was excluded."""


class AlignmentClampWarning(UserWarning):
    """A requested octave range was clamped to the available octaves."""


class Memory(str, enum.Enum):
    LONG = "LongMemory"
    SHORT = "ShortMemory"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class LogscalePoint:
    j: int
    n_j: int
    v_j: float
    y_j: float
    sigma2_j: float
    ci_lo: float
    ci_hi: float
    degenerate: bool = False


@dataclass(frozen=True)
class LogscaleDiagram:
    points: tuple[LogscalePoint, ...]
    confidence_level: float
    series_name: str = "series"
    wavelet_moments: int = 3

    @property
    def octaves(self) -> list[int]:
        return [p.j for p in self.points]

    @property
    def j_max(self) -> int:
        return self.points[-1].j

    def usable(self, j1: int | None = None, j2: int | None = None) -> list[LogscalePoint]:
        lo = self.points[0].j if j1 is None else j1
        hi = self.j_max if j2 is None else j2
        return [p for p in self.points if lo <= p.j <= hi and not p.degenerate]


@dataclass(frozen=True)
class HurstFit:
    alpha: float
    intercept: float
    stderr_alpha: float
    H: float
    ci_H: tuple[float, float]
    j1: int
    j2: int
    gof_p: float
    classification: Memory
    level: float
    n_points: int


def wavelet_variance(details) -> float:
    """Mean squared detail coefficient at one octave."""
    d = np.asarray(details, dtype=float)
    if d.size == 0:
        raise EstimationError("empty octave: no detail coefficients")
    return float(np.dot(d, d) / d.size)


def bias_correction(n_j) -> np.ndarray | float:
    """Additive correction removing the mean bias of ``log2`` of a chi-square average.

    ``E[log2 v] = log2 E[v] + digamma(m/2)/ln2 - log2(m/2)``, so the
    correction is the negated offset and is always positive.
    """
    m = np.asarray(n_j, dtype=float)
    out = np.log2(m / 2.0) - special.digamma(m / 2.0) / LN2
    return out if out.ndim else float(out)


def log2_variance(n_j) -> np.ndarray | float:
    """Variance of ``log2`` of an ``n_j``-term chi-square average.

    Exact trigamma value ``zeta(2, n_j/2) / ln2**2``; above ``n_j = 64`` the
    asymptotic ``2 / (n_j ln2**2)`` is used.
    """
    m = np.asarray(n_j, dtype=float)
    exact = special.zeta(2.0, m / 2.0) / LN2**2
    approx = 2.0 / (np.maximum(m, 1.0) * LN2**2)
    out = np.where(m > ASYMPTOTIC_NJ, approx, exact)
    return out if out.ndim else float(out)


def _z(level: float) -> float:
    if not 0.0 < level < 1.0:
        raise ValueError(f"confidence level must lie in (0, 1), got {level}")
    return float(stats.norm.ppf(0.5 + level / 2.0))


def logscale_diagram(
    p: DetailPyramid, level: float = 0.95, series_name: str = "series"
) -> LogscaleDiagram:
    """Build the logscale diagram from a detail pyramid.

    Octaves whose details are all zero are kept as degenerate points (NaN
    ``y_j``) and excluded from fits; a ``DegenerateOctaveWarning`` is issued.
    """
    z = _z(level)
    points = []
    for j in sorted(p.details):
        d = p.details[j]
        nj = d.size
        if nj == 0:
            warnings.warn(f"octave {j} has no usable coefficients; excluded", DegenerateOctaveWarning,
                          stacklevel=2)
            points.append(LogscalePoint(j, 0, float("nan"), float("nan"), float("nan"),
                                        float("nan"), float("nan"), degenerate=True))
            continue
        v = wavelet_variance(d)
        s2 = log2_variance(nj)
        if v == 0.0:
            warnings.warn(f"octave {j} has all-zero details; excluded", DegenerateOctaveWarning,
                          stacklevel=2)
            points.append(LogscalePoint(j, nj, 0.0, float("nan"), s2, float("nan"), float("nan"),
                                        degenerate=True))
            continue
        y = float(np.log2(v)) + bias_correction(nj)
        half = z * sqrt(s2)
        points.append(LogscalePoint(j, nj, v, y, s2, y - half, y + half))
    if sum(1 for q in points if q.n_j >= 2) < MIN_FIT_POINTS:
        raise EstimationError(f"need at least {MIN_FIT_POINTS} octaves with n_j >= 2; "
                              f"pyramid has {len(points)} octaves")
    return LogscaleDiagram(tuple(points), level, series_name, p.vanishing_moments)


def hurst_from_alpha(alpha: float) -> float:
    return (1.0 + alpha) / 2.0


def _weighted_line(js, ys, s2):
    w = 1.0 / np.asarray(s2, dtype=float)
    if not np.all(np.isfinite(w)) or np.any(w <= 0):
        raise EstimationError("weights must be finite and positive")
    sw = np.sqrt(w)
    X = np.column_stack([np.ones(len(js)), np.asarray(js, dtype=float)])
    coef, *_ = np.linalg.lstsq(X * sw[:, None], np.asarray(ys) * sw, rcond=None)
    cov = np.linalg.inv(X.T @ (X * w[:, None]))
    return coef[1], coef[0], sqrt(cov[1, 1])


def goodness_of_fit(d: LogscaleDiagram, fit: HurstFit, j1: int, j2: int) -> float:
    """Chi-square p-value of the weighted residuals of ``fit`` over ``[j1, j2]``."""
    pts = d.usable(j1, j2)
    m = len(pts)
    if m < MIN_FIT_POINTS:
        raise EstimationError(f"fewer than {MIN_FIT_POINTS} usable points in [{j1}, {j2}]")
    return _gof(pts, fit.alpha, fit.intercept)


def _gof(pts, alpha, intercept):
    js = np.array([q.j for q in pts], dtype=float)
    ys = np.array([q.y_j for q in pts])
    s2 = np.array([q.sigma2_j for q in pts])
    Q = float(np.sum((ys - (alpha * js + intercept)) ** 2 / s2))
    return float(min(max(stats.chi2.sf(Q, len(pts) - 2), 0.0), 1.0))


def classify_memory(fit: HurstFit) -> Memory:
    """Long memory needs the whole H interval above 1/2 and H below 1."""
    lo, hi = fit.ci_H
    if lo > 0.5 and fit.H < 1.0:
        return Memory.LONG
    if hi < 0.5:
        return Memory.SHORT
    return Memory.INDETERMINATE


def wls_fit(d: LogscaleDiagram, j1: int, j2: int) -> HurstFit:
    """Weighted least-squares fit of ``y_j`` on ``j`` for ``j1 <= j <= j2``.

    Weights are ``1 / sigma2_j``; the slope standard error comes from the
    known variances (no residual rescaling).
    """
    if j1 >= j2:
        raise EstimationError(f"need j1 < j2, got ({j1}, {j2})")
    pts = d.usable(j1, j2)
    if len(pts) < MIN_FIT_POINTS:
        raise EstimationError(f"fewer than {MIN_FIT_POINTS} usable points in [{j1}, {j2}]")
    alpha, intercept, se = _weighted_line([q.j for q in pts], [q.y_j for q in pts],
                                          [q.sigma2_j for q in pts])
    alpha = float(alpha)
    H = hurst_from_alpha(alpha)
    half = _z(d.confidence_level) * se / 2.0
    fit = HurstFit(alpha=alpha, intercept=float(intercept), stderr_alpha=se, H=H,
                   ci_H=(H - half, H + half), j1=j1, j2=j2,
                   gof_p=_gof(pts, alpha, float(intercept)),
                   classification=Memory.INDETERMINATE, level=d.confidence_level,
                   n_points=len(pts))
    return replace(fit, classification=classify_memory(fit))


DEFAULT_RANGE = (2, 8)


def select_alignment(
    d: LogscaleDiagram, mode: str = "fixed", j1: int = DEFAULT_RANGE[0], j2: int = DEFAULT_RANGE[1]
) -> tuple[int, int]:
    """Choose the octave range for the fit.

    ``fixed`` validates ``(j1, j2)``, clamping ``j2`` to the deepest octave
    with a warning. ``auto`` fixes ``j2`` at the deepest usable octave and
    picks the ``j1`` with the largest goodness-of-fit p-value, preferring the
    smaller ``j1`` on ties.
    """
    usable = [q.j for q in d.points if not q.degenerate]
    if len(usable) < MIN_FIT_POINTS:
        raise EstimationError(f"fewer than {MIN_FIT_POINTS} usable octaves in the diagram")
    if mode == "fixed":
        if j2 > d.j_max:
            warnings.warn(f"j2={j2} exceeds deepest octave {d.j_max}; clamped",
                          AlignmentClampWarning, stacklevel=2)
            j2 = d.j_max
        if j1 < d.points[0].j:
            raise EstimationError(f"j1={j1} is below the first octave {d.points[0].j}")
        if j1 >= j2:
            raise EstimationError(f"infeasible octave range ({j1}, {j2})")
        if len(d.usable(j1, j2)) < MIN_FIT_POINTS:
            raise EstimationError(f"fewer than {MIN_FIT_POINTS} usable points in [{j1}, {j2}]")
        return j1, j2
    if mode == "auto":
        top = usable[-1]
        best = None
        for start in usable:
            if len(d.usable(start, top)) < MIN_FIT_POINTS:
                break
            p = wls_fit(d, start, top).gof_p
            if best is None or p > best[1] + 1e-12:
                best = (start, p)
        return best[0], top
    raise ValueError(f"unknown alignment mode {mode!r}")


def estimate(
    p: DetailPyramid,
    level: float = 0.95,
    mode: str = "fixed",
    j1: int = DEFAULT_RANGE[0],
    j2: int = DEFAULT_RANGE[1],
    series_name: str = "series",
) -> tuple[LogscaleDiagram, HurstFit]:
    """Diagram, alignment selection and fit in one call."""
    diag = logscale_diagram(p, level, series_name)
    a, b = select_alignment(diag, mode, j1, j2)
    return diag, wls_fit(diag, a, b)
