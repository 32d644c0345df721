"""Synthetic processes with known Hurst exponent, and their closed forms.

Seeding rule: every generator takes an integer ``seed`` and builds a
``numpy.random.Generator`` (PCG64) from it. Monte Carlo replicate ``i`` of a
run with base seed ``s`` uses ``replicate_rng(s, i)``, the ``i``-th spawned
child of ``SeedSequence(s)``. Streams therefore do not depend on the order
or the process in which replicates are executed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gamma, pi, sin

import numpy as np

from .ingest import ReturnSeries

EIGEN_TOLERANCE = 1e-9


class EmbeddingError(RuntimeError):
    """Circulant embedding is not nonnegative-definite."""


def replicate_rng(base_seed: int, i: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(base_seed), spawn_key=(int(i),)))


def _check_hurst(H: float) -> None:
    if not 0.0 < H < 1.0:
        raise ValueError(f"Hurst exponent must lie in (0, 1), got {H}")


@dataclass(frozen=True)
class FgnSpec:
    H: float
    n: int
    sigma2: float = 1.0
    seed: int = 0

    def __post_init__(self):
        _check_hurst(self.H)
        if not self.sigma2 > 0:
            raise ValueError(f"sigma2 must be positive, got {self.sigma2}")
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n}")


def fgn_autocovariance(H: float, sigma2: float = 1.0, k=0):
    """Exact autocovariance of fractional Gaussian noise at integer lag(s) ``k``."""
    _check_hurst(H)
    k = np.abs(np.asarray(k, dtype=float))
    two_h = 2.0 * H
    out = 0.5 * sigma2 * (np.abs(k + 1) ** two_h - 2 * k ** two_h + np.abs(k - 1) ** two_h)
    return out if out.ndim else float(out)


def tail_constant(H: float, sigma2: float = 1.0) -> float:
    """``c_gamma`` in ``gamma(k) ~ c_gamma * k**(2H - 2)`` for fGn."""
    return sigma2 * H * (2.0 * H - 1.0)


@dataclass(frozen=True)
class SpectralConstant:
    c_gamma: float
    H: float
    c_f: float


def spectral_constant(c_gamma: float, H: float) -> SpectralConstant:
    """Low-frequency spectral constant ``c_f`` for spectrum ``~ c_f |nu|**(1-2H)``.

    ``c_f = c_gamma * Gamma(2H - 1) * sin(pi - pi*H) / pi``, defined for
    ``1/2 < H < 1`` (Gamma has a pole at ``H = 1/2``).
    """
    if not 0.5 < H < 1.0:
        raise ValueError(f"spectral constant needs 0.5 < H < 1 (Gamma(2H-1) has a pole at "
                         f"H = 0.5), got {H}")
    if not c_gamma > 0:
        raise ValueError("c_gamma must be positive")
    return SpectralConstant(c_gamma, H, c_gamma * gamma(2.0 * H - 1.0) * sin(pi - pi * H) / pi)


@lru_cache(maxsize=32)
def _embedding_sqrt(H: float, n: int) -> np.ndarray:
    # first row of the 2(n-1) circulant: gamma(0..n-1), gamma(n-2..1)
    gam = fgn_autocovariance(H, 1.0, np.arange(n))
    row = np.concatenate([gam, gam[-2:0:-1]])
    lam = np.fft.rfft(row).real
    if lam.min() < -EIGEN_TOLERANCE * lam.max():
        raise EmbeddingError("embedding not nonnegative-definite")
    lam = np.clip(lam, 0.0, None)
    full = np.concatenate([lam, lam[-2:0:-1]])
    out = np.sqrt(full / row.size)
    out.setflags(write=False)
    return out


def fgn_sample(H: float, n: int, rng: np.random.Generator, sigma2: float = 1.0) -> np.ndarray:
    """One exact fGn draw by circulant embedding (Davies-Harte).

    With ``M = 2(n-1)`` and eigenvalues ``lam`` of the embedding circulant,
    the real part of ``FFT(sqrt(lam / M) * (Z1 + i Z2))`` has exactly the
    target covariance.
    """
    _check_hurst(H)
    if n < 2:
        raise ValueError("n must be >= 2")
    s = _embedding_sqrt(float(H), int(n))
    m = s.size
    z = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    x = np.fft.fft(s * z).real[:n]
    return np.sqrt(sigma2) * x


def generate_fgn(spec: FgnSpec) -> ReturnSeries:
    x = fgn_sample(spec.H, spec.n, np.random.default_rng(spec.seed), spec.sigma2)
    return ReturnSeries(x, "raw", name=f"fgn(H={spec.H:g})")


def generate_white_noise(n: int, sigma2: float = 1.0, seed: int = 0) -> ReturnSeries:
    if n < 1:
        raise ValueError("n must be >= 1")
    if not sigma2 > 0:
        raise ValueError("sigma2 must be positive")
    x = np.sqrt(sigma2) * np.random.default_rng(seed).standard_normal(n)
    return ReturnSeries(x, "raw", name="white")


def fbm_from_fgn(fgn: ReturnSeries) -> ReturnSeries:
    """Cumulative sum of an fGn sample: the fractional Brownian motion path."""
    return ReturnSeries(np.cumsum(fgn.values), "raw", name=fgn.name.replace("fgn", "fbm", 1))


def periodogram_slope(samples: np.ndarray, n_freqs: int = 32) -> float:
    """Log-log slope of the replicate-averaged periodogram at the lowest frequencies.

    ``samples`` is ``(replicates, n)``. The zero frequency is skipped; the
    slope estimates ``1 - 2H`` for a long-memory spectrum.
    """
    x = np.atleast_2d(np.asarray(samples, dtype=float))
    x = x - x.mean(axis=1, keepdims=True)
    n = x.shape[1]
    per = np.abs(np.fft.rfft(x, axis=1)[:, 1:n_freqs + 1]) ** 2 / (2 * pi * n)
    freqs = 2 * pi * np.arange(1, n_freqs + 1) / n
    slope, _ = np.polyfit(np.log(freqs), np.log(per.mean(axis=0)), 1)
    return float(slope)
