"""Daubechies filters and the decimated (Mallat) pyramid transform.

Phase convention, pinned for golden tests: a single analysis step maps an
approximation ``a`` of length ``m`` to

    a'(k) = sum_i h[i] * a[(2k + i) mod m]
    d(k)  = sum_i g[i] * a[(2k + i) mod m]

with ``g[i] = (-1)**i * h[2N-1-i]``. For Haar this gives
``d(1, k) = (x[2k] - x[2k+1]) / sqrt(2)``. Because the filter window runs
forward from ``2k``, every coefficient touched by the circular wrap sits at
the *end* of its octave.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, comb, sqrt
from typing import Literal

import numpy as np

from . import _kernels

BoundaryPolicy = Literal["periodic", "interior"]
MAX_MOMENTS = 10


@dataclass(frozen=True)
class WaveletFilter:
    h: np.ndarray
    g: np.ndarray
    vanishing_moments: int

    @property
    def length(self) -> int:
        return self.h.size


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def daubechies_filter(N: int = 3) -> WaveletFilter:
    """Extremal-phase Daubechies filter with ``N`` vanishing moments.

    Built by spectral factorisation: the half-band polynomial
    ``P(y) = sum_k C(N-1+k, k) y^k`` (with ``y = sin^2(w/2)``) is factored and
    the roots inside the unit circle are kept, giving the minimum-phase
    ordering used by the usual db tables.
    """
    if not isinstance(N, (int, np.integer)) or not 1 <= N <= MAX_MOMENTS:
        raise ValueError(f"vanishing moments must be an integer in [1, {MAX_MOMENTS}], got {N!r}")
    N = int(N)
    poly = np.array([1.0 + 0j])
    for _ in range(N):
        poly = np.convolve(poly, [1.0, 1.0])
    if N > 1:
        p_coeffs = [comb(N - 1 + k, k) for k in range(N)][::-1]
        for y in np.roots(p_coeffs):
            # z + 1/z = 2 - 4y; keep the root inside the unit circle
            z_pair = np.roots([1.0, -(2.0 - 4.0 * y), 1.0])
            z = z_pair[np.argmin(np.abs(z_pair))]
            poly = np.convolve(poly, [1.0, -z])
    h = poly.real.copy()
    h *= sqrt(2.0) / h.sum()
    g = np.array([(-1) ** i * h[2 * N - 1 - i] for i in range(2 * N)])
    h.setflags(write=False)
    g.setflags(write=False)
    return WaveletFilter(h=h, g=g, vanishing_moments=N)


def boundary_affected(j: int, N: int) -> int:
    """Number of octave-``j`` coefficients whose filter support wraps around.

    The cascade filter at octave ``j`` spans ``(2**j - 1)(2N - 1) + 1``
    samples; counting the starting offsets ``2**j * k`` that overrun the end
    simplifies to ``ceil((2N - 2)(1 - 2**-j))``.
    """
    return ceil((2 * N - 2) * (1.0 - 2.0 ** (-j)) - 1e-12)


def coeff_count(n: int, j: int, policy: BoundaryPolicy = "periodic", N: int = 3) -> int:
    """Detail-coefficient count ``n_j`` at octave ``j`` for a length-``n`` input.

    ``periodic`` returns ``n / 2**j``. ``interior`` drops the coefficients
    contaminated by the circular wrap (never below zero).
    """
    if not _is_pow2(n):
        raise ValueError(f"length {n} is not a power of two")
    J = n.bit_length() - 1
    if not 1 <= j <= J:
        raise ValueError(f"octave {j} outside [1, {J}] for n={n}")
    nj = n >> j
    if policy == "periodic":
        return nj
    if policy == "interior":
        return max(nj - boundary_affected(j, N), 0)
    raise ValueError(f"unknown boundary policy {policy!r}")


@dataclass(frozen=True)
class DetailPyramid:
    """Detail coefficients per octave plus the final approximation.

    Under the ``interior`` policy ``details[j]`` holds only the
    wrap-free coefficients, so the energy identity holds for ``periodic``
    pyramids only.
    """

    details: dict[int, np.ndarray]
    approx: np.ndarray
    n: int
    j_max: int
    boundary_policy: BoundaryPolicy
    vanishing_moments: int

    @property
    def n_j(self) -> dict[int, int]:
        return {j: d.size for j, d in self.details.items()}

    def energy(self) -> float:
        return float(sum(np.dot(d, d) for d in self.details.values()) + np.dot(self.approx, self.approx))


def dwt_pyramid(
    x,
    f: WaveletFilter | None = None,
    j_max: int | None = None,
    boundary: BoundaryPolicy = "periodic",
) -> DetailPyramid:
    """Decimated pyramid DWT of a power-of-two length signal.

    ``j_max`` defaults to ``log2(n)``; octaves are computed sequentially,
    each from the previous approximation.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("input must be one-dimensional")
    n = x.size
    if not _is_pow2(n) or n < 2:
        raise ValueError(f"length {n} is not a power of two >= 2; apply dyadic_window first")
    J = n.bit_length() - 1
    if j_max is None:
        j_max = J
    if not 1 <= j_max <= J:
        raise ValueError(f"j_max={j_max} outside [1, {J}] for n={n}")
    if boundary not in ("periodic", "interior"):
        raise ValueError(f"unknown boundary policy {boundary!r}")
    if f is None:
        f = daubechies_filter()

    flat, approx = _kernels.periodic_pyramid(x, f.h, f.g, j_max)
    details = {}
    start = 0
    for j in range(1, j_max + 1):
        nj = n >> j
        d = flat[start:start + nj]
        if boundary == "interior":
            d = d[:coeff_count(n, j, "interior", f.vanishing_moments)]
        d = d.copy()
        d.setflags(write=False)
        details[j] = d
        start += nj
    approx.setflags(write=False)
    return DetailPyramid(details, approx, n, j_max, boundary, f.vanishing_moments)
