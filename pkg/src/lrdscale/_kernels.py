"""Hot loops of the periodic pyramid DWT.

Two interchangeable implementations compute the same thing: a numba
``@njit`` loop kernel and a vectorised numpy kernel. The active one is
chosen from the ``LRDSCALE_BACKEND`` environment variable (``numba`` or
``numpy``) at import time; ``numba`` is the default whenever numba imports.
``set_backend`` switches at run time, which the backend benchmark uses.

Layout of the flat detail buffer returned by both kernels: octave ``j``
occupies ``out[n - n >> (j-1) : n - n >> j]``, i.e. octave 1 first.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

BACKENDS = ("numba", "numpy")


def _periodic_pyramid_numpy(x, h, g, j_max):
    n = x.shape[0]
    L = h.shape[0]
    out = np.empty(n - (n >> j_max))
    a = x
    start = 0
    for _ in range(j_max):
        m = a.shape[0]
        half = m // 2
        base = 2 * np.arange(half)
        sa = np.zeros(half)
        sd = np.zeros(half)
        # accumulate tap by tap, same order as the loop kernel (no BLAS reassociation)
        for i in range(L):
            v = a[(base + i) % m]
            sa += h[i] * v
            sd += g[i] * v
        out[start:start + half] = sd
        a = sa
        start += half
    return out, a


if HAVE_NUMBA:

    @njit(cache=True)
    def _periodic_pyramid_numba(x, h, g, j_max):
        n = x.shape[0]
        L = h.shape[0]
        out = np.empty(n - (n >> j_max))
        a = x.copy()
        start = 0
        for _ in range(j_max):
            m = a.shape[0]
            half = m // 2
            nxt = np.empty(half)
            for k in range(half):
                sa = 0.0
                sd = 0.0
                base = 2 * k
                for i in range(L):
                    t = base + i
                    while t >= m:
                        t -= m
                    v = a[t]
                    sa += h[i] * v
                    sd += g[i] * v
                nxt[k] = sa
                out[start + k] = sd
            a = nxt
            start += half
        return out, a

else:  # pragma: no cover
    _periodic_pyramid_numba = None


def _initial_backend() -> str:
    want = os.environ.get("LRDSCALE_BACKEND", "numba").strip().lower()
    if want not in BACKENDS:
        raise ValueError(f"LRDSCALE_BACKEND must be one of {BACKENDS}, got {want!r}")
    if want == "numba" and not HAVE_NUMBA:
        return "numpy"
    return want


_backend = _initial_backend()


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in BACKENDS:
        raise ValueError(f"backend must be one of {BACKENDS}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not importable")
    _backend = name


def periodic_pyramid(x: np.ndarray, h: np.ndarray, g: np.ndarray, j_max: int):
    """Run ``j_max`` filter-and-decimate steps with circular indexing.

    Returns ``(flat_details, approximation)``; see the module docstring for
    the buffer layout. The numpy kernel gathers one fancy-indexed copy
    per tap; the numba kernel is a plain triple loop.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    h = np.ascontiguousarray(h, dtype=np.float64)
    g = np.ascontiguousarray(g, dtype=np.float64)
    if _backend == "numba":
        return _periodic_pyramid_numba(x, h, g, j_max)
    return _periodic_pyramid_numpy(x, h, g, j_max)
