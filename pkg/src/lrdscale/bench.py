"""Monte Carlo benchmark of the estimator on synthetic fGn."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .dwt import daubechies_filter, dwt_pyramid
from .estimator import Memory, estimate
from .synth import fgn_sample, replicate_rng


@dataclass(frozen=True)
class BenchRow:
    H: float
    reps: int
    mean_H: float
    bias: float
    rmse: float
    coverage: float
    mean_gof_p: float
    frac_long: float
    frac_short: float

    def as_dict(self) -> dict:
        return asdict(self)


def parse_grid(text: str) -> list[float]:
    """``"0.5:0.9:0.1"`` (inclusive) or ``"0.6,0.8"``."""
    text = text.strip()
    if ":" in text:
        parts = [float(t) for t in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
            raise ValueError(f"grid must be start:stop:step with step > 0, got {text!r}")
        start, stop, step = parts
        count = int(round((stop - start) / step)) + 1
        return [round(start + i * step, 10) for i in range(count)]
    return [float(t) for t in text.split(",") if t.strip()]


def replicate(H, n, base_seed, i, N=3, j1=2, j2=8, level=0.95, boundary="periodic"):
    """Fit one seeded fGn replicate; returns ``(H_hat, covered, gof_p, classification)``."""
    x = fgn_sample(H, n, replicate_rng(base_seed, i))
    J = n.bit_length() - 1
    pyr = dwt_pyramid(x, daubechies_filter(N), min(J, max(j2, 3)), boundary)
    _, fit = estimate(pyr, level, "fixed", j1, j2)
    lo, hi = fit.ci_H
    return fit.H, lo <= H <= hi, fit.gof_p, fit.classification.value


def _run_chunk(args):
    H, n, seed, idx, kw = args
    return [replicate(H, n, seed, i, **kw) for i in idx]


def run_cell(H, n, reps, seed, workers=1, **kw) -> BenchRow:
    """Simulate ``reps`` replicates at one H and summarise them.

    Results depend only on ``(H, n, reps, seed, kw)``; the worker count
    merely splits the replicate index range.
    """
    if reps < 2:
        raise ValueError("reps must be >= 2")
    if workers > 1:
        chunks = [(H, n, seed, idx.tolist(), kw) for idx in np.array_split(np.arange(reps), workers)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            out = [r for part in ex.map(_run_chunk, chunks) for r in part]
    else:
        out = _run_chunk((H, n, seed, range(reps), kw))
    hs = np.array([o[0] for o in out])
    return BenchRow(
        H=H,
        reps=reps,
        mean_H=float(hs.mean()),
        bias=float(hs.mean() - H),
        rmse=float(np.sqrt(np.mean((hs - H) ** 2))),
        coverage=float(np.mean([o[1] for o in out])),
        mean_gof_p=float(np.mean([o[2] for o in out])),
        frac_long=float(np.mean([o[3] == Memory.LONG.value for o in out])),
        frac_short=float(np.mean([o[3] == Memory.SHORT.value for o in out])),
    )


def run_benchmark(grid, n=4096, reps=200, seed=0, workers=1, **kw) -> list[BenchRow]:
    # cells share replicate streams (common random numbers); a cell's result
    # does not depend on which other grid points are present
    return [run_cell(H, n, reps, seed, workers, **kw) for H in grid]
