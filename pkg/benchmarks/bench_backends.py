"""Compare the numba and numpy pyramid kernels.

    python benchmarks/bench_backends.py --sizes 1024 4096 65536 --repeat 50

Prints per-call median time for each backend and the max abs difference
between their outputs. JIT compilation is triggered once before timing.
"""

import argparse
import statistics
import time

import numpy as np

from lrdscale import _kernels
from lrdscale.dwt import daubechies_filter, dwt_pyramid
from lrdscale.estimator import estimate
from lrdscale.synth import fgn_sample, replicate_rng


def time_call(fn, repeat):
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[1024, 4096, 16384, 65536])
    ap.add_argument("--moments", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=30)
    ap.add_argument("--mc-reps", type=int, default=200, help="fGn replicates for the end-to-end timing")
    args = ap.parse_args()

    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba not importable; nothing to compare")
    f = daubechies_filter(args.moments)
    _kernels.set_backend("numba")
    dwt_pyramid(np.zeros(16), f, 2)

    print(f"{'n':>8} {'numba ms':>10} {'numpy ms':>10} {'speedup':>8} {'max |diff|':>11}")
    for n in args.sizes:
        x = np.random.default_rng(n).standard_normal(n)
        J = n.bit_length() - 1
        res, times = {}, {}
        for name in _kernels.BACKENDS:
            _kernels.set_backend(name)
            res[name] = _kernels.periodic_pyramid(x, f.h, f.g, J)
            times[name] = time_call(lambda: _kernels.periodic_pyramid(x, f.h, f.g, J), args.repeat)
        diff = max(np.max(np.abs(res["numba"][0] - res["numpy"][0])),
                   np.max(np.abs(res["numba"][1] - res["numpy"][1])))
        print(f"{n:>8} {1e3 * times['numba']:>10.3f} {1e3 * times['numpy']:>10.3f} "
              f"{times['numpy'] / times['numba']:>8.2f} {diff:>11.2e}")

    print(f"\nend to end: {args.mc_reps} fGn(H=0.8, n=4096) replicates, simulate + pyramid + fit")
    xs = [fgn_sample(0.8, 4096, replicate_rng(0, i)) for i in range(args.mc_reps)]
    for name in _kernels.BACKENDS:
        _kernels.set_backend(name)
        t0 = time.perf_counter()
        hs = [estimate(dwt_pyramid(x, f, 8))[1].H for x in xs]
        dt = time.perf_counter() - t0
        print(f"  {name:>6}: {dt:.3f}s  mean H {np.mean(hs):.6f}")


if __name__ == "__main__":
    main()
