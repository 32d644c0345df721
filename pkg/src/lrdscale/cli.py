"""Command-line interface: ``lrdscale analyze | simulate | bench``.

Exit codes: 0 success, 1 usage/IO/analysis error, 2 analysis finished with
warnings while ``--strict`` was given.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from pathlib import Path

from . import __version__
from .bench import parse_grid, run_benchmark
from .dwt import daubechies_filter, dwt_pyramid
from .estimator import LogscaleDiagram, HurstFit, logscale_diagram, select_alignment, wls_fit
from .ingest import (
    IngestError,
    ReturnSeries,
    abs_returns,
    dyadic_window,
    load_raw_series,
    load_series,
    log_returns,
)
from .synth import FgnSpec, fbm_from_fgn, generate_fgn, generate_white_noise

SCHEMA_VERSION = 1
EXIT_OK, EXIT_ERROR, EXIT_WARN = 0, 1, 2
TRANSFORMS = {"returns": "log_return", "abs-returns": "abs_return", "raw": "raw"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def default_seed() -> int:
    raw = os.environ.get("LRDSCALE_SEED")
    if raw is None or not raw.strip():
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"LRDSCALE_SEED must be an integer, got {raw!r}") from None


def _column(value: str):
    return int(value) if value.lstrip("-").isdigit() else value


def _nan_to_none(v):
    return None if isinstance(v, float) and math.isnan(v) else v


# --------------------------------------------------------------------- analyze

def prepare_series(path, column, transform, header=True, delimiter=",", label_column=None,
                   window="keep_latest") -> tuple[ReturnSeries, int]:
    """Read, transform and dyadic-window a series; also returns the pre-window length."""
    with open(path, "rb") as fh:
        data = fh.read()
    name = Path(path).stem
    if transform == "raw":
        r = load_raw_series(data, column, header, delimiter, label_column, name=name)
    else:
        r = log_returns(load_series(data, column, header, delimiter, label_column, name=name))
        if transform == "abs-returns":
            r = abs_returns(r)
    return dyadic_window(r, window), len(r)


def build_report(series: ReturnSeries, diag: LogscaleDiagram, fit: HurstFit, boundary: str,
                 n_input: int, warn_msgs: list[str]) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "series_name": series.name,
        "transform_tag": series.transform_tag,
        "n_input": n_input,
        "n": len(series),
        "wavelet_moments": diag.wavelet_moments,
        "boundary": boundary,
        "level": diag.confidence_level,
        "j1": fit.j1,
        "j2": fit.j2,
        "octaves": [
            {
                "j": p.j,
                "n_j": p.n_j,
                "v_j": _nan_to_none(p.v_j),
                "y_j": _nan_to_none(p.y_j),
                "sigma2_j": _nan_to_none(p.sigma2_j),
                "ci_lo": _nan_to_none(p.ci_lo),
                "ci_hi": _nan_to_none(p.ci_hi),
                "degenerate": p.degenerate,
            }
            for p in diag.points
        ],
        "alpha": fit.alpha,
        "intercept": fit.intercept,
        "stderr_alpha": fit.stderr_alpha,
        "H": fit.H,
        "ci_H": list(fit.ci_H),
        "gof_p": fit.gof_p,
        "classification": fit.classification.value,
        "warnings": warn_msgs,
    }


def table_csv(diag: LogscaleDiagram) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["j", "n_j", "v_j", "y_j", "sigma2_j", "ci_lo", "ci_hi", "degenerate"])
    for p in diag.points:
        w.writerow([p.j, p.n_j, repr(p.v_j), repr(p.y_j), repr(p.sigma2_j), repr(p.ci_lo),
                    repr(p.ci_hi), int(p.degenerate)])
    return buf.getvalue()


PLOT_TEMPLATE = '''\
"""Logscale diagram for {name!r}. Run with python; needs matplotlib."""
import math
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

# (j, y_j, ci_lo, ci_hi); degenerate octaves omitted
POINTS = {points!r}
J1, J2 = {j1!r}, {j2!r}
ALPHA, INTERCEPT = {alpha!r}, {intercept!r}
H, CI_H = {H!r}, {ci_H!r}

js = [p[0] for p in POINTS]
ys = [p[1] for p in POINTS]
err = [[p[1] - p[2] for p in POINTS], [p[3] - p[1] for p in POINTS]]

fig, ax = plt.subplots(figsize=(5, 4))
ax.errorbar(js, ys, yerr=err, fmt="o", color="black", capsize=3, label="log2 v_j (bias corrected)")
ax.plot([J1, J2], [ALPHA * J1 + INTERCEPT, ALPHA * J2 + INTERCEPT], color="red",
        label="fit: H = %.3f [%.3f, %.3f]" % (H, CI_H[0], CI_H[1]))
ax.set_xlabel("octave j")
ax.set_ylabel("y_j")
ax.set_title({title!r})
ax.legend(loc="best", fontsize="small")
fig.tight_layout()
out = sys.argv[1] if len(sys.argv) > 1 else {png!r}
fig.savefig(out, dpi=150)
'''


def plot_script(diag: LogscaleDiagram, fit: HurstFit, png_name: str) -> str:
    """Self-contained matplotlib script; identical inputs give identical bytes."""
    pts = [(p.j, p.y_j, p.ci_lo, p.ci_hi) for p in diag.points if not p.degenerate]
    return PLOT_TEMPLATE.format(
        name=diag.series_name, points=pts, j1=fit.j1, j2=fit.j2, alpha=fit.alpha,
        intercept=fit.intercept, H=fit.H, ci_H=tuple(fit.ci_H),
        title=f"Logscale diagram: {diag.series_name}", png=png_name,
    )


def analyze(args) -> tuple[dict, int]:
    series, n_input = prepare_series(args.input, args.column, args.transform, not args.no_header,
                                     args.delimiter, args.label_column, args.window)
    n = len(series)
    J = n.bit_length() - 1
    j_max = args.j_max if args.j_max is not None else min(J, max(args.j2, 8))
    if j_max > J:
        raise UsageError(f"--j-max {j_max} exceeds log2(n) = {J} for n = {n}")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        pyr = dwt_pyramid(series.values, daubechies_filter(args.wavelet), j_max, args.boundary)
        diag = logscale_diagram(pyr, args.level, series.name)
        mode = "auto" if args.auto_range else "fixed"
        j1, j2 = select_alignment(diag, mode, args.j1, args.j2)
        fit = wls_fit(diag, j1, j2)
    msgs = [str(w.message) for w in caught]
    report = build_report(series, diag, fit, args.boundary, n_input, msgs)

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = series.name
    emit = set(args.emit)
    if "json" in emit:
        (out / f"{stem}_report.json").write_text(json.dumps(report, indent=2) + "\n")
    if "csv" in emit:
        (out / f"{stem}_logscale.csv").write_text(table_csv(diag))
    if "plot" in emit:
        (out / f"{stem}_logscale_plot.py").write_text(plot_script(diag, fit, f"{stem}_logscale.png"))
    for m in msgs:
        print(f"warning: {m}", file=sys.stderr)
    print(f"{series.name}: n={n} H={fit.H:.4f} CI=[{fit.ci_H[0]:.4f}, {fit.ci_H[1]:.4f}] "
          f"alpha={fit.alpha:.4f} gof_p={fit.gof_p:.3f} range=({fit.j1},{fit.j2}) "
          f"-> {fit.classification.value}")
    return report, (EXIT_WARN if msgs and args.strict else EXIT_OK)


# -------------------------------------------------------------------- simulate

def simulate_values(process: str, hurst: float, n: int, sigma2: float, seed: int):
    if process == "white":
        return generate_white_noise(n, sigma2, seed).values
    spec = FgnSpec(H=hurst, n=n, sigma2=sigma2, seed=seed)
    x = generate_fgn(spec)
    return (fbm_from_fgn(x) if process == "fbm" else x).values


def write_series_csv(values, fh) -> None:
    """Write the two-column ``index,value`` format that ``analyze`` reads."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["index", "value"])
    for i, v in enumerate(values):
        w.writerow([i, repr(float(v))])


def simulate(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    values = simulate_values(args.process, args.hurst, args.n, args.sigma2, seed)
    if args.out == "-":
        write_series_csv(values, sys.stdout)
    else:
        with open(args.out, "w", newline="") as fh:
            write_series_csv(values, fh)
    return EXIT_OK


# ----------------------------------------------------------------------- bench

BENCH_FIELDS = ["H", "reps", "mean_H", "bias", "rmse", "coverage", "mean_gof_p", "frac_long",
                "frac_short"]


def bench(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    if args.reps < 2:
        raise UsageError("--reps must be at least 2")
    grid = parse_grid(args.hurst_grid)
    rows = run_benchmark(grid, n=args.n, reps=args.reps, seed=seed, workers=args.workers,
                         N=args.wavelet, j1=args.j1, j2=args.j2, level=args.level,
                         boundary=args.boundary)
    print("  ".join(f"{f:>10}" for f in BENCH_FIELDS))
    for r in rows:
        d = r.as_dict()
        print("  ".join(f"{d[f]:>10d}" if f == "reps" else f"{d[f]:>10.4f}" for f in BENCH_FIELDS))
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.DictWriter(fh, BENCH_FIELDS, lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.as_dict().items()})
    return EXIT_OK


# ---------------------------------------------------------------------- parser

def _add_fit_flags(p):
    p.add_argument("--wavelet", type=int, default=3, help="Daubechies vanishing moments (1-10)")
    p.add_argument("--j1", type=int, default=2)
    p.add_argument("--j2", type=int, default=8)
    p.add_argument("--level", type=float, default=0.95, help="confidence level")
    p.add_argument("--boundary", choices=["periodic", "interior"], default="periodic")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lrdscale", description="Wavelet log-scale Hurst exponent estimation.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="estimate H for a CSV series")
    a.add_argument("--input", required=True)
    a.add_argument("--column", type=_column, default=0, help="column name or zero-based index")
    a.add_argument("--label-column", type=_column, default=None)
    a.add_argument("--no-header", action="store_true")
    a.add_argument("--delimiter", default=",")
    a.add_argument("--transform", required=True, choices=list(TRANSFORMS))
    a.add_argument("--window", choices=["keep_latest", "keep_earliest"], default="keep_latest")
    a.add_argument("--j-max", type=int, default=None, help="deepest octave computed")
    a.add_argument("--auto-range", action="store_true", help="choose j1 by goodness of fit")
    a.add_argument("--out-dir", default=".")
    a.add_argument("--emit", nargs="+", choices=["csv", "json", "plot"], default=["csv", "json", "plot"])
    a.add_argument("--strict", action="store_true", help="exit 2 if any warning was raised")
    _add_fit_flags(a)

    s = sub.add_parser("simulate", help="write a synthetic series as CSV")
    s.add_argument("--process", choices=["fgn", "white", "fbm"], default="fgn")
    s.add_argument("--hurst", type=float, default=0.5)
    s.add_argument("--n", type=int, default=4096)
    s.add_argument("--sigma2", type=float, default=1.0)
    s.add_argument("--seed", type=int, default=None, help="defaults to $LRDSCALE_SEED or 0")
    s.add_argument("--out", default="-")

    b = sub.add_parser("bench", help="Monte Carlo bias/RMSE/coverage table on fGn")
    b.add_argument("--hurst-grid", default="0.5:0.9:0.1")
    b.add_argument("--n", type=int, default=4096)
    b.add_argument("--reps", type=int, default=200)
    b.add_argument("--seed", type=int, default=None, help="defaults to $LRDSCALE_SEED or 0")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--out", default=None, help="optional CSV path for the table")
    _add_fit_flags(b)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            return analyze(args)[1]
        if args.command == "simulate":
            return simulate(args)
        return bench(args)
    except (IngestError, UsageError, ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
