"""Loading price/return series from CSV and turning them into analysable returns."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import IO, Literal, Sequence, Union

import numpy as np

TransformTag = Literal["log_return", "abs_return", "raw"]
WindowPolicy = Literal["keep_latest", "keep_earliest"]
ColumnSelector = Union[str, int]


class IngestError(ValueError):
    """Raised when an input file cannot be turned into a valid series."""


@dataclass(frozen=True)
class PriceSeries:
    values: np.ndarray
    name: str = "series"
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 2:
            raise IngestError("a price series needs at least 2 observations")
        if not np.all(values > 0):
            bad = int(np.flatnonzero(~(values > 0))[0])
            raise IngestError(f"non-positive price {values[bad]!r} at position {bad}")
        _check_labels(self.labels, values.size)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class ReturnSeries:
    values: np.ndarray
    transform_tag: TransformTag = "raw"
    name: str = "series"
    labels: tuple[str, ...] | None = field(default=None)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 1:
            raise IngestError("a return series must be a non-empty 1-D sequence")
        if self.transform_tag not in ("log_return", "abs_return", "raw"):
            raise IngestError(f"unknown transform tag {self.transform_tag!r}")
        if self.transform_tag == "abs_return" and np.any(values < 0):
            raise IngestError("abs_return series contains negative values")
        _check_labels(self.labels, values.size)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size


def _check_labels(labels, n):
    if labels is not None and len(labels) != n:
        raise IngestError(f"got {len(labels)} labels for {n} observations")


def _read_text(source: IO | str | bytes) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def _resolve(selector: ColumnSelector, header: Sequence[str] | None, what: str) -> int:
    if header is not None and isinstance(selector, str) and not selector.lstrip("-").isdigit():
        names = [h.strip() for h in header]
        if selector not in names:
            raise IngestError(f"{what} column {selector!r} not found; header is {names}")
        return names.index(selector)
    try:
        return int(selector)
    except ValueError:
        raise IngestError(f"{what} column {selector!r} must be a zero-based index "
                          "when the file has no header") from None


def read_column(
    source: IO | str | bytes,
    column: ColumnSelector = 0,
    header: bool = True,
    delimiter: str = ",",
    label_column: ColumnSelector | None = None,
) -> tuple[np.ndarray, tuple[str, ...] | None]:
    """Parse one numeric column (and optionally a label column) from delimited text.

    Row numbers in error messages are 1-based file lines, so they can be
    looked up directly in an editor.
    """
    rows = list(csv.reader(io.StringIO(_read_text(source)), delimiter=delimiter))
    first_line = 1
    names = None
    if header:
        if not rows:
            raise IngestError("empty file")
        names = rows[0]
        rows = rows[1:]
        first_line = 2
    if not rows:
        raise IngestError("empty file: no data rows")

    col = _resolve(column, names, "value")
    lab = None if label_column is None else _resolve(label_column, names, "label")
    col_name = names[col].strip() if names is not None and col < len(names) else str(col)

    values = np.empty(len(rows))
    labels = [] if lab is not None else None
    for i, row in enumerate(rows):
        line = first_line + i
        if col >= len(row) or not row[col].strip():
            raise IngestError(f"row {line}, column {col_name!r}: missing value")
        cell = row[col].strip()
        try:
            values[i] = float(cell)
        except ValueError:
            raise IngestError(f"row {line}, column {col_name!r}: cannot parse {cell!r}") from None
        if not np.isfinite(values[i]):
            raise IngestError(f"row {line}, column {col_name!r}: non-finite value {cell!r}")
        if labels is not None:
            if lab >= len(row):
                raise IngestError(f"row {line}: missing label")
            labels.append(row[lab].strip())
    return values, (tuple(labels) if labels is not None else None)


def load_series(
    source: IO | str | bytes,
    column: ColumnSelector = 0,
    header: bool = True,
    delimiter: str = ",",
    label_column: ColumnSelector | None = None,
    name: str | None = None,
) -> PriceSeries:
    """Load a strictly positive price column.

    Examples
    --------
    >>> load_series("p\\n1.0\\n2.0\\n4.0").values.tolist()
    [1.0, 2.0, 4.0]
    """
    values, labels = read_column(source, column, header, delimiter, label_column)
    if values.size < 2:
        raise IngestError("a price series needs at least 2 observations")
    nonpos = np.flatnonzero(values <= 0)
    if nonpos.size:
        line = int(nonpos[0]) + (2 if header else 1)
        raise IngestError(f"row {line}: non-positive price {values[nonpos[0]]!r} "
                          "(log return undefined)")
    return PriceSeries(values, name=name or str(column), labels=labels)


def load_raw_series(
    source: IO | str | bytes,
    column: ColumnSelector = 0,
    header: bool = True,
    delimiter: str = ",",
    label_column: ColumnSelector | None = None,
    name: str | None = None,
) -> ReturnSeries:
    """Load a column that is analysed as-is (e.g. a simulated noise series)."""
    values, labels = read_column(source, column, header, delimiter, label_column)
    return ReturnSeries(values, "raw", name=name or str(column), labels=labels)


def log_returns(p: PriceSeries) -> ReturnSeries:
    """First-order differences of log prices; one observation shorter than ``p``."""
    if len(p) < 2:
        raise IngestError("need at least 2 prices for a return")
    r = np.diff(np.log(p.values))
    labels = p.labels[1:] if p.labels is not None else None
    return ReturnSeries(r, "log_return", name=p.name, labels=labels)


def abs_returns(r: ReturnSeries) -> ReturnSeries:
    """Elementwise absolute value (the volatility proxy)."""
    return ReturnSeries(np.abs(r.values), "abs_return", name=r.name, labels=r.labels)


def dyadic_length(n: int) -> int:
    """Largest power of two not exceeding ``n``."""
    if n < 1:
        raise ValueError("length must be positive")
    return 1 << (int(n).bit_length() - 1)


def dyadic_window(r: ReturnSeries, policy: WindowPolicy = "keep_latest") -> ReturnSeries:
    """Cut ``r`` to the largest power-of-two length.

    ``keep_latest`` keeps the trailing (most recent) block, ``keep_earliest``
    the leading one.
    """
    if len(r) < 2:
        raise IngestError("need at least 2 observations to window")
    m = dyadic_length(len(r))
    if policy == "keep_latest":
        sl = slice(len(r) - m, None)
    elif policy == "keep_earliest":
        sl = slice(0, m)
    else:
        raise ValueError(f"unknown window policy {policy!r}")
    labels = r.labels[sl] if r.labels is not None else None
    return ReturnSeries(r.values[sl], r.transform_tag, name=r.name, labels=labels)
