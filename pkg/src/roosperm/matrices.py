"""Likelihood matrices, their thin transposes, cost matrices and file I/O.

A likelihood matrix has one row per target and three column blocks::

    [ detections (T x M) | missed-detection diag (T x T) | death diag (T x T) ]

Every association hypothesis picks exactly one entry per row and at most one
per column, so the normalising constant over all hypotheses is the permanent.
Permanent routines work on the transpose (N = M + 2T rows, n = T columns).
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

RNG_ALGORITHM = "numpy.random.PCG64"

DISTRIBUTIONS = ("uniform", "exponential")


class MatrixError(ValueError):
    """Invalid matrix contents, shape, or file."""


def _frozen(a):
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


def _check_entries(a, what="matrix"):
    if a.ndim != 2:
        raise MatrixError(f"{what} must be 2-D, got shape {a.shape}")
    bad = ~np.isfinite(a)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise MatrixError(f"{what} entry ({i}, {j}) is not finite: {a[i, j]!r}")
    neg = a < 0
    if neg.any():
        i, j = np.argwhere(neg)[0]
        raise MatrixError(f"{what} entry ({i}, {j}) is negative: {a[i, j]!r}")


@dataclass(frozen=True)
class ThinMatrix:
    """Dense nonnegative N x n matrix with N >= n >= 1."""

    entries: np.ndarray

    def __post_init__(self):
        a = _frozen(self.entries)
        _check_entries(a, "thin matrix")
        N, n = a.shape
        if not N >= n >= 1:
            raise MatrixError(f"thin matrix needs N >= n >= 1, got {N} x {n}")
        object.__setattr__(self, "entries", a)

    @property
    def num_rows(self):
        return self.entries.shape[0]

    @property
    def num_cols(self):
        return self.entries.shape[1]

    @property
    def shape(self):
        return self.entries.shape

    def transpose(self):
        """The wide (n x N) array view, e.g. for assignment enumeration."""
        return self.entries.T

    def __eq__(self, other):
        if not isinstance(other, ThinMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    __hash__ = None


@dataclass(frozen=True)
class LikelihoodMatrix:
    """Targets x [measurements | missed-detection diag | death diag]."""

    num_targets: int
    num_measurements: int
    entries: np.ndarray

    def __post_init__(self):
        T, M = int(self.num_targets), int(self.num_measurements)
        if T < 1 or M < 0:
            raise MatrixError(f"need T >= 1 and M >= 0, got T={T}, M={M}")
        a = _frozen(self.entries)
        _check_entries(a, "likelihood matrix")
        if a.shape != (T, M + 2 * T):
            raise MatrixError(f"likelihood matrix shape {a.shape} != ({T}, {M + 2 * T})")
        off = ~np.eye(T, dtype=bool)
        for name, start in (("missed-detection", M), ("death", M + T)):
            block = a[:, start:start + T]
            nz = (block != 0) & off
            if nz.any():
                i, j = np.argwhere(nz)[0]
                raise MatrixError(
                    f"{name} block must be diagonal: entry ({i}, {start + j}) = {block[i, j]!r}"
                )
        object.__setattr__(self, "num_targets", T)
        object.__setattr__(self, "num_measurements", M)
        object.__setattr__(self, "entries", a)

    @property
    def block_boundaries(self):
        T, M = self.num_targets, self.num_measurements
        return (0, M, M + T, M + 2 * T)

    @property
    def shape(self):
        return self.entries.shape

    @property
    def detection(self):
        return self.entries[:, : self.num_measurements]

    @property
    def missed(self):
        M, T = self.num_measurements, self.num_targets
        return np.diag(self.entries[:, M:M + T]).copy()

    @property
    def death(self):
        M, T = self.num_measurements, self.num_targets
        return np.diag(self.entries[:, M + T:]).copy()

    def __eq__(self, other):
        if not isinstance(other, LikelihoodMatrix):
            return NotImplemented
        return (
            self.num_targets == other.num_targets
            and self.num_measurements == other.num_measurements
            and np.array_equal(self.entries, other.entries)
        )

    __hash__ = None


@dataclass(frozen=True)
class CostMatrix:
    """Negative-log costs; ``inf`` marks structurally forbidden pairs."""

    entries: np.ndarray
    source: np.ndarray = field(repr=False)

    @property
    def shape(self):
        return self.entries.shape

    @property
    def forbidden(self):
        return np.isinf(self.entries)


def build_likelihood(T, M, detection, missed, death):
    """Assemble the block layout from its three parts.

    >>> build_likelihood(1, 1, [[0.7]], [0.2], [0.1]).entries.tolist()
    [[0.7, 0.2, 0.1]]
    """
    detection = np.asarray(detection, dtype=np.float64)
    if M == 0 and detection.size == 0:
        detection = np.zeros((T, 0))
    missed = np.asarray(missed, dtype=np.float64)
    death = np.asarray(death, dtype=np.float64)
    if detection.shape != (T, M):
        raise MatrixError(f"detection block shape {detection.shape} != ({T}, {M})")
    if missed.shape != (T,) or death.shape != (T,):
        raise MatrixError(f"missed/death must have length {T}, got {missed.shape}, {death.shape}")
    _check_entries(detection, "detection block")
    _check_entries(missed[None, :], "missed-detection diagonal")
    _check_entries(death[None, :], "death diagonal")
    entries = np.hstack([detection, np.diag(missed), np.diag(death)])
    return LikelihoodMatrix(T, M, entries)


def as_array(m):
    if isinstance(m, (ThinMatrix, LikelihoodMatrix, CostMatrix)):
        return m.entries
    a = np.asarray(m, dtype=np.float64)
    _check_entries(a)
    return a


def to_thin(m):
    """Thin transpose of a likelihood (or any wide nonnegative) matrix.

    Thin inputs are returned unchanged and square plain arrays keep their
    orientation, so permanent routines can accept either orientation.
    """
    if isinstance(m, ThinMatrix):
        return m
    a = as_array(m)
    if isinstance(m, LikelihoodMatrix) or a.shape[0] < a.shape[1]:
        return ThinMatrix(a.T)
    return ThinMatrix(a)


def as_wide(m):
    """Targets-as-rows array: likelihood entries, or the transpose of a thin matrix."""
    if isinstance(m, ThinMatrix):
        return m.transpose() if m.num_rows != m.num_cols else m.entries
    a = as_array(m)
    return a if a.shape[0] <= a.shape[1] else a.T


def neg_log_cost(m):
    """``-ln z`` entrywise, with ``+inf`` exactly where ``z == 0``."""
    z = as_wide(m)
    with np.errstate(divide="ignore"):
        c = -np.log(z)
    c[z == 0] = np.inf
    c.setflags(write=False)
    return CostMatrix(c, z)


def _draw(rng, shape, distribution, scale):
    if distribution == "uniform":
        return rng.random(shape) * scale
    if distribution == "exponential":
        return rng.exponential(scale, shape)
    raise MatrixError(f"unknown distribution {distribution!r}; choose from {DISTRIBUTIONS}")


def gen_random(T, M, seed, distribution="uniform", scale=1.0, structure="glmb"):
    """Seeded random likelihood matrix.

    ``structure="glmb"`` fills the detection block and both diagonals; the
    off-diagonal parts of the last two blocks are exactly zero.
    ``structure="dense"`` fills every entry and returns a plain wide array,
    since it no longer satisfies the block invariant.
    """
    if T < 1 or M < 0:
        raise MatrixError(f"need T >= 1 and M >= 0, got T={T}, M={M}")
    rng = np.random.default_rng(seed)
    if structure == "dense":
        return _draw(rng, (T, M + 2 * T), distribution, scale)
    if structure != "glmb":
        raise MatrixError(f"unknown structure {structure!r}")
    detection = _draw(rng, (T, M), distribution, scale)
    missed = _draw(rng, T, distribution, scale)
    death = _draw(rng, T, distribution, scale)
    return build_likelihood(T, M, detection, missed, death)


def random_thin(N, n, seed, distribution="uniform", scale=1.0):
    rng = np.random.default_rng(seed)
    return ThinMatrix(_draw(rng, (N, n), distribution, scale))


# ---------------------------------------------------------------- file I/O


def _format_for(path, fmt):
    if fmt:
        return fmt.lower()
    suffix = Path(path).suffix.lower()
    return "csv" if suffix == ".csv" else "json"


def to_json_dict(m):
    if isinstance(m, LikelihoodMatrix):
        a = m.entries
        return {
            "rows": a.shape[0],
            "cols": a.shape[1],
            "targets": m.num_targets,
            "measurements": m.num_measurements,
            "data": a.tolist(),
        }
    a = as_array(m)
    return {"rows": a.shape[0], "cols": a.shape[1], "data": a.tolist()}


def from_json_dict(obj, orient=True):
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixError(f"matrix JSON needs integer 'rows', 'cols' and a 'data' array: {exc}") from None
    if not isinstance(data, list) or len(data) != rows:
        raise MatrixError(f"'data' has {len(data) if isinstance(data, list) else '?'} rows, expected {rows}")
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise MatrixError(f"row {i} has {got} entries, expected {cols}")
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise MatrixError(f"entry ({i}, {j}) is not a number: {v!r}")
    a = np.array(data, dtype=np.float64).reshape(rows, cols)
    if "targets" in obj:
        return LikelihoodMatrix(int(obj["targets"]), int(obj["measurements"]), a)
    _check_entries(a)
    return to_thin(a) if orient else a


def parse_csv(text):
    rows = []
    width = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = next(csv.reader([line]))
        try:
            row = [float(f) for f in fields]
        except ValueError as exc:
            raise MatrixError(f"line {lineno}: {exc}") from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise MatrixError(f"line {lineno}: {len(row)} fields, expected {width}")
        rows.append(row)
    if not rows:
        raise MatrixError("empty CSV")
    a = np.array(rows, dtype=np.float64)
    _check_entries(a)
    return a


def load(path, format=None):
    """Read a matrix file.

    Likelihood JSON (with ``targets``/``measurements``) gives a
    :class:`LikelihoodMatrix`; plain JSON and CSV give a :class:`ThinMatrix`,
    transposing wide inputs.
    """
    fmt = _format_for(path, format)
    text = Path(path).read_text()
    if fmt == "json":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MatrixError(f"{path}: invalid JSON: {exc}") from None
        return from_json_dict(obj)
    if fmt == "csv":
        return to_thin(parse_csv(text))
    raise MatrixError(f"unknown format {fmt!r}")


def load_array(path, format=None):
    """Like :func:`load` but keeps plain matrices in file orientation."""
    fmt = _format_for(path, format)
    text = Path(path).read_text()
    if fmt == "csv":
        return parse_csv(text)
    obj = json.loads(text)
    return from_json_dict(obj, orient=False)


def dumps(m, format="json"):
    if format == "json":
        return json.dumps(to_json_dict(m)) + "\n"
    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for row in as_array(m).tolist():
            w.writerow([repr(v) for v in row])
        return buf.getvalue()
    raise MatrixError(f"unknown format {format!r}")


def save(m, path, format=None):
    Path(path).write_text(dumps(m, _format_for(path, format)))


def falling_factorial(N, n):
    """N (N-1) ... (N-n+1) as an exact integer."""
    return math.perm(N, n)
