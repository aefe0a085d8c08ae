"""Timing harness: exact vs approximate permanents, and compiled vs Python kernels."""
from __future__ import annotations

import csv
import io
import statistics
import time
from dataclasses import dataclass

from . import _backend
from .matrices import gen_random, to_thin
from .permanent import PermanentInfeasible, permanent_bruteforce, permanent_ryser
from .roos import approx_first, approx_second

METHODS = ("ryser", "bruteforce", "roos1", "roos2")
DEFAULT_METHODS = ("ryser", "roos1", "roos2")
CSV_HEADER = ("method", "rows", "cols", "trial", "wall_time_s", "value")


@dataclass
class BenchRecord:
    method: str
    rows: int
    cols: int
    trial: int
    wall_time: float
    value: float
    lower: float | None = None
    upper: float | None = None
    backend: str = ""

    def csv_row(self):
        return [self.method, self.rows, self.cols, self.trial, f"{self.wall_time:.9f}", repr(self.value)]


def _runner(method, threads):
    if method == "ryser":
        return lambda Z: permanent_ryser(Z, workers=threads)
    if method == "bruteforce":
        return permanent_bruteforce
    if method == "roos1":
        return approx_first
    if method == "roos2":
        return approx_second
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")


def time_call(fn, arg):
    """One untimed warm-up, then one timed call on a monotonic clock."""
    fn(arg)
    t0 = time.perf_counter()
    out = fn(arg)
    return out, time.perf_counter() - t0


def bench_matrix_seed(seed, T, M, trial):
    return [seed, T, M, trial]


def run_bench(targets, measurements, trials, seed, methods=DEFAULT_METHODS, threads=1,
              distribution="uniform", on_skip=None):
    """Time each method on seeded GLMB-structured random likelihood matrices.

    Infeasible exact methods (cap exceeded) are skipped and reported through
    ``on_skip(method, T, M, trial, message)``.
    """
    records = []
    for T in targets:
        for M in measurements:
            for trial in range(trials):
                L = gen_random(T, M, bench_matrix_seed(seed, T, M, trial), distribution)
                Z = to_thin(L)
                for method in methods:
                    fn = _runner(method, threads)
                    try:
                        out, dt = time_call(fn, Z)
                    except PermanentInfeasible as exc:
                        if on_skip:
                            on_skip(method, T, M, trial, str(exc))
                        continue
                    rec = BenchRecord(method, L.shape[0], L.shape[1], trial, dt, 0.0,
                                      backend=_backend.kernels().NAME)
                    if method.startswith("roos"):
                        rec.value = out.estimate
                        rec.lower = out.lower
                        rec.upper = out.upper
                    else:
                        rec.value = out.value
                    records.append(rec)
    return records


def cross_check(records, rel=1e-9):
    """Matrices where a Roos interval misses the exact value. Empty means consistent."""
    exact = {}
    for r in records:
        if r.method in ("ryser", "bruteforce"):
            exact[(r.rows, r.cols, r.trial)] = r.value
    bad = []
    for r in records:
        key = (r.rows, r.cols, r.trial)
        if r.method.startswith("roos") and key in exact and r.lower is not None:
            v = exact[key]
            slack = rel * max(abs(v), 1e-300)
            if not (r.lower - slack <= v <= r.upper + slack):
                bad.append((r, v))
    return bad


def median_times(records):
    by = {}
    for r in records:
        by.setdefault(r.method, []).append(r.wall_time)
    return {m: statistics.median(ts) for m, ts in by.items()}


def records_to_csv(records):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow(r.csv_row())
    return buf.getvalue()


def compare_backends(targets=(6, 8), measurements=(8, 12), trials=2, seed=0,
                     methods=("ryser", "bruteforce", "roos2")):
    """Same workload on every available kernel backend.

    Returns ``{backend: [BenchRecord, ...]}``; bruteforce is skipped where
    its cap is exceeded.
    """
    out = {}
    for name in _backend.available():
        with _backend.use_backend(name):
            out[name] = run_bench(targets, measurements, trials, seed, methods)
    return out


def compare_table(results):
    """Rows of (method, rows, cols, backend -> median seconds) for printing."""
    keys = {}
    for name, recs in results.items():
        for r in recs:
            keys.setdefault((r.method, r.rows, r.cols), {}).setdefault(name, []).append(r.wall_time)
    rows = []
    for (method, nr, nc), per in sorted(keys.items()):
        rows.append((method, nr, nc, {b: statistics.median(t) for b, t in per.items()}))
    return rows
