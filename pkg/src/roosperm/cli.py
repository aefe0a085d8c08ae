"""Command-line interface.

    roosperm gen --targets 4 --measurements 8 --seed 7 --output m.json
    roosperm permanent m.json
    roosperm approx m.json --order 2 --diagnostics
    roosperm kbest m.json --k 20
    roosperm truncation m.json --k-max 100 --order 2 --exact
    roosperm bench --targets 5 --measurements 8..10 --trials 3 --seed 1
    roosperm bench-backends

Exit status: 0 ok, 1 computation infeasible or bad input file, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import _backend, bench
from .assignment import AssignmentInfeasible, murty_kbest
from .matrices import RNG_ALGORITHM, MatrixError, dumps, gen_random, load, load_array, to_json_dict, to_thin
from .permanent import PermanentInfeasible, permanent_bruteforce, permanent_exact, permanent_ryser
from .roos import approx_first, approx_second, diagnostics
from .truncation import truncation_report


def int_range(text):
    """``"8"`` -> [8], ``"8..10"`` -> [8, 9, 10], ``"8,12"`` -> [8, 12]."""
    out = []
    try:
        for part in text.split(","):
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer or range: {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError(f"empty range: {text!r}")
    return out


def method_list(text):
    methods = [m.strip() for m in text.split(",") if m.strip()]
    for m in methods:
        if m not in bench.METHODS:
            raise argparse.ArgumentTypeError(f"unknown method {m!r}; choose from {', '.join(bench.METHODS)}")
    return methods


def build_parser():
    p = argparse.ArgumentParser(prog="roosperm", description=__doc__.split("\n\n")[0])
    p.add_argument("--backend", choices=_backend.available(), help="kernel backend (default: compiled if built)")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=1, help="worker count for partitioned exact sums")
    common.add_argument("-o", "--output", help="write payload here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="seeded random likelihood matrix")
    g.add_argument("--targets", type=int, required=True)
    g.add_argument("--measurements", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--distribution", choices=("uniform", "exponential"), default="uniform")
    g.add_argument("--scale", type=float, default=1.0)
    g.add_argument("--structure", choices=("glmb", "dense"), default="glmb")
    g.add_argument("--format", choices=("json", "csv"), default="json")

    pm = sub.add_parser("permanent", parents=[common], help="exact permanent")
    pm.add_argument("matrix")
    pm.add_argument("--method", choices=("auto", "ryser", "bruteforce"), default="auto")
    pm.add_argument("--compensated", action="store_true", help="Kahan-summed Ryser terms")

    ap = sub.add_parser("approx", parents=[common], help="Roos approximation with error interval")
    ap.add_argument("matrix")
    ap.add_argument("--order", type=int, choices=(1, 2), default=2)
    ap.add_argument("--diagnostics", action="store_true")

    kb = sub.add_parser("kbest", parents=[common], help="K best hypotheses (Murty)")
    kb.add_argument("matrix")
    kb.add_argument("--k", type=int, required=True)

    tr = sub.add_parser("truncation", parents=[common], help="captured-mass report for the top-K hypotheses")
    tr.add_argument("matrix")
    tr.add_argument("--k-max", type=int, required=True)
    tr.add_argument("--order", type=int, choices=(1, 2), default=2)
    tr.add_argument("--exact", dest="exact", action="store_true", default=True)
    tr.add_argument("--no-exact", dest="exact", action="store_false")
    tr.add_argument("--csv", action="store_true", help="plot-ready CSV instead of JSON")

    b = sub.add_parser("bench", parents=[common], help="timing of exact and approximate permanents")
    b.add_argument("--targets", type=int_range, default=int_range("5..8"))
    b.add_argument("--measurements", type=int_range, default=int_range("8,12,16"))
    b.add_argument("--trials", type=int, default=3)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--methods", type=method_list, default=list(bench.DEFAULT_METHODS))
    b.add_argument("--distribution", choices=("uniform", "exponential"), default="uniform")
    b.add_argument("--summary", action="store_true", help="print medians and cross-checks to stderr")

    bb = sub.add_parser("bench-backends", parents=[common], help="compiled vs pure-Python kernel timings")
    bb.add_argument("--targets", type=int_range, default=int_range("6,8"))
    bb.add_argument("--measurements", type=int_range, default=int_range("8,12"))
    bb.add_argument("--trials", type=int, default=2)
    bb.add_argument("--seed", type=int, default=0)
    bb.add_argument("--methods", type=method_list, default=["ryser", "bruteforce", "roos2"])
    return p


def _json(obj):
    return json.dumps(obj, indent=2) + "\n"


def _for_kbest(path):
    m = load(path)
    return m if not hasattr(m, "num_rows") else load_array(path)


def cmd_gen(args):
    m = gen_random(args.targets, args.measurements, args.seed, args.distribution,
                   args.scale, args.structure)
    if args.format == "csv":
        return dumps(m, "csv")
    obj = to_json_dict(m)
    obj["rng"] = {"algorithm": RNG_ALGORITHM, "seed": args.seed,
                  "distribution": args.distribution, "scale": args.scale,
                  "structure": args.structure}
    return json.dumps(obj) + "\n"


def cmd_permanent(args):
    Z = to_thin(load(args.matrix))
    if args.method == "ryser":
        v = permanent_ryser(Z, compensated=args.compensated, workers=args.threads)
    elif args.method == "bruteforce":
        v = permanent_bruteforce(Z)
    else:
        v = permanent_exact(Z, compensated=args.compensated, workers=args.threads)
    return _json({"rows": Z.num_rows, "cols": Z.num_cols, **v.to_dict()})


def cmd_approx(args):
    Z = to_thin(load(args.matrix))
    diag = diagnostics(Z, orders=(args.order,))
    est = approx_first(Z, diag) if args.order == 1 else approx_second(Z, diag)
    out = {"rows": Z.num_rows, "cols": Z.num_cols, **est.to_dict(), "bound_available": est.available}
    if args.diagnostics:
        out["diagnostics"] = diag.to_dict()
    return _json(out)


def cmd_kbest(args):
    res = murty_kbest(_for_kbest(args.matrix), args.k)
    return _json({"k": args.k, **res.to_dict()})


def cmd_truncation(args):
    rep = truncation_report(_for_kbest(args.matrix), args.k_max, order=args.order,
                            with_exact=args.exact, workers=args.threads)
    return rep.to_csv() if args.csv else rep.to_json()


def _warn_skip(method, T, M, trial, message):
    print(f"skipped {method} T={T} M={M} trial={trial}: {message}", file=sys.stderr)


def cmd_bench(args):
    recs = bench.run_bench(args.targets, args.measurements, args.trials, args.seed,
                           args.methods, threads=args.threads, distribution=args.distribution,
                           on_skip=_warn_skip)
    if args.summary:
        for method, t in sorted(bench.median_times(recs).items()):
            print(f"median {method}: {t:.6f} s", file=sys.stderr)
        bad = bench.cross_check(recs)
        print(f"interval misses: {len(bad)}", file=sys.stderr)
    return bench.records_to_csv(recs)


def cmd_bench_backends(args):
    results = bench.compare_backends(args.targets, args.measurements, args.trials, args.seed, args.methods)
    names = sorted(results)
    lines = ["method,rows,cols," + ",".join(f"{n}_median_s" for n in names)
             + (",speedup" if len(names) == 2 else "")]
    for method, nr, nc, per in bench.compare_table(results):
        cells = [f"{per[n]:.6f}" if n in per else "" for n in names]
        line = f"{method},{nr},{nc}," + ",".join(cells)
        if len(names) == 2 and all(n in per for n in names) and per["compiled"] > 0:
            line += f",{per['python'] / per['compiled']:.1f}"
        lines.append(line)
    return "\n".join(lines) + "\n"


COMMANDS = {
    "gen": cmd_gen,
    "permanent": cmd_permanent,
    "approx": cmd_approx,
    "kbest": cmd_kbest,
    "truncation": cmd_truncation,
    "bench": cmd_bench,
    "bench-backends": cmd_bench_backends,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    if args.backend:
        _backend.set_backend(args.backend)
    try:
        payload = COMMANDS[args.command](args)
    except (PermanentInfeasible, AssignmentInfeasible) as exc:
        print(f"roosperm: infeasible: {exc}", file=sys.stderr)
        return 1
    except (MatrixError, OSError, json.JSONDecodeError) as exc:
        print(f"roosperm: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"roosperm: {exc}", file=sys.stderr)
        return 2
    if args.output:
        Path(args.output).write_text(payload)
    else:
        sys.stdout.write(payload)
    return 0


if __name__ == "__main__":
    sys.exit(main())
