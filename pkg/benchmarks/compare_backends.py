"""Compiled vs pure-Python kernels on the same seeded workload.

    python benchmarks/compare_backends.py --targets 6,8 --measurements 8,12 --trials 3
"""
import argparse

from roosperm import _backend
from roosperm.bench import compare_backends, compare_table
from roosperm.cli import int_range


def main():
    p = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    p.add_argument("--targets", type=int_range, default=[6, 8])
    p.add_argument("--measurements", type=int_range, default=[8, 12])
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--methods", default="ryser,bruteforce,roos2")
    args = p.parse_args()

    names = _backend.available()
    if len(names) < 2:
        print(f"only {names} available; build the extension to compare")
    results = compare_backends(args.targets, args.measurements, args.trials, args.seed,
                               args.methods.split(","))
    print(f"{'method':<11}{'shape':>8}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")
    for method, rows, cols, per in compare_table(results):
        cells = "".join(f"{per[n] * 1e3:>10.3f}ms" if n in per else f"{'-':>12}" for n in names)
        speed = ""
        if {"compiled", "python"} <= per.keys() and per["compiled"] > 0:
            speed = f"{per['python'] / per['compiled']:>9.1f}x"
        print(f"{method:<11}{f'{rows}x{cols}':>8}{cells}{speed}")


if __name__ == "__main__":
    main()
