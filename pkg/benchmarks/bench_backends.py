"""Compare the numba and numpy update kernels on the default (m, c) grid.

    python benchmarks/bench_backends.py [--repeats 30] [--n 2000]
"""
import argparse

from cipls import _kernels
from cipls.bench import bench_partial_fit


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=30)
    ap.add_argument("--n", type=int, default=2000)
    args = ap.parse_args()
    tables = {b: bench_partial_fit(n=args.n, repeats=args.repeats, backend=b)
              for b in _kernels.BACKENDS}
    for table in tables.values():
        print(table.format())
        for kind, fixed, lo, hi, v in table.fourfold_ratios():
            print(f"  {kind} {lo}->{hi} (other={fixed}): {v:.2f}")
        print()
    if "numba" in tables and "numpy" in tables:
        print(f"{'m':>6} {'c':>3} {'numpy/numba':>12}")
        for a, b in zip(tables["numba"].rows, tables["numpy"].rows):
            print(f"{a.m:>6} {a.c:>3} {b.median / a.median:>12.2f}")


if __name__ == "__main__":
    main()
