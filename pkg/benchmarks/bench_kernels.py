"""Compare the compiled and pure-Python kernel backends.

Usage: ``python benchmarks/bench_kernels.py [--repeat N]``
"""

import argparse
import itertools
import timeit

import numpy as np

from cmvar import kernels


def laman_workload(n=6):
    verts = range(n)
    pairs = list(itertools.combinations(verts, 2))
    return [(n, e) for e in itertools.combinations(pairs, 2 * n - 3)][:2000]


def wall_workload(rng):
    out = []
    for n in (10, 16, 20, 24):
        q = sorted(rng.integers(1, 40, size=n).astype(float), reverse=True)
        out.append(q)
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    graphs = laman_workload()
    walls = wall_workload(rng)
    cases = {
        "pebble_game (2000 graphs, n=6)": lambda m: [m.pebble_game(n, e) for n, e in graphs],
        "sparsity_violation (2000 graphs, n=6)": lambda m: [m.sparsity_violation(n, e) for n, e in graphs],
        "wall_scan (n=10,16,20,24)": lambda m: [m.wall_scan(q, 1e-9, 1000) for q in walls],
    }
    found = kernels.backends()
    print(f"active backend: {kernels.BACKEND}")
    print(f"{'kernel':40s}" + "".join(f"{name:>12s}" for name in found) + "     speedup")
    for label, fn in cases.items():
        times = {name: min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat)) for name, mod in found.items()}
        row = f"{label:40s}" + "".join(f"{t:11.4f}s" for t in times.values())
        if "cython" in times:
            row += f"  {times['python'] / times['cython']:9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
