"""Benchmark the elimination kernels against each other.

Times every importable bareiss kernel (compiled and pure Python) on
random sparse integer matrices and on the differentials of the loop
complex of the two-generator sphere model, and checks that the kernels
return identical output.

Run: python benchmarks/bench_elimination.py [--sizes 100,200] [--repeat 3]
"""

import argparse
import math
import random
import time
from fractions import Fraction

from cdgacyc.free_loop import free_loop
from cdgacyc.gralg import FreeCDGA, Generator
from cdgacyc.kernels import KERNEL_NAME, available_kernels


def random_matrix(rng, nrows, ncols, density=0.08, span=40):
    rows = []
    for _ in range(nrows):
        row = [0] * ncols
        for j in range(ncols):
            if rng.random() < density:
                row[j] = rng.randint(-span, span) or 1
        rows.append(row)
    return rows


def loop_matrices(cutoff=14):
    """Integer differentials of the loop complex of a sphere model."""
    x = Generator(0, "x", 2)
    y = Generator(1, "y", 3)
    loop = free_loop(FreeCDGA([x, y], {"y": {((x, 2),): Fraction(1)}}))
    M = loop.mixed_complex(cutoff)
    out = []
    for n in range(cutoff):
        d = M.delta_m(n)
        dense = [[0] * d.cols for _ in range(d.rows)]
        scale = 1
        for v in d.entries.values():
            scale = scale * v.denominator // math.gcd(scale, v.denominator)
        for (i, j), v in d.entries.items():
            dense[i][j] = int(v * scale)
        if d.rows and d.cols:
            out.append((f"delta[{n}] {d.rows}x{d.cols}", dense, d.cols))
    return out


def time_kernel(fn, rows, ncols, repeat):
    best = None
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(rows, ncols)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, result


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="80,160,240",
                    help="comma separated square sizes for random matrices")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    kernels = available_kernels()
    print(f"active kernel: {KERNEL_NAME}")
    print(f"available: {', '.join(kernels)}")
    rng = random.Random(args.seed)

    cases = []
    for s in args.sizes.split(","):
        n = int(s)
        cases.append((f"random {n}x{n}", random_matrix(rng, n, n), n))
    cases.extend(loop_matrices())

    width = max(len(name) for name, _, _ in cases)
    header = f"{'case':<{width}}  " + "  ".join(
        f"{name:>10}" for name in kernels)
    print(header)
    for name, rows, ncols in cases:
        results = {}
        times = {}
        for kname, fn in kernels.items():
            times[kname], results[kname] = time_kernel(
                fn, rows, ncols, args.repeat)
        line = f"{name:<{width}}  " + "  ".join(
            f"{times[k] * 1000:>8.2f}ms" for k in kernels)
        first = next(iter(results.values()))
        if any(r != first for r in results.values()):
            line += "  MISMATCH"
        print(line)
    print("(best of %d runs; identical outputs verified per case)"
          % args.repeat)


if __name__ == "__main__":
    main()
