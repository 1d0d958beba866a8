"""Compare the compiled and pure-Python collision kernels.

Two levels are timed:

* kernel: synthetic tables sized so the loops run to completion
  (first_collision over 2**n rows with cells too fine to collide early;
  window_sweep over two sorted random tables with no accepted pair);
* pipeline: collide_exhaustive and collide_mitm on unit-weight instances.

Usage: python3 benchmarks/bench_kernels.py [--n 18] [--repeat 3] [--json out.json]
"""
from __future__ import annotations

import argparse
import json
import statistics
import time

import numpy as np

from pigeonroots import kernels
from pigeonroots.analytic import choose_a
from pigeonroots.collider import collide_exhaustive, collide_mitm, subset_sums
from pigeonroots.polycore import ProblemInstance


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_cases(n: int, seed: int):
    rng = np.random.default_rng(seed)
    cols = rng.random((n + 1, 3))
    nlo = (n + 1) // 2
    lo_tab, hi_tab = subset_sums(cols[:nlo]), subset_sums(cols[nlo:])
    total = 1 << (n + 1)
    # cells of side 1e-9 in a cube of side ~n: collisions are (almost) impossible
    L = 1 << 40

    def first(impl):
        return impl.first_collision(lo_tab, hi_tab, nlo, total, 1e9, L, 0.0, lambda t: -t - 1)

    A = np.ascontiguousarray(np.sort(rng.random((total // 4, 3)), axis=0))
    B = np.ascontiguousarray(np.sort(rng.random((total // 4, 3)), axis=0))

    def sweep(impl):
        return impl.window_sweep(A, B, 1e-4, 0.0, -1, -1, 10**9, lambda i, j: False)

    return {"first_collision": first, "window_sweep": sweep}


def pipeline_cases(n: int):
    small = ProblemInstance.unit(24, choose_a(24, 1, strict=False))
    inst = ProblemInstance.unit(n, choose_a(n, 1, strict=False))

    def exhaustive(name):
        return collide_exhaustive(small, 1, backend=name)

    def mitm(name):
        return collide_mitm(inst, 3, budget=10**6, seed=0, backend=name)

    return {"collide_exhaustive(n=24,m=1)": exhaustive, f"collide_mitm(n={n},m=3)": mitm}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n", type=int, default=18, help="table size exponent for the kernel cases")
    ap.add_argument("--pipeline-n", type=int, default=30)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", default=None, help="write results here")
    args = ap.parse_args(argv)

    try:
        compiled = kernels.get_backend("compiled")
    except ImportError:
        print("compiled kernels are not built; nothing to compare")
        return 1
    pure = kernels.get_backend("python")
    rows = []
    for name, fn in kernel_cases(args.n, args.seed).items():
        r_c, r_p = fn(compiled), fn(pure)
        assert r_c == r_p, (name, r_c, r_p)
        tc = best_of(lambda: fn(compiled), args.repeat)
        tp = best_of(lambda: fn(pure), max(1, args.repeat // 3))
        rows.append({"case": f"{name}(n={args.n})", "compiled_s": tc, "python_s": tp, "speedup": tp / tc})
    for name, fn in pipeline_cases(args.pipeline_n).items():
        assert fn("compiled") == fn("python"), name
        tc = best_of(lambda: fn("compiled"), args.repeat)
        tp = best_of(lambda: fn("python"), args.repeat)
        rows.append({"case": name, "compiled_s": tc, "python_s": tp, "speedup": tp / tc})

    width = max(len(r["case"]) for r in rows)
    print(f"{'case':<{width}}  {'compiled':>10}  {'python':>10}  {'speedup':>8}")
    for r in rows:
        print(f"{r['case']:<{width}}  {r['compiled_s']:>9.4f}s  {r['python_s']:>9.4f}s  {r['speedup']:>7.1f}x")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"rows": rows, "median_speedup": statistics.median(r["speedup"] for r in rows)}, fh, indent=2)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
