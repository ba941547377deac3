"""Time the compiled and numpy grid scans on the same inputs.

    python benchmarks/bench_kernels.py --pairs 3 --half-width 20 --step 0.25
"""
import argparse
import time

import numpy as np

from wpolar import _pykernels
from wpolar.core_linalg import opnorm, random_instance

try:
    from wpolar import _ckernels
except ImportError:
    _ckernels = None


def bounds(a, step):
    half = 0.5 * step * np.sqrt(6.0)
    na = opnorm(a)
    return 3.0 * na * half * half, 2.0 * na * half


def run(fn, a, b, lo, hi, step, repeats):
    c0, c1 = bounds(a, step)
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(a, b, lo, hi, step, c0, c1, 2_000_000)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--pairs", type=int, default=3)
    p.add_argument("--half-width", type=float, default=20.0)
    p.add_argument("--step", type=float, default=0.25)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    backends = [("python", _pykernels.scan_hermitian_2x2)]
    if _ckernels is None:
        print("compiled extension not built; timing the numpy fallback only")
    else:
        backends.insert(0, ("cython", _ckernels.scan_hermitian_2x2))

    lo, hi = -args.half_width, args.half_width
    totals = {name: 0.0 for name, _ in backends}
    for i in range(args.pairs):
        a = random_instance("positive_definite", 2, args.seed + 2 * i, 10.0)
        b = random_instance("positive_definite", 2, args.seed + 2 * i + 1, 10.0)
        counts = set()
        for name, fn in backends:
            dt, out = run(fn, a, b, lo, hi, args.step, args.repeats)
            totals[name] += dt
            counts.add((out[2], len(out[0])))
            print(f"pair {i} {name:<7} {dt:8.3f} s  points {out[2]}  kept {len(out[0])}")
        if len(counts) != 1:
            print(f"pair {i}: backends disagree {counts}")
    for name, t in totals.items():
        print(f"{name:<7} total {t:8.3f} s")
    if len(totals) == 2:
        print(f"speedup {totals['python'] / totals['cython']:.1f}x")


if __name__ == "__main__":
    main()
