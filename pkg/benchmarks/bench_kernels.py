"""
numba vs numpy for the two hot kernels: batched Gaussian moments (scan pairings)
and the truncated Poincare lattice sum.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--cutoff 200]
"""

import argparse
import time

import numpy as np

from heckeplane import distributions as md
from heckeplane.gaussian import Poly2, moment_batch


def best_of(fn, repeat):
    fn()  # warm-up (jit compile)
    ts = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        ts.append(time.perf_counter() - t)
    return min(ts), out


def main():
    ap = argparse.ArgumentParser(formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--cutoff", type=int, default=200)
    ap.add_argument("--terms", type=int, default=200_000)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    n = args.terms
    poly = Poly2.from_cartesian({(0, 0): 1.0, (1, 0): 1.0, (0, 2): 0.5, (2, 1): -0.25})
    zeta = rng.uniform(-1, 1, n) + 1j * rng.uniform(0.5, 2, n)
    w1, w2 = rng.normal(size=n), rng.normal(size=n)
    coef = np.ones(n, dtype=np.complex128)

    A, Bs, C, Ds = md.coset_table(args.cutoff)
    z = np.arange(64) / 64 + 1j

    rows = []
    for name, make in [
        (f"moment_batch n={n}", lambda b: lambda: moment_batch(poly, coef, zeta, w1, w2, backend=b)),
        (f"poincare B={args.cutoff} ({len(A)} cosets x 64 pts)",
         lambda b: lambda: md.poincare_eval(11, 1, z, args.cutoff, backend=b)),
    ]:
        t_np, v_np = best_of(make("numpy"), args.repeat)
        t_nb, v_nb = best_of(make("numba"), args.repeat)
        diff = float(np.max(np.abs(v_np - v_nb) / np.maximum(np.abs(v_np), 1e-300)))
        rows.append((name, t_np, t_nb, t_np / t_nb, diff))

    print(f"{'kernel':48s} {'numpy s':>9s} {'numba s':>9s} {'speedup':>8s} {'max rel diff':>13s}")
    for name, a, b, s, d in rows:
        print(f"{name:48s} {a:9.4f} {b:9.4f} {s:8.1f} {d:13.1e}")


if __name__ == "__main__":
    main()
