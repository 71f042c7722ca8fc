#!/usr/bin/env python3
"""Sweep the numeric verifications over a range of n and print a table.

Usage: python3 scripts/run_checks.py [--max-n 21] [--tol 1e-9]
"""
import argparse
import math
import random
import sys
import time

from oddgon import highprec
from oddgon.shear import decompose_cylinders, identity_sum, telescoping_identity, verify_reassembly
from oddgon.surface import build_surface


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=21)
    ap.add_argument("--tol", type=float, default=1e-9)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    worst = 0.0
    t0 = time.perf_counter()
    for _ in range(1000):
        theta = rng.uniform(0.01, math.pi - 0.01)
        k = rng.randrange(1, 13)
        for pair in (telescoping_identity(theta, k), identity_sum(theta, k)):
            worst = max(worst, abs(pair[0] - pair[1]))
    print(f"identities: 1000 samples, max |lhs-rhs| = {worst:.3e} ({time.perf_counter() - t0:.2f}s)")

    print(f"{'n':>3}  {'cylinders':>9}  {'max modulus dev':>15}  {'reassembly residual':>19}  {'y exact':>7}")
    failed = False
    for n in range(5, args.max_n + 1, 2):
        ref = float(highprec.shear_coefficient(n))
        dev = max(abs(c.modulus - ref) for c in decompose_cylinders(build_surface(n)))
        rep = verify_reassembly(n)
        ok = dev < args.tol and rep.passed
        failed = failed or not ok
        print(f"{n:>3}  {(n - 1) // 2:>9}  {dev:>15.3e}  {rep.max_residual:>19.3e}  {str(rep.y_preserved):>7}")
    if failed or worst >= args.tol:
        print("FAILED", file=sys.stderr)
        return 1
    print("all checks passed")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
