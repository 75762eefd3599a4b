"""Benchmark the compiled series kernels against the pure-Python twins.

Micro-benchmarks call both implementations in-process; the end-to-end rows
re-run an identity verification in subprocesses with QCHAINS_PURE toggled,
so each measurement uses a freshly selected backend.

Usage:  python benchmarks/bench_kernels.py [--orders 64,256] [--repeat 3]
"""

import argparse
import os
import subprocess
import sys
from time import perf_counter

from qchains import _kernels_py

try:
    from qchains import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def euler_coeffs(order):
    nums = [1] + [0] * order
    for r in range(1, order + 1):
        for i in range(order, r - 1, -1):
            nums[i] -= nums[i - r]
    return nums


def best_of(fn, repeat):
    best = None
    for _ in range(repeat):
        t0 = perf_counter()
        fn()
        dt = perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def bench_micro(orders, repeat):
    rows = []
    for order in orders:
        poch = euler_coeffs(order)
        parts = _kernels_py.inv_scaled(poch, order)  # partition numbers
        cases = [
            (f"conv_trunc order={order}", lambda m: m.conv_trunc(parts, parts, order)),
            (f"inv_scaled order={order}", lambda m: m.inv_scaled(poch, order)),
            (
                f"geom_inv_mul x128 order={order}",
                lambda m: [m.geom_inv_mul(parts, r, order) for r in range(1, 129)],
            ),
        ]
        for name, work in cases:
            pure = best_of(lambda: work(_kernels_py), repeat)
            if _kernels_c is None:
                rows.append((name, pure, None))
            else:
                comp = best_of(lambda: work(_kernels_c), repeat)
                rows.append((name, pure, comp))
    return rows


END_TO_END = (
    "from qchains.identities import AGSpec, verify_ag;"
    "from time import perf_counter;"
    "t0 = perf_counter();"
    "assert all(verify_ag(AGSpec(k, i, 60))[0] for k in (2, 3, 4, 5)"
    "           for i in range(1, k + 1));"
    "print(perf_counter() - t0)"
)


def bench_end_to_end(repeat):
    def run(pure):
        env = dict(os.environ)
        if pure:
            env["QCHAINS_PURE"] = "1"
        else:
            env.pop("QCHAINS_PURE", None)
        best = None
        for _ in range(repeat):
            out = subprocess.run(
                [sys.executable, "-c", END_TO_END],
                env=env,
                capture_output=True,
                text=True,
                check=True,
            )
            dt = float(out.stdout.strip())
            best = dt if best is None else min(best, dt)
        return best

    pure = run(pure=True)
    comp = None if _kernels_c is None else run(pure=False)
    return [("verify_ag k=2..5 order=60 (subprocess)", pure, comp)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--orders", default="64,256")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--skip-end-to-end", action="store_true")
    args = ap.parse_args()
    orders = [int(v) for v in args.orders.split(",")]

    if _kernels_c is None:
        print("compiled kernels not available; showing pure timings only\n")

    rows = bench_micro(orders, args.repeat)
    if not args.skip_end_to_end:
        rows += bench_end_to_end(args.repeat)

    width = max(len(r[0]) for r in rows)
    print(f"{'benchmark'.ljust(width)}  {'pure (s)':>10}  {'cython (s)':>10}  speedup")
    for name, pure, comp in rows:
        if comp is None:
            print(f"{name.ljust(width)}  {pure:10.4f}  {'-':>10}")
        else:
            print(f"{name.ljust(width)}  {pure:10.4f}  {comp:10.4f}  {pure / comp:6.2f}x")


if __name__ == "__main__":
    main()
