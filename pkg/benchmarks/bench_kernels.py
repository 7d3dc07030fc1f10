#!/usr/bin/env python3
"""Timing comparison of the compiled kernels against their numpy twins.

Runs each hot kernel through both implementations at a few sizes,
reports wall times, the speedup, and the worst output discrepancy.
The compiled path is what `dulab` uses by default; setting
DULAB_NO_NUMBA=1 switches the whole package to the numpy path, and this
script verifies that doing so changes performance, not results.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from dulab import _accel
from dulab.rng import Stream


def timed(fn, *args, repeat: int) -> tuple[float, object]:
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def row(name: str, size: str, t_np: float, t_nb: float, diff: float) -> None:
    speed = t_np / t_nb if t_nb > 0 else float("inf")
    print(
        f"{name:<22} {size:<14} {t_np * 1e3:>10.3f} {t_nb * 1e3:>10.3f} "
        f"{speed:>8.1f}x {diff:>12.2e}"
    )


def bench_normals(repeat: int) -> None:
    for n in (10_000, 1_000_000):
        args = (123456789, n)
        t_np, (a, sa) = timed(_accel.normals_numpy, *args, repeat=repeat)
        t_nb, (b, sb) = timed(_accel.normals_numba, *args, repeat=repeat)
        diff = float(np.abs(a - b).max()) + abs(sa - sb)
        row("normals", f"n={n}", t_np, t_nb, diff)


def bench_greedy_scan(repeat: int) -> None:
    rng = Stream(7)
    for n in (64, 256, 1024):
        a = rng.complex_normal(n)
        b = rng.complex_normal(n)
        dist = np.abs(a[:, None] - b[None, :])
        order = np.argsort(dist.reshape(-1), kind="stable").astype(np.int64)
        t_np, pa = timed(_accel.greedy_scan_numpy, order, n, repeat=repeat)
        t_nb, pb = timed(_accel.greedy_scan_numba, order, n, repeat=repeat)
        diff = float(np.abs(pa - pb).max())
        row("greedy_scan", f"n={n}", t_np, t_nb, diff)


def bench_quadratic(repeat: int) -> None:
    rng = Stream(11)
    for L in (6, 8, 10):
        a = rng.complex_normal((L, L))
        h = (a + a.conj().T) / 2
        b = rng.complex_normal((L, L))
        delta = (b - b.T) / 2
        t_np, ha = timed(_accel.quadratic_many_body_numpy, h, delta, repeat=repeat)
        t_nb, hb = timed(_accel.quadratic_many_body_numba, h, delta, repeat=repeat)
        diff = float(np.abs(ha - hb).max())
        row("quadratic_many_body", f"L={L}", t_np, t_nb, diff)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3, help="timing repetitions (best-of)")
    args = parser.parse_args()

    if not _accel.USING_NUMBA:
        print(
            "compiled path unavailable (numba missing or DULAB_NO_NUMBA set); "
            "nothing to compare"
        )
        return 1

    print("warming up the compiled kernels (first call includes JIT)...")
    _accel.normals_numba(0, 16)
    _accel.greedy_scan_numba(np.arange(4, dtype=np.int64), 2)
    z = np.zeros((2, 2), dtype=complex)
    _accel.quadratic_many_body_numba(z, z)

    print(
        f"\n{'kernel':<22} {'size':<14} {'numpy ms':>10} {'numba ms':>10} "
        f"{'speedup':>9} {'max |diff|':>12}"
    )
    bench_normals(args.repeat)
    bench_greedy_scan(args.repeat)
    bench_quadratic(args.repeat)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
