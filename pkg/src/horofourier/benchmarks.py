"""Timing comparison between the compiled sweep kernels and the pure-numpy
fallbacks.  Run with python -m horofourier.benchmarks."""

import argparse
import time

import numpy as np

from ._accel import HAS_NUMBA, USE_JIT
from ._kernels import forward_sweep, inverse_sweep


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run(npts=2048, nb=128, nlam=601, repeats=3):
    rng = np.random.default_rng(0)
    A = rng.normal(0.0, 0.8, size=(npts, nb))
    base = rng.normal(0.0, 1.0, size=(npts, nb)).astype(np.complex128)
    wphi = (rng.normal(size=(nlam, nb)) + 1j * rng.normal(size=(nlam, nb)))
    lam0, dlam, rho = 0.0, 0.05, 0.5

    rows = []
    variants = [("numpy", False)]
    if HAS_NUMBA:
        # warm the compile cache so timings measure steady-state throughput
        forward_sweep(base[:8], A[:8], lam0, dlam, 4, use_jit=True)
        inverse_sweep(wphi[:4], A[:8], lam0, dlam, rho, use_jit=True)
        variants.append(("numba", True))

    for name, jit in variants:
        tf = _time(lambda: forward_sweep(base, A, lam0, dlam, nlam,
                                         use_jit=jit), repeats)
        ti = _time(lambda: inverse_sweep(wphi, A, lam0, dlam, rho,
                                         use_jit=jit), repeats)
        work = npts * nb * nlam
        rows.append((name, tf, work / tf / 1e9, ti, work / ti / 1e9))

    print(f"sweep kernels: {npts} points x {nb} directions x {nlam} frequencies")
    print(f"numba available: {HAS_NUMBA}, jit enabled by default: {USE_JIT}")
    print(f"{'variant':<8} {'fwd s':>10} {'fwd Git/s':>10} "
          f"{'inv s':>10} {'inv Git/s':>10}")
    for name, tf, gf, ti, gi in rows:
        print(f"{name:<8} {tf:>10.4f} {gf:>10.2f} {ti:>10.4f} {gi:>10.2f}")
    if len(rows) == 2:
        print(f"forward speedup x{rows[0][1] / rows[1][1]:.1f}, "
              f"inverse speedup x{rows[0][3] / rows[1][3]:.1f}")
    return rows


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=2048)
    parser.add_argument("--directions", type=int, default=128)
    parser.add_argument("--frequencies", type=int, default=601)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args(argv)
    run(args.points, args.directions, args.frequencies, args.repeats)


if __name__ == "__main__":
    main()
