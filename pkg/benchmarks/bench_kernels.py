"""Time the hot kernels under the numba and numpy backends.

Run from a checkout:

    python3 benchmarks/bench_kernels.py --sizes 360,2048,16384 --repeats 5

The first numba call pays JIT compilation; a warmup pass is timed out
separately so the table shows steady-state numbers.
"""

import argparse
import time

import numpy as np

from poncelet_kit import _backend
from poncelet_kit.conics import ConicGeneral
from poncelet_kit.blaschke import BlaschkeProduct, interior_curve_disk


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench(backend, zeros, conic, sizes, repeats):
    _backend.use_backend(backend)
    rows = []
    for n in sizes:
        lams = np.exp(2j * np.pi * (np.arange(n) + 0.5) / n)
        # warm up (JIT compile on the numba path, cache warm on numpy)
        roots = _backend.preimage_grid(zeros, lams[: min(n, 32)])
        _backend.chord_tangency_grid(roots, conic.u, conic.p, conic.v, conic.q)

        t_pre = best_of(lambda: _backend.preimage_grid(zeros, lams), repeats)
        roots = _backend.preimage_grid(zeros, lams)
        t_tan = best_of(
            lambda: _backend.chord_tangency_grid(
                roots, conic.u, conic.p, conic.v, conic.q
            ),
            repeats,
        )
        rows.append((n, t_pre, t_tan))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="360,2048,16384",
                    help="comma list of boundary sample counts")
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--zeros", default="0.2+0.17j,-0.42-0.17j",
                    help="comma list of zeros besides the origin")
    args = ap.parse_args()

    sizes = [int(s) for s in args.sizes.split(",")]
    zeros = np.array([complex(s) for s in args.zeros.split(",")])
    b = BlaschkeProduct(zeros=tuple(zeros))
    conic = interior_curve_disk(b) if b.degree == 3 else ConicGeneral(
        u=0.0, p=1.0, v=0.0, q=-0.25
    )

    results = {}
    for backend in ("numpy", "numba"):
        try:
            results[backend] = bench(backend, zeros, conic, sizes, args.repeats)
        except ImportError:
            print(f"{backend}: not importable, skipped")
    _backend.use_backend("auto")

    print(f"degree {b.degree}, best of {args.repeats}, times in ms")
    print(f"{'n':>8} {'kernel':>16} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for i, n in enumerate(sizes):
        for label, col in (("preimage_grid", 1), ("chord_tangency", 2)):
            t_np = results["numpy"][i][col] * 1e3
            if "numba" in results:
                t_nb = results["numba"][i][col] * 1e3
                print(f"{n:>8} {label:>16} {t_np:>10.3f} {t_nb:>10.3f}"
                      f" {t_np / t_nb:>7.1f}x")
            else:
                print(f"{n:>8} {label:>16} {t_np:>10.3f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
