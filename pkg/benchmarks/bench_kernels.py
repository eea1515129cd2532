"""Compare the pure-Python and compiled contraction backends.

Times the three hot kernels on synthetic symmetric data, then an
end-to-end constrained deflation, for every backend available in this
installation.  Run as ``python benchmarks/bench_kernels.py``.
"""

import argparse
import time

import numpy as np

from odeco import SolverConfig, SymmetricTensor, sroa_cd, symmetrize
from odeco.kernels import available_backends, get_backend


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _fmt(seconds):
    if seconds < 1e-3:
        return f"{seconds * 1e6:8.1f} us"
    if seconds < 1.0:
        return f"{seconds * 1e3:8.2f} ms"
    return f"{seconds:8.2f} s "


def _ordered_backends():
    """python first so the speedup column reads relative to it."""
    names = list(available_backends())
    names.sort(key=lambda b: (b != "python", b))
    return names


def bench_kernels(n, p, inner_loops, repeats, seed):
    rng = np.random.default_rng(seed)
    T = symmetrize(rng.standard_normal(n**p), p, n)
    flat = np.ascontiguousarray(T.data.reshape(-1))
    x = rng.standard_normal(n)
    x /= np.linalg.norm(x)
    anchors = np.linalg.qr(rng.standard_normal((n, n)))[0][:2].copy()
    theta = 0.4
    rows = []
    for name in _ordered_backends():
        mod = get_backend(name)

        def full():
            for _ in range(inner_loops):
                mod.apply_full(flat, x, p)

        def partial():
            for _ in range(inner_loops):
                mod.apply_partial(flat, x, p)

        def project():
            for _ in range(inner_loops):
                mod.project_sphere_slabs(x, anchors, theta, 100, 1e-12)

        rows.append(
            (
                name,
                _time(full, repeats) / inner_loops,
                _time(partial, repeats) / inner_loops,
                _time(project, repeats) / inner_loops,
            )
        )
    return rows


def bench_end_to_end(n, p, restarts, seed):
    rng = np.random.default_rng(seed)
    T = symmetrize(rng.standard_normal(n**p), p, n)
    rows = []
    for name in _ordered_backends():
        mod = get_backend(name)
        from odeco import kernels

        saved = (
            kernels.apply_full,
            kernels.apply_partial,
            kernels.project_sphere_slabs,
            kernels.ascent_step,
        )
        kernels.apply_full = mod.apply_full
        kernels.apply_partial = mod.apply_partial
        kernels.project_sphere_slabs = mod.project_sphere_slabs
        kernels.ascent_step = mod.ascent_step
        try:
            t0 = time.perf_counter()
            sroa_cd(T, 0.5, SolverConfig(restarts=restarts, seed=seed))
            elapsed = time.perf_counter() - t0
        finally:
            (
                kernels.apply_full,
                kernels.apply_partial,
                kernels.project_sphere_slabs,
                kernels.ascent_step,
            ) = saved
        rows.append((name, elapsed))
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=8, help="dimension")
    ap.add_argument("--p", type=int, default=3, help="order")
    ap.add_argument("--loops", type=int, default=2000, help="kernel calls per timing")
    ap.add_argument("--repeats", type=int, default=5, help="timings (best kept)")
    ap.add_argument("--restarts", type=int, default=20, help="end-to-end restarts")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    print(f"backends available: {', '.join(available_backends())}")
    print(f"\nkernel timings (n={args.n}, p={args.p}, per call):")
    print(f"{'backend':10s} {'apply_full':>12s} {'apply_partial':>14s} {'project':>12s}")
    base = None
    for name, full, partial, project in bench_kernels(
        args.n, args.p, args.loops, args.repeats, args.seed
    ):
        print(f"{name:10s} {_fmt(full):>12s} {_fmt(partial):>14s} {_fmt(project):>12s}")
        if base is None:
            base = (full, partial, project)
        else:
            print(
                f"{'  speedup':10s} {base[0] / full:>11.2f}x "
                f"{base[1] / partial:>13.2f}x {base[2] / project:>11.2f}x"
            )

    print(f"\nend-to-end constrained deflation (n={args.n}, p={args.p}, "
          f"restarts={args.restarts}):")
    times = bench_end_to_end(args.n, args.p, args.restarts, args.seed)
    for name, elapsed in times:
        print(f"{name:10s} {_fmt(elapsed)}")
    if len(times) == 2:
        print(f"{'  speedup':10s} {times[0][1] / times[1][1]:>11.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
