"""Compare the compiled set kernels against the pure-Python reference.

Runs the three hot kernels (product, boundary, symdiff_count) on box-shaped
workloads for each group family and reports per-call times plus speedups.

    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --quick
"""

from __future__ import annotations

import argparse
import itertools
import statistics
import time

from odotile._kernels import _KIND_CODES, _compiled, pure


def cube(rank: int, m: int) -> list:
    return [tuple(v) for v in itertools.product(range(m), repeat=rank)]


def ball(rank: int, r: int) -> list:
    return [tuple(v) for v in itertools.product(range(-r, r + 1), repeat=rank)]


def workloads(quick: bool):
    scale = 8 if quick else 16
    z = cube(1, 256 * scale)
    z2 = cube(2, 4 * scale)
    h = cube(3, scale)
    yield "product", "lattice", (z, ball(1, 2))
    yield "product", "lattice", (z2, ball(2, 1))
    yield "product", "heisenberg", (h, ball(3, 1))
    yield "boundary", "lattice", (ball(1, 2), z)
    yield "boundary", "lattice", (ball(2, 1), z2)
    yield "boundary", "heisenberg", (ball(3, 1), h)
    yield "symdiff_count", "lattice", (z, (1,), "left")
    yield "symdiff_count", "lattice", (z2, (1, 0), "right")
    yield "symdiff_count", "heisenberg", (h, (0, 1, 0), "right")


def bench(fn, args, repeats: int) -> float:
    fn(*args)  # warmup
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    ap.add_argument("--repeats", type=int, default=5)
    opts = ap.parse_args(argv)

    if _compiled is None:
        print("compiled kernels not importable; nothing to compare")
        return 1

    header = f"{'kernel':<14} {'kind':<11} {'rows':>8} {'pure':>10} {'cython':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, kind, args in workloads(opts.quick):
        pure_fn = getattr(pure, name)
        comp_fn = getattr(_compiled, name)
        rows = len(args[0])
        assert pure_fn(kind, *args) == comp_fn(_KIND_CODES[kind], *args)
        t_pure = bench(pure_fn, (kind, *args), opts.repeats)
        t_comp = bench(comp_fn, (_KIND_CODES[kind], *args), opts.repeats)
        print(
            f"{name:<14} {kind:<11} {rows:>8} {t_pure * 1e3:>8.2f}ms "
            f"{t_comp * 1e3:>8.2f}ms {t_pure / t_comp:>7.1f}x"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
