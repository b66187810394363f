"""Throughput benchmark: compiled step kernels vs the numpy fallback.

Usage: python benchmarks/bench_step.py [--repeats 5]

Reports node-updates per second for each kernel and the speedup of the
compiled extension.  Run with WAVELAB_PURE_PYTHON=1 to confirm the
fallback is selected at import.
"""

import argparse
import time

import numpy as np

from wavelab.kernels import BACKEND, reference

try:
    from wavelab.kernels import _core
except ImportError:
    _core = None

CASES = [
    ("step_periodic_1d", (16384,), 2000),
    ("step_box_1d", (16384,), 2000),
    ("step_radial_1d", (4096,), 4000),
    ("step_periodic_2d", (256, 256), 200),
    ("step_box_2d", (256, 256), 200),
    ("step_periodic_3d", (48, 48, 48), 60),
    ("step_box_3d", (48, 48, 48), 60),
]


def bench(mod, name, shape, steps, repeats):
    rng = np.random.default_rng(3)
    u_prev = rng.normal(size=shape)
    u_curr = rng.normal(size=shape)
    had = np.abs(rng.normal(size=shape))
    out = np.empty_like(u_curr)
    fn = getattr(mod, name)
    best = np.inf
    for _ in range(repeats):
        a, b, c = u_prev.copy(), u_curr.copy(), out.copy()
        t0 = time.perf_counter()
        for _ in range(steps):
            fn(a, b, c, 0.4, had)
            a, b, c = b, c, a
        best = min(best, time.perf_counter() - t0)
    return steps * np.prod(shape) / best  # node updates per second


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    print(f"selected backend at import: {BACKEND}")
    header = f"{'kernel':<20} {'shape':<14} {'numpy (Mnode/s)':>16}"
    if _core is not None:
        header += f" {'compiled (Mnode/s)':>19} {'speedup':>8}"
    print(header)
    for name, shape, steps in CASES:
        ref_rate = bench(reference, name, shape, steps, args.repeats)
        line = f"{name:<20} {str(shape):<14} {ref_rate/1e6:>16.1f}"
        if _core is not None:
            core_rate = bench(_core, name, shape, steps, args.repeats)
            line += f" {core_rate/1e6:>19.1f} {core_rate/ref_rate:>8.2f}"
        print(line)
    if _core is None:
        print("compiled extension not built; fallback only")


if __name__ == "__main__":
    main()
