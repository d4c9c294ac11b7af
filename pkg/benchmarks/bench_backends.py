"""Time the numba kernels against their pure-numpy counterparts.

    python benchmarks/bench_backends.py [--sizes 64 128 256 512] [--repeat 5]

Both implementations are taken from ``stokes_tension._hot.IMPLS`` in the
same process, so the comparison does not depend on ``STOKES_TENSION_NUMBA``.
The first numba call (JIT compile or cache load) is excluded.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from stokes_tension import _hot
from stokes_tension.curve import fourier_curve


def cases(n: int):
    c = fourier_curve(n, x_cos=[0.1, 1.3, 0.0, 0.1], y_sin=[0.0, 1.0, 0.15])
    rng = np.random.default_rng(0)
    F = rng.standard_normal((n, 2))
    th = np.linspace(0, 2 * np.pi, 200, endpoint=False)
    pts = np.column_stack([3 * np.cos(th), 3 * np.sin(th)])
    X, tau, speed, nrm = (np.ascontiguousarray(a) for a in (c.position, c.tangent, c.speed, c.normal))
    return {
        "self_blocks": (X, tau, speed, c.theta),
        "star_norm": (X, c.theta),
        "target_fields": (pts, X, F, c.grid.weight),
        "double_layer": (pts, X, nrm, speed, c.grid.weight),
    }


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 128, 256, 512])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    if "numba" not in _hot.IMPLS:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'kernel':<14}{'N':>6}{'numpy [ms]':>13}{'numba [ms]':>13}{'speedup':>10}")
    for n in args.sizes:
        for name, a in cases(n).items():
            timings = {}
            for backend in ("numpy", "numba"):
                fn = _hot.IMPLS[backend][name]
                fn(*a)  # warm up
                t = timeit.Timer(lambda: fn(*a)).repeat(repeat=args.repeat, number=1)
                timings[backend] = 1e3 * min(t)
            speedup = timings["numpy"] / timings["numba"]
            print(f"{name:<14}{n:>6}{timings['numpy']:>13.3f}{timings['numba']:>13.3f}{speedup:>9.1f}x")


if __name__ == "__main__":
    main()
