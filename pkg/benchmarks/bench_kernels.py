"""Timing comparison of the compiled and pure-Python kernel backends.

Runs the same workloads through ``anyonspec.specfun._kernels`` (compiled
extension, when built) and ``anyonspec.specfun._kernels_py`` and prints a
small table.  Invoke from the repository root:

    python3 benchmarks/bench_kernels.py [--repeat 5]

The two backends implement identical algorithms, so the reported values
must agree to roundoff; the benchmark asserts that before timing.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from anyonspec.specfun import _kernels_py

try:
    from anyonspec.specfun import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def _workload_besselk(mod) -> float:
    """Scalar besselk calls across all three regimes."""
    orders = (0.05, 0.3, 0.5, 0.7, 0.95)
    xs = np.geomspace(1e-4, 60.0, 400)
    acc = 0.0
    for nu in orders:
        for x in xs:
            acc += mod.besselk_eval(nu, float(x))[0]
    return acc


def _workload_many(mod) -> float:
    """Vector besselk path, as used by the Gram assembly."""
    xs = np.geomspace(1e-3, 30.0, 20000)
    return float(mod.besselk_many(0.37, xs).sum())


def _workload_gamma(mod) -> float:
    xs = np.linspace(0.01, 1.99, 50000)
    return sum(mod.gamma_pos(float(x)) for x in xs)


WORKLOADS = [
    ("besselk scalar (3 regimes)", _workload_besselk),
    ("besselk vector (20k pts)", _workload_many),
    ("gamma (50k pts)", _workload_gamma),
]


def _time(fn, mod, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(mod)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3, help="timing repeats")
    args = parser.parse_args()

    if _kernels_c is None:
        print("compiled backend not available; timing pure Python only")

    print(f"{'workload':34s} {'python':>10s} {'compiled':>10s} {'speedup':>8s}")
    for name, fn in WORKLOADS:
        ref = fn(_kernels_py)
        t_py = _time(fn, _kernels_py, args.repeat)
        if _kernels_c is not None:
            val = fn(_kernels_c)
            if not np.isclose(val, ref, rtol=1e-12):
                raise SystemExit(
                    f"backend mismatch in {name!r}: {val!r} vs {ref!r}"
                )
            t_c = _time(fn, _kernels_c, args.repeat)
            print(f"{name:34s} {t_py:9.4f}s {t_c:9.4f}s {t_py / t_c:7.1f}x")
        else:
            print(f"{name:34s} {t_py:9.4f}s {'-':>10s} {'-':>8s}")


if __name__ == "__main__":
    main()
