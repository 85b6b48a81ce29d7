"""Compare the compiled kernels against the pure-NumPy fallback.

Run as:  python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from rounddist._kernels import HAVE_COMPILED, IMPL
from rounddist._kernels import _pure

if HAVE_COMPILED:
    from rounddist._kernels import _core
else:
    _core = None


def bench(label, fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    print(f"  {label:10s} {best * 1e3:10.2f} ms")
    return best


def main():
    rng = np.random.Generator(np.random.Philox(key=0))
    print(f"active implementation: {IMPL}")

    print("round_nearest_array (4e6 values, p=10)")
    x = rng.uniform(-1e4, 1e4, 4_000_000)
    t_pure = bench("pure", _pure.round_nearest_array, x, 10, -14, 15)
    if _core:
        t_core = bench("compiled", _core.round_nearest_array, x, 10, -14, 15)
        assert np.array_equal(
            _pure.round_nearest_array(x, 10, -14, 15),
            _core.round_nearest_array(x, 10, -14, 15),
        )
        print(f"  speedup    {t_pure / t_core:10.1f}x")

    print("piecewise_cheb_eval (1e6 points, 64 pieces, degree 16)")
    breaks = np.linspace(-1.0, 1.0, 65)
    coefs = rng.normal(size=(64, 17))
    pts = rng.uniform(-1, 1, 1_000_000)
    t_pure = bench("pure", _pure.piecewise_cheb_eval, pts, breaks, coefs)
    if _core:
        t_core = bench("compiled", _core.piecewise_cheb_eval, pts, breaks, coefs)
        err = np.max(
            np.abs(
                _pure.piecewise_cheb_eval(pts, breaks, coefs)
                - _core.piecewise_cheb_eval(pts, breaks, coefs)
            )
        )
        assert err < 1e-12, err
        print(f"  speedup    {t_pure / t_core:10.1f}x")

    print("error_density_sum (128 t-nodes x 1e5 representables)")
    t_nodes = np.linspace(-0.99, 0.99, 128)
    z = np.abs(rng.normal(size=100_000)) + 0.5
    t_pure = bench("pure", _pure.error_density_sum, t_nodes, z, 2.0**-11, breaks, coefs)
    if _core:
        t_core = bench("compiled", _core.error_density_sum, t_nodes, z, 2.0**-11, breaks, coefs)
        a = _pure.error_density_sum(t_nodes, z, 2.0**-11, breaks, coefs)
        b = _core.error_density_sum(t_nodes, z, 2.0**-11, breaks, coefs)
        assert np.max(np.abs(a - b)) < 1e-9 * np.max(np.abs(a))
        print(f"  speedup    {t_pure / t_core:10.1f}x")


if __name__ == "__main__":
    main()
