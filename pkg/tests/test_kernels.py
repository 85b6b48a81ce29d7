import subprocess
import sys

import numpy as np
import pytest

from rounddist import _kernels
from rounddist._kernels import _pure

compiled = pytest.importorskip("rounddist._kernels._core")


@pytest.fixture(scope="module")
def rng():
    return np.random.Generator(np.random.Philox(key=99))


class TestEquivalence:
    def test_round_nearest_array(self, rng):
        x = rng.uniform(-1e5, 1e5, 100_000)
        x = np.concatenate([x, [0.0, 65504.0, -65504.0, 1e-30, 7e4]])
        a = _pure.round_nearest_array(x, 10, -14, 15)
        b = compiled.round_nearest_array(x, 10, -14, 15)
        assert np.array_equal(a, b)

    def test_piecewise_cheb_eval(self, rng):
        breaks = np.linspace(-2.0, 3.0, 33)
        coefs = rng.normal(size=(32, 17))
        pts = rng.uniform(-2.5, 3.5, 50_000)
        a = _pure.piecewise_cheb_eval(pts, breaks, coefs)
        b = compiled.piecewise_cheb_eval(pts, breaks, coefs)
        assert np.max(np.abs(a - b)) < 1e-12

    def test_error_density_sum(self, rng):
        breaks = np.linspace(0.5, 4.0, 9)
        coefs = rng.uniform(0.1, 1.0, size=(8, 5))
        t = np.linspace(-0.99, 0.99, 257)
        z = rng.uniform(0.6, 3.5, 5_000)
        a = _pure.error_density_sum(t, z, 2.0**-11, breaks, coefs)
        b = compiled.error_density_sum(t, z, 2.0**-11, breaks, coefs)
        assert np.max(np.abs(a - b)) < 1e-9 * np.max(np.abs(a))


class TestDispatch:
    def test_compiled_active_by_default(self):
        assert _kernels.HAVE_COMPILED
        assert _kernels.IMPL == "compiled"

    def test_env_override_selects_pure(self):
        code = (
            "from rounddist import _kernels; "
            "print(_kernels.IMPL)"
        )
        out = subprocess.run(
            [sys.executable, "-c", code],
            env={"ROUNDDIST_PURE": "1", "PATH": "/usr/bin:/bin"},
            capture_output=True,
            text=True,
            check=True,
        )
        assert out.stdout.strip() == "pure"
