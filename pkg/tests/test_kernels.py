import os
import subprocess
import sys

import numpy as np
import pytest

from fdmimo.kernels import _numpy

numba_backend = pytest.importorskip("fdmimo.kernels._numba")


def _random_case(seed):
    rng = np.random.default_rng(seed)
    a_all = 10.0 ** rng.uniform(-2, 3, size=(19, 10))
    pilots = np.array([7, 8, 9, 10, 11, 12], dtype=np.int64)
    return a_all, pilots


class TestBackendAgreement:
    def test_sqinr_kernel(self):
        for seed in range(20):
            a_all, pilots = _random_case(seed)
            args = (a_all, pilots, 100.0, 10.0, 0.96546, 0.96546, 10.0)
            np.testing.assert_allclose(
                numba_backend.hardening_sqinr_users(*args),
                _numpy.hardening_sqinr_users(*args),
                rtol=1e-12,
            )

    def test_sqinr_kernel_empty_pilots(self):
        a_all, _ = _random_case(0)
        pilots = np.array([], dtype=np.int64)
        args = (a_all, pilots, 64.0, 4.0, 1.0, 1.0, 0.0)
        np.testing.assert_allclose(
            numba_backend.hardening_sqinr_users(*args),
            _numpy.hardening_sqinr_users(*args),
            rtol=1e-12,
        )

    def test_distance_kernel(self):
        rng = np.random.default_rng(3)
        pts = rng.uniform(-1000, 1000, size=(50, 2))
        centers = rng.uniform(-1000, 1000, size=(19, 2))
        shifts = np.vstack([np.zeros((1, 2)), rng.uniform(-3000, 3000, size=(6, 2))])
        np.testing.assert_allclose(
            numba_backend.min_image_sq_dists(pts, centers, shifts),
            _numpy.min_image_sq_dists(pts, centers, shifts),
            rtol=1e-12,
        )


class TestKernelAgainstScalarPath:
    def test_matches_sqinr_module(self):
        from fdmimo.linkbudget import LinkBudget
        from fdmimo.sqinr import sqinr_hardening

        a_all, pilots = _random_case(7)
        lb = LinkBudget.synthetic(
            a_all, pilot_cells=pilots, inr=2.5, num_dl_users=10,
            num_antennas=100, alpha_u=0.8825, alpha_d=0.96546,
        )
        batch = _numpy.hardening_sqinr_users(a_all, pilots, 100.0, 10.0, 0.8825, 0.96546, 2.5)
        scalar = [sqinr_hardening(lb, k).sqinr for k in range(10)]
        np.testing.assert_allclose(batch, scalar, rtol=1e-12)


class TestEnvSelection:
    @pytest.mark.parametrize("requested", ["numpy", "numba", "auto"])
    def test_backend_flag(self, requested):
        code = "import fdmimo.kernels as k; print(k.BACKEND)"
        out = subprocess.run(
            [sys.executable, "-c", code],
            env={**os.environ, "FDMIMO_BACKEND": requested},
            capture_output=True, text=True, check=True,
        )
        expected = "numpy" if requested == "numpy" else "numba"
        assert out.stdout.strip() == expected
