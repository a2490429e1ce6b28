"""Compiled extension vs NumPy fallback: exact agreement on random inputs."""
import numpy as np
import pytest

from pseudoht._backend import available_backends, get_backend
from pseudoht.kernels import qj_table
from pseudoht.quadrature import half_disc_rule

needs_ext = pytest.mark.skipif("ext" not in available_backends(),
                               reason="compiled extension not built")


@needs_ext
class TestBackendAgreement:
    def setup_method(self):
        self.py = get_backend("py")
        self.ext = get_backend("ext")
        self.rng = np.random.default_rng(123)

    def test_kappa(self):
        r = np.abs(self.rng.normal(size=2000)) * 40
        r[0] = 0.0
        assert np.max(np.abs(self.py.kappa_vec(r) - self.ext.kappa_vec(r))) < 1e-14

    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_volume_element(self, n):
        r = np.concatenate([[0.0, 1e-9, 100.0, 3000.0],
                            np.abs(self.rng.normal(size=500)) * 30])
        a = self.py.volume_element_vec(r, n)
        b = self.ext.volume_element_vec(r, n)
        assert np.max(np.abs(a - b)) < 1e-14

    @pytest.mark.parametrize("power", [0, 1, 2])
    def test_osc_rho_sum(self, power):
        rho, w = half_disc_rule(96, 0.5)
        v = self.rng.normal(size=400) * 200
        a = self.py.osc_rho_sum(v, rho, w, power)
        b = self.ext.osc_rho_sum(v, rho, w, power)
        assert np.max(np.abs(a - b)) < 1e-13

    @pytest.mark.parametrize("ns", [(1, 1), (2, 1), (2, 2), (3, 1)])
    def test_offcone_accumulate(self, ns):
        n, s = ns
        pw, cf, ix = qj_table(n, s)
        rho = np.linspace(0.01, 0.99, 257)
        for P, sign in ((3.0, 1.0), (-3.0, -1.0)):
            a = self.py.offcone_accumulate(rho, P, 0.04, pw, cf, ix, n, s, sign)
            b = self.ext.offcone_accumulate(rho, P, 0.04, pw, cf, ix, n, s, sign)
            assert np.max(np.abs(a - b)) < 1e-13 * max(1, np.max(np.abs(a)))


def test_backend_name_reported():
    import pseudoht

    assert pseudoht.BACKEND_NAME in available_backends()
