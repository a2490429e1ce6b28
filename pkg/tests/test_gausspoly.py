"""Tests for the exact polynomial-times-Gaussian calculus."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pseudoht.gausspoly import (
    GaussMixture,
    GaussPoly,
    batched_osc_integral,
    gaussian_poly_integral,
)


def rand_points(rng, n, dim, scale=2.0):
    return rng.normal(size=(n, dim)) * scale


class TestBasics:
    def test_evaluate_matches_formula(self):
        phi = GaussPoly(2, np.diag([1.0, 2.0]), {(1, 0): 1.0, (0, 0): 0.5},
                        shift=[0.3, -0.2], freq=[0.0, 1.5])
        u = np.array([0.7, 0.4])
        w = u - phi.shift
        expected = (w[0] + 0.5) * np.exp(-0.5 * (w[0] ** 2 + 2 * w[1] ** 2)) \
            * np.exp(1j * 1.5 * u[1])
        assert abs(phi.evaluate(u) - expected) < 1e-14

    def test_derivative_of_1d_gaussian(self):
        phi = GaussPoly.iso_gaussian(1)
        d = phi.differentiate(0)
        # d/du exp(-u^2/2) = -u exp(-u^2/2)
        assert d.poly == {(1,): pytest.approx(-1.0)}

    def test_derivative_vs_finite_differences(self):
        rng = np.random.default_rng(0)
        phi = GaussPoly(3, np.diag([1.0, 0.5, 2.0]), {(0, 1, 2): 1.3 - 0.2j, (1, 0, 0): 1.0},
                        shift=[0.1, 0.0, -0.3], freq=[0.2, 0.0, 0.0])
        h = 1e-5
        for ax in range(3):
            d = phi.differentiate(ax)
            for u in rand_points(rng, 5, 3, 1.0):
                up, um = u.copy(), u.copy()
                up[ax] += h
                um[ax] -= h
                fd = (phi.evaluate(up) - phi.evaluate(um)) / (2 * h)
                assert abs(d.evaluate(u) - fd) < 1e-8

    def test_precompose_rotation_pointwise(self):
        rng = np.random.default_rng(1)
        th = 0.7
        R = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
        phi = GaussPoly(2, np.diag([1.0, 3.0]), {(2, 1): 1.0}, shift=[0.2, 0.1])
        psi = phi.precompose_affine(R, np.array([0.3, -0.4]))
        for u in rand_points(rng, 10, 2, 1.5):
            assert abs(psi.evaluate(u) - phi.evaluate(R @ u + [0.3, -0.4])) < 1e-13

    def test_restrict_pointwise(self):
        rng = np.random.default_rng(2)
        A = np.array([[2.0, 0.3, 0.1], [0.3, 1.0, 0.0], [0.1, 0.0, 1.5]])
        phi = GaussPoly(3, A, {(1, 1, 1): 2.0, (0, 0, 2): 1.0 + 1j},
                        shift=[0.1, -0.2, 0.4], freq=[0.0, 0.5, -0.3])
        fixed_val = np.array([0.6])
        sl = phi.restrict([1], fixed_val)
        for u in rand_points(rng, 10, 2, 1.2):
            full = phi.evaluate(np.array([u[0], fixed_val[0], u[1]]))
            assert abs(sl.evaluate(u) - full) < 1e-12

    def test_multiply_monomial(self):
        phi = GaussPoly.iso_gaussian(2).multiply_monomial((1, 2))
        u = np.array([0.4, -0.7])
        assert abs(phi.evaluate(u) - u[0] * u[1] ** 2 * np.exp(-0.5 * u @ u)) < 1e-14


class TestFourier:
    def test_gaussian_fixed_point(self):
        phi = GaussPoly.iso_gaussian(2)
        f = phi.fourier()
        rng = np.random.default_rng(3)
        for u in rand_points(rng, 5, 2):
            assert abs(f.evaluate(u) - phi.evaluate(u)) < 1e-13

    def test_hermite_eigenfunction(self):
        # u exp(-u^2/2) -> -i xi exp(-xi^2/2)
        phi = GaussPoly(1, np.eye(1), {(1,): 1.0})
        f = phi.fourier()
        x = np.array([0.8])
        assert abs(f.evaluate(x) - (-1j) * x[0] * np.exp(-x[0] ** 2 / 2)) < 1e-14

    def test_diagonal_scaling_product_formula(self):
        # exp(-beta u^2/2) -> beta^{-1/2} exp(-xi^2/(2 beta)) per axis
        beta = np.array([0.7, 2.4])
        phi = GaussPoly.gaussian(np.diag(beta))
        f = phi.fourier()
        xi = np.array([0.5, -1.1])
        expected = np.prod(beta ** -0.5) * np.exp(-0.5 * np.sum(xi ** 2 / beta))
        assert abs(f.evaluate(xi) - expected) < 1e-12

    def test_double_transform_is_reflection(self):
        rng = np.random.default_rng(4)
        phi = GaussPoly(2, np.array([[1.5, 0.4], [0.4, 1.0]]), {(2, 1): 1.0, (0, 0): 0.3j},
                        shift=[0.3, -0.2], freq=[0.7, 0.1])
        ff = phi.fourier().fourier()
        for u in rand_points(rng, 8, 2):
            assert abs(ff.evaluate(u) - phi.evaluate(-u)) < 1e-10

    def test_fourier_by_quadrature(self):
        phi = GaussPoly(1, np.eye(1) * 1.3, {(2,): 1.0, (0,): -0.5}, shift=[0.4], freq=[0.6])
        f = phi.fourier()
        xs = np.linspace(-12, 12, 6001)
        for xi in (0.0, 0.7, -1.9):
            vals = phi.evaluate_many(xs[:, None]) * np.exp(-1j * xs * xi)
            num = np.trapezoid(vals, xs) / np.sqrt(2 * np.pi)
            assert abs(f.evaluate([xi]) - num) < 1e-8

    def test_parseval_random_pair(self):
        rng = np.random.default_rng(5)
        for _ in range(3):
            a1, a2 = rng.uniform(0.5, 2.0, size=2)
            phi = GaussPoly(2, np.diag([a1, a2]), {(1, 0): 1.0, (0, 0): 0.2})
            psi = GaussPoly(2, np.diag([a2, a1]), {(0, 1): 0.5 - 0.1j, (0, 0): 1.0})
            # int phi conj(psi) equals int Fphi conj(Fpsi); conj(psi) has the
            # same Gaussian with conjugated coefficients for freq=0, shift=0
            def pair(f, g):
                gc = GaussPoly(2, g.quad, {m: np.conj(c) for m, c in g.poly.items()},
                               g.shift, g.freq)
                prod_quad = f.quad + gc.quad
                from pseudoht.gausspoly import poly_mul
                return gaussian_poly_integral(prod_quad, np.zeros(2),
                                              poly_mul(f.poly, gc.poly))
            lhs = pair(phi, psi)
            rhs = pair(phi.fourier(), psi.fourier())
            assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs))

    def test_partial_fourier_matches_full_on_product(self):
        # product function: partial in z then in x equals full transform
        phi = GaussPoly(3, np.diag([1.0, 2.0, 0.5]), {(1, 0, 2): 1.0}, shift=[0.1, 0.0, -0.2])
        both = phi.partial_fourier([0]).partial_fourier([1, 2])
        full = phi.fourier()
        rng = np.random.default_rng(6)
        for u in rand_points(rng, 6, 3):
            assert abs(both.evaluate(u) - full.evaluate(u)) < 1e-12


class TestIntegrals:
    def test_plain_gaussian_integral(self):
        phi = GaussPoly.iso_gaussian(2)
        assert abs(phi.integral() - 2 * np.pi) < 1e-13

    def test_poly_moments(self):
        # int u1^2 exp(-|u|^2/2) du over R^2 = 2 pi
        phi = GaussPoly(2, np.eye(2), {(2, 0): 1.0})
        assert abs(phi.integral() - 2 * np.pi) < 1e-12

    def test_integral_with_shift_freq(self):
        # int exp(-(u-c)^2/2) e^{ibu} du = sqrt(2 pi) e^{ibc} e^{-b^2/2}
        phi = GaussPoly(1, np.eye(1), {(0,): 1.0}, shift=[0.7], freq=[1.1])
        expected = np.sqrt(2 * np.pi) * np.exp(1j * 1.1 * 0.7 - 1.1 ** 2 / 2)
        assert abs(phi.integral() - expected) < 1e-13

    def test_oscillatory_vs_quadrature(self):
        phi = GaussPoly(2, np.array([[1.2, 0.2], [0.2, 0.9]]), {(1, 1): 1.0, (0, 0): 0.4},
                        shift=[0.2, -0.1])
        tau = np.array([1.0, -1.0])
        w = 0.8
        xs = np.linspace(-9, 9, 701)
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        U = np.stack([X.ravel(), Y.ravel()], axis=1)
        vals = phi.evaluate_many(U) * np.exp(1j * w * (U[:, 0] ** 2 - U[:, 1] ** 2))
        num = np.sum(vals) * (xs[1] - xs[0]) ** 2
        ana = batched_osc_integral(phi, np.array([w]), tau)[0]
        assert abs(ana - num) < 1e-6

    def test_batched_diag_matches_general(self):
        phi = GaussPoly(2, np.diag([1.0, 1.7]), {(2, 1): 0.3, (0, 0): 1.0},
                        shift=[0.5, 0.2], freq=[0.1, -0.4])
        tau = np.array([1.0, -1.0])
        ws = np.array([0.0, 0.3, -2.0, 11.0])
        fast = batched_osc_integral(phi, ws, tau)
        slow = np.array([phi.integrate_against(W=-2j * w * np.diag(tau)) for w in ws])
        assert np.max(np.abs(fast - slow)) < 1e-12

    def test_l1_norm_gaussian(self):
        phi = GaussPoly.iso_gaussian(1)
        assert abs(phi.l1_norm() - np.sqrt(2 * np.pi)) < 1e-8

    def test_derivative_integrates_to_zero(self):
        phi = GaussPoly(1, np.eye(1) * 0.8, {(1,): 1.0, (0,): 0.3}, shift=[0.2])
        assert abs(phi.differentiate(0).differentiate(0).integral()) < 1e-12

    def test_laplacian_power_zero_is_identity(self):
        phi = GaussPoly.iso_gaussian(2)
        assert phi.laplacian_power(0) is phi

    def test_laplacian_l1_vs_grid(self):
        phi = GaussPoly.iso_gaussian(2).laplacian()
        xs = np.linspace(-8, 8, 3201)
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        U = np.stack([X.ravel(), Y.ravel()], axis=1)
        num = np.sum(np.abs(phi.evaluate_many(U))) * (xs[1] - xs[0]) ** 2
        assert abs(phi.l1_norm() - num) < 1e-6


class TestMixture:
    def test_mixture_linearity(self):
        a = GaussPoly.iso_gaussian(2)
        b = GaussPoly.gaussian(np.diag([2.0, 0.5]), coeff=0.3)
        mix = GaussMixture([a, b])
        u = np.array([0.3, 0.4])
        assert abs(mix.evaluate(u) - a.evaluate(u) - b.evaluate(u)) < 1e-14
        assert abs(mix.integral() - a.integral() - b.integral()) < 1e-12

    def test_serialization_roundtrip(self):
        phi = GaussPoly(2, np.array([[1.5, 0.2], [0.2, 1.0]]), {(1, 2): 0.5 + 2j},
                        shift=[0.1, 0.9], freq=[0.0, -1.0])
        clone = GaussPoly.from_json(phi.to_json())
        u = np.array([0.4, -0.2])
        assert abs(phi.evaluate(u) - clone.evaluate(u)) < 1e-15


@settings(max_examples=25, deadline=None)
@given(
    a=st.floats(0.3, 3.0),
    c=st.floats(-1.0, 1.0),
    b=st.floats(-2.0, 2.0),
    x=st.floats(-2.0, 2.0),
)
def test_closure_chain_hypothesis(a, c, b, x):
    """Class operations stay in the class and evaluate consistently."""
    phi = GaussPoly(1, np.eye(1) * a, {(0,): 1.0}, shift=[c], freq=[b])
    out = phi.differentiate(0).multiply_monomial((1,)).fourier()
    assert isinstance(out, GaussPoly)
    val = out.evaluate([x])
    assert np.isfinite(val.real) and np.isfinite(val.imag)
