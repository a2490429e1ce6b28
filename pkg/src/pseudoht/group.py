"""Group structure derived from an admissible module.

Conventions: Omega(eta) = (1/2) tau rho(eta)^T, group law

    (x, z) * (y, w) = (x + y, z + w + sum_k <Omega_k^T x, y> e_k),

horizontal fields X_j = d/dx_j + sum_k (Omega_k^T x)_j d/dz_k, and the
ultra-hyperbolic operator Delta = (X_1^2 + ... + X_n^2) - (X_{n+1}^2 + ... +
X_{2n}^2).  On the Fourier side (convention of gausspoly) the conjugated
operator is

    G phi = -P(xi) phi + (<eta,eta>_{r,s}/4) L phi + i xi^T rho(eta)^T grad_xi phi

with L the flat ultra-hyperbolic operator in xi, so that F o Delta = G o F.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clifford import AdmissibleModule, Signature, build_module, tau_matrix
from .errors import DimensionMismatch, NonPositiveScale
from .gausspoly import GaussMixture, GaussPoly, as_terms


@dataclass
class GroupPoint:
    x: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, float)
        self.z = np.asarray(self.z, float)

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.x, self.z])


class GroupStructure:
    """Omega matrices, group law, fields, and flows for one catalog module."""

    def __init__(self, module: AdmissibleModule):
        self.module = module
        self.sig = module.sig
        self.tau = module.tau
        self.omega_gen = [0.5 * self.tau @ rk.T for rk in module.rho_gen]

    @classmethod
    def from_signature(cls, sig: Signature) -> "GroupStructure":
        return cls(build_module(sig))

    def omega(self, eta) -> np.ndarray:
        eta = np.asarray(eta, float)
        if eta.shape != (self.sig.center_dim,):
            raise DimensionMismatch(f"eta must have length {self.sig.center_dim}")
        return 0.5 * self.tau @ self.module.rho(eta).T

    def group_mul(self, p: GroupPoint, q: GroupPoint) -> GroupPoint:
        n2 = 2 * self.sig.n
        if p.x.shape != (n2,) or q.x.shape != (n2,) \
                or p.z.shape != (self.sig.center_dim,) or q.z.shape != (self.sig.center_dim,):
            raise DimensionMismatch("group point dimensions do not match the structure")
        zc = np.array([float(Ok.T @ p.x @ q.x) for Ok in self.omega_gen])
        return GroupPoint(p.x + q.x, p.z + q.z + zc)

    def inverse(self, p: GroupPoint) -> GroupPoint:
        return GroupPoint(-p.x, -p.z)

    def identity(self) -> GroupPoint:
        return GroupPoint(np.zeros(2 * self.sig.n), np.zeros(self.sig.center_dim))

    # -- dilations -----------------------------------------------------------
    def dilate(self, rho_scale: float, p: GroupPoint) -> GroupPoint:
        if rho_scale <= 0:
            raise NonPositiveScale("dilation scale must be > 0")
        return GroupPoint(rho_scale * p.x, rho_scale ** 2 * p.z)

    def dilate_function(self, phi, rho_scale: float):
        """phi o delta_rho on test functions over R^{2n + r + s}."""
        if rho_scale <= 0:
            raise NonPositiveScale("dilation scale must be > 0")
        d = self.sig.total_dim
        n2 = 2 * self.sig.n
        M = np.diag([rho_scale] * n2 + [rho_scale ** 2] * self.sig.center_dim)
        if isinstance(phi, (GaussPoly, GaussMixture)):
            return phi.precompose_affine(M, np.zeros(d))
        raise TypeError("dilate_function expects a GaussPoly or GaussMixture")

    # -- left translation ----------------------------------------------------
    def left_translation_map(self, g: GroupPoint):
        """(M, v) with g * u = M u + v for u = (y, w); affine in u."""
        n2, cd = 2 * self.sig.n, self.sig.center_dim
        d = n2 + cd
        M = np.eye(d)
        for k, Ok in enumerate(self.omega_gen):
            M[n2 + k, :n2] = Ok.T @ g.x
        v = np.concatenate([g.x, g.z])
        return M, v

    def left_translate(self, phi, g: GroupPoint):
        """phi(g * .) via exact affine precomposition."""
        M, v = self.left_translation_map(g)
        return phi.precompose_affine(M, v)

    # -- vector fields and Delta ----------------------------------------------
    def apply_field(self, phi, j: int):
        """X_j phi = d/dx_j phi + sum_k (Omega_k^T x)_j d/dz_k phi, exact."""
        n2 = 2 * self.sig.n
        out_terms = []
        for term in as_terms(phi):
            if term.dim != self.sig.total_dim:
                raise DimensionMismatch("test function dimension mismatch")
            acc = term.differentiate(j)
            for k, Ok in enumerate(self.omega_gen):
                col = Ok[:, j]  # (Omega_k^T x)_j = sum_m (Omega_k)_{m j} x_m
                dz = term.differentiate(n2 + k)
                coeffs = np.zeros(self.sig.total_dim)
                coeffs[:n2] = col
                acc = acc.plus(dz.multiply_linear(coeffs))
            out_terms.append(acc)
        return out_terms[0] if isinstance(phi, GaussPoly) else GaussMixture(out_terms)

    def apply_delta_rs(self, phi):
        """Delta_{r,s} phi = sum_{j<=n} X_j^2 phi - sum_{j>n} X_j^2 phi, exact."""
        n = self.sig.n
        out = None
        for j in range(2 * n):
            term = self.apply_field(self.apply_field(phi, j), j)
            sign = 1.0 if j < n else -1.0
            term = term.scaled(sign)
            if out is None:
                out = term
            elif isinstance(out, GaussPoly) and isinstance(term, GaussPoly):
                out = out.plus(term)
            else:
                out = GaussMixture(as_terms(out) + as_terms(term))
        return out

    # -- Fourier-side operator -------------------------------------------------
    def apply_g_rs_gausspoly(self, psi):
        """G_{r,s} psi for class members, exact (psi over R^{2n + r + s})."""
        n, cd = self.sig.n, self.sig.center_dim
        d = self.sig.total_dim
        sig_signs = [1.0] * self.sig.r + [-1.0] * self.sig.s
        out_terms = []
        for term in as_terms(psi):
            # -P(xi) psi
            acc = None
            for j in range(2 * n):
                sgn = -1.0 if j < n else 1.0
                mono = [0] * d
                mono[j] = 2
                t = term.multiply_monomial(tuple(mono)).scaled(sgn)
                acc = t if acc is None else acc.plus(t)
            # (<eta,eta>/4) L psi: eta-quadratic coefficient times xi-second derivatives
            for k in range(cd):
                mono = [0] * d
                mono[2 * n + k] = 2
                for j in range(2 * n):
                    sgn = 1.0 if j < n else -1.0
                    t = term.differentiate(j).differentiate(j) \
                        .multiply_monomial(tuple(mono)) \
                        .scaled(0.25 * sig_signs[k] * sgn)
                    acc = acc.plus(t)
            # i xi^T rho(eta)^T grad_xi psi, rho(eta) = sum_k eta_k rho_k
            for k, rk in enumerate(self.module.rho_gen):
                for a in range(2 * n):
                    for b in range(2 * n):
                        if rk[b, a] == 0:
                            continue
                        mono = [0] * d
                        mono[a] += 1
                        mono[2 * n + k] += 1
                        t = term.differentiate(b).multiply_monomial(tuple(mono)) \
                            .scaled(1j * rk[b, a])
                        acc = acc.plus(t)
            out_terms.append(acc)
        return out_terms[0] if isinstance(psi, GaussPoly) else GaussMixture(out_terms)

    def apply_g_rs_pointwise(self, value, grad_xi, hess_xi, xi, eta) -> complex:
        """G_{r,s} psi at one point from supplied xi-derivatives.

        value/grad_xi/hess_xi: psi(xi, eta), its xi-gradient and xi-Hessian.
        """
        xi = np.asarray(xi, float)
        n = self.sig.n
        from .clifford import p_form
        q = self.sig.eta_form(eta)
        L = sum(hess_xi[j, j] * (1.0 if j < n else -1.0) for j in range(2 * n))
        R = self.module.rho(np.asarray(eta, float))
        first = 1j * (xi @ R.T @ np.asarray(grad_xi))
        return -p_form(xi) * value + 0.25 * q * L + first

    # -- exponential flows ------------------------------------------------------
    def exp_flow(self, eta, t: float, side: str = "right") -> np.ndarray:
        """Closed form of e^{t Omega(eta) tau} (side='right') or e^{t tau Omega(eta)}.

        Trigonometric for <eta,eta>_{r,s} > 0, hyperbolic for < 0, and the
        terminating 2-term polynomial on the light cone (the square vanishes).
        """
        O = self.omega(eta)
        B = O @ self.tau if side == "right" else self.tau @ O
        q = self.sig.eta_form(eta)
        eye = np.eye(2 * self.sig.n)
        anorm = np.sqrt(abs(q))
        if anorm < 1e-14:
            return eye + t * B
        half = 0.5 * t * anorm
        if q > 0:
            return np.cos(half) * eye + (2.0 / anorm) * np.sin(half) * B
        return np.cosh(half) * eye + (2.0 / anorm) * np.sinh(half) * B

    def flow_period(self, eta) -> float:
        """q_eta = 4 pi / |eta|_{r,s} for <eta,eta>_{r,s} > 0."""
        q = self.sig.eta_form(eta)
        if q <= 0:
            from .errors import NonTimelikeEta
            raise NonTimelikeEta("period defined for <eta,eta>_{r,s} > 0 only")
        return 4.0 * np.pi / np.sqrt(q)


def tau_signs(n: int) -> np.ndarray:
    return np.array([1.0] * n + [-1.0] * n)


def heisenberg(n: int = 1) -> GroupStructure:
    return GroupStructure.from_signature(Signature(0, 1, n))


__all__ = [
    "GroupPoint",
    "GroupStructure",
    "heisenberg",
    "tau_matrix",
    "tau_signs",
]
