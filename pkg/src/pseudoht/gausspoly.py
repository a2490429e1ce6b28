"""Exact calculus on polynomial-times-Gaussian test functions.

A term has the form

    phi(u) = sum_a  c_a (u-c)^a * exp(-1/2 (u-c)^T A (u-c)) * exp(i b.u)

with A real symmetric positive definite, center c and frequency b real, and
complex coefficients c_a.  The class is closed under differentiation,
multiplication by coordinates, precomposition with invertible real affine
maps, and the Fourier transform; finite sums live in GaussMixture.

Fourier convention (fixed once for the whole package):

    F[phi](xi) = (2 pi)^{-d/2} integral phi(u) exp(-i <u, xi>) du

so that F o F = reflection and [F^{-1} psi](0) = (2 pi)^{-d/2} integral psi.

The module also provides the complex-Gaussian integral engine
``integrate_gaussian`` used by the kernel pairings: integrals of class
members against exp(-1/2 u^T W u + eta.u) for complex symmetric W with
positive-definite Re(A + W) are evaluated in closed form (principal branch
of det^{-1/2}, Wick moments for the polynomial part).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NonSPDQuadraticForm, SingularAffineMap

Monomial = tuple  # tuple[int, ...]
Poly = dict       # dict[Monomial, complex]

_ZERO_TOL = 0.0  # coefficients are pruned only when exactly zero


# ----------------------------------------------------------------- poly ops

def poly_mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for a, ca in p.items():
        for b, cb in q.items():
            m = tuple(x + y for x, y in zip(a, b))
            out[m] = out.get(m, 0.0) + ca * cb
    return {m: c for m, c in out.items() if c != 0}


def poly_scale(p: Poly, c) -> Poly:
    if c == 0:
        return {}
    return {m: c * v for m, v in p.items()}


def poly_add(p: Poly, q: Poly) -> Poly:
    out = dict(p)
    for m, c in q.items():
        out[m] = out.get(m, 0.0) + c
    return {m: c for m, c in out.items() if c != 0}


def _axis_monomial(dim: int, j: int, k: int = 1) -> Monomial:
    m = [0] * dim
    m[j] = k
    return tuple(m)


def poly_shift(p: Poly, delta) -> Poly:
    """Re-expand p(w) in powers of w' = w - delta, i.e. substitute w = w' + delta."""
    dim = len(delta)
    out: Poly = {}
    from math import comb

    for mono, c in p.items():
        term: Poly = {tuple([0] * dim): c}
        for j, mj in enumerate(mono):
            if mj == 0:
                continue
            axis: Poly = {}
            for k in range(mj + 1):
                coeff = comb(mj, k) * delta[j] ** (mj - k)
                if coeff != 0:
                    axis[_axis_monomial(dim, j, k)] = coeff
            term = poly_mul(term, axis)
        out = poly_add(out, term)
    return out


def poly_linear_subst(p: Poly, M) -> Poly:
    """Substitute w = M y into p(w); M is a real (dim x dim) matrix."""
    dim = M.shape[0]
    out: Poly = {}
    for mono, c in p.items():
        term: Poly = {tuple([0] * dim): c}
        for j, mj in enumerate(mono):
            if mj == 0:
                continue
            lin: Poly = {}
            for k in range(dim):
                if M[j, k] != 0:
                    lin[_axis_monomial(dim, k)] = M[j, k]
            for _ in range(mj):
                term = poly_mul(term, lin)
        out = poly_add(out, term)
    return out


def poly_eval_many(p: Poly, W: np.ndarray) -> np.ndarray:
    """Evaluate p at rows of W, shape (N, dim)."""
    vals = np.zeros(W.shape[0], dtype=complex)
    for mono, c in p.items():
        term = np.full(W.shape[0], c, dtype=complex)
        for j, mj in enumerate(mono):
            if mj:
                term = term * W[:, j] ** mj
        vals += term
    return vals


# -------------------------------------------------------------- Wick engine

def _wick_moment(cov: np.ndarray, idx: tuple) -> complex:
    """E[y_{i1} ... y_{ik}] for the (complex) covariance cov, via pairings."""
    k = len(idx)
    if k == 0:
        return 1.0
    if k % 2 == 1:
        return 0.0
    cache: dict = {}

    def rec(ids: tuple) -> complex:
        if not ids:
            return 1.0
        if ids in cache:
            return cache[ids]
        first, rest = ids[0], ids[1:]
        total = 0.0 + 0.0j
        for pos in range(len(rest)):
            c = cov[first, rest[pos]]
            if c != 0:
                total += c * rec(rest[:pos] + rest[pos + 1:])
        cache[ids] = total
        return total

    return rec(tuple(sorted(idx)))


def det_inv_sqrt(M: np.ndarray) -> complex:
    """det(M)^{-1/2} for complex symmetric M with Re M positive definite.

    The branch is the analytic continuation from real SPD matrices: every
    eigenvalue of M lies in the open right half-plane, so the product of
    principal inverse square roots is the continued branch.
    """
    lam = np.linalg.eigvals(M)
    if np.any(lam.real <= 0):
        raise NonSPDQuadraticForm("Re part of the quadratic form is not positive definite")
    return complex(np.prod(lam ** -0.5))


def gaussian_poly_integral(M: np.ndarray, lin: np.ndarray, p: Poly) -> complex:
    """integral p(w) exp(-1/2 w^T M w + lin.w) dw, Re M positive definite."""
    d = M.shape[0]
    Minv = np.linalg.inv(M)
    m0 = Minv @ lin
    pref = (2.0 * np.pi) ** (d / 2.0) * det_inv_sqrt(M) * np.exp(0.5 * lin @ m0)
    shifted = poly_shift(p, m0)  # p(y + m0) as a poly in y
    total = 0.0 + 0.0j
    for mono, c in shifted.items():
        idx = tuple(j for j, mj in enumerate(mono) for _ in range(mj))
        mom = _wick_moment(Minv, idx)
        if mom != 0:
            total += c * mom
    return pref * total


# ------------------------------------------------------------------- class

def _as_spd(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NonSPDQuadraticForm("quadratic form must be a square matrix")
    if not np.allclose(A, A.T, atol=1e-12):
        raise NonSPDQuadraticForm("quadratic form must be symmetric")
    if np.linalg.eigvalsh(A).min() <= 0:
        raise NonSPDQuadraticForm("quadratic form must be positive definite")
    return 0.5 * (A + A.T)


@dataclass
class GaussPoly:
    """One polynomial-times-Gaussian term; see module docstring for the form."""

    dim: int
    quad: np.ndarray
    poly: Poly = field(default_factory=dict)
    shift: np.ndarray | None = None
    freq: np.ndarray | None = None

    def __post_init__(self):
        self.quad = _as_spd(self.quad)
        if self.quad.shape[0] != self.dim:
            raise DimensionMismatch("quad size does not match dim")
        self.shift = np.zeros(self.dim) if self.shift is None else np.asarray(self.shift, float)
        self.freq = np.zeros(self.dim) if self.freq is None else np.asarray(self.freq, float)
        if self.shift.shape != (self.dim,) or self.freq.shape != (self.dim,):
            raise DimensionMismatch("shift/freq size does not match dim")
        self.poly = {tuple(m): complex(c) for m, c in self.poly.items() if c != 0}

    # -- constructors -------------------------------------------------------
    @classmethod
    def gaussian(cls, quad, shift=None, coeff=1.0) -> "GaussPoly":
        quad = np.atleast_2d(np.asarray(quad, float))
        d = quad.shape[0]
        return cls(d, quad, {tuple([0] * d): coeff}, shift=shift)

    @classmethod
    def iso_gaussian(cls, dim: int, a: float = 1.0, coeff=1.0) -> "GaussPoly":
        """exp(-a |u|^2 / 2) (times coeff)."""
        return cls.gaussian(a * np.eye(dim), coeff=coeff)

    def is_zero(self) -> bool:
        return not self.poly

    def degree(self) -> int:
        return max((sum(m) for m in self.poly), default=0)

    # -- pointwise ----------------------------------------------------------
    def evaluate(self, u) -> complex:
        return complex(self.evaluate_many(np.asarray(u, float)[None, :])[0])

    def evaluate_many(self, U: np.ndarray) -> np.ndarray:
        U = np.asarray(U, float)
        if U.shape[1] != self.dim:
            raise DimensionMismatch("points have wrong dimension")
        W = U - self.shift
        expo = -0.5 * np.einsum("ij,jk,ik->i", W, self.quad, W) + 1j * (U @ self.freq)
        return poly_eval_many(self.poly, W) * np.exp(expo)

    # -- algebra ------------------------------------------------------------
    def scaled(self, c) -> "GaussPoly":
        return GaussPoly(self.dim, self.quad, poly_scale(self.poly, c), self.shift, self.freq)

    def plus(self, other: "GaussPoly") -> "GaussPoly":
        """Sum of two terms sharing (quad, shift, freq)."""
        if not (np.array_equal(self.quad, other.quad)
                and np.array_equal(self.shift, other.shift)
                and np.array_equal(self.freq, other.freq)):
            raise DimensionMismatch("plus() needs identical Gaussian data; use GaussMixture")
        return GaussPoly(self.dim, self.quad, poly_add(self.poly, other.poly),
                         self.shift, self.freq)

    def differentiate(self, axis: int) -> "GaussPoly":
        """d/du_axis, exact."""
        new: Poly = {}
        for mono, c in self.poly.items():
            if mono[axis] > 0:
                m = list(mono)
                m[axis] -= 1
                key = tuple(m)
                new[key] = new.get(key, 0.0) + c * mono[axis]
        lin: Poly = {}
        for k in range(self.dim):
            if self.quad[axis, k] != 0:
                lin[_axis_monomial(self.dim, k)] = -self.quad[axis, k]
        if self.freq[axis] != 0:
            lin[tuple([0] * self.dim)] = lin.get(tuple([0] * self.dim), 0.0) + 1j * self.freq[axis]
        new = poly_add(new, poly_mul(self.poly, lin)) if lin else new
        return GaussPoly(self.dim, self.quad, new, self.shift, self.freq)

    def multiply_monomial(self, mono: Monomial) -> "GaussPoly":
        """Multiply by u^mono (absolute coordinates)."""
        factor: Poly = {tuple([0] * self.dim): 1.0}
        for j, mj in enumerate(mono):
            if mj == 0:
                continue
            axis = {_axis_monomial(self.dim, j): 1.0}
            if self.shift[j] != 0:
                axis[tuple([0] * self.dim)] = self.shift[j]
            for _ in range(mj):
                factor = poly_mul(factor, axis)
        return GaussPoly(self.dim, self.quad, poly_mul(self.poly, factor), self.shift, self.freq)

    def multiply_linear(self, coeffs, const=0.0) -> "GaussPoly":
        """Multiply by (coeffs . u + const)."""
        lin: Poly = {}
        z = tuple([0] * self.dim)
        c0 = complex(const) + complex(np.dot(coeffs, self.shift))
        for j, cj in enumerate(coeffs):
            if cj != 0:
                lin[_axis_monomial(self.dim, j)] = cj
        if c0 != 0:
            lin[z] = c0
        return GaussPoly(self.dim, self.quad, poly_mul(self.poly, lin), self.shift, self.freq)

    def precompose_affine(self, M, v) -> "GaussPoly":
        """phi(M u + v), with M invertible real."""
        M = np.asarray(M, float)
        v = np.asarray(v, float)
        if abs(np.linalg.det(M)) < 1e-300:
            raise SingularAffineMap("affine precomposition needs invertible M")
        new_quad = M.T @ self.quad @ M
        new_shift = np.linalg.solve(M, self.shift - v)
        new_poly = poly_linear_subst(self.poly, M)
        new_freq = M.T @ self.freq
        phase = np.exp(1j * self.freq @ v)
        return GaussPoly(self.dim, new_quad, poly_scale(new_poly, phase), new_shift, new_freq)

    def laplacian(self) -> "GaussPoly":
        out = None
        for j in range(self.dim):
            term = self.differentiate(j).differentiate(j)
            out = term if out is None else out.plus(term)
        return out

    def laplacian_power(self, ell: int) -> "GaussPoly":
        out = self
        for _ in range(ell):
            out = out.laplacian()
        return out

    # -- Fourier ------------------------------------------------------------
    def fourier(self) -> "GaussPoly":
        """F[phi] in the (2 pi)^{-d/2}, e^{-i<u, xi>} convention."""
        A = self.quad
        Ainv = np.linalg.inv(A)
        Ainv = 0.5 * (Ainv + Ainv.T)
        base = det_inv_sqrt(A)
        # H = F[p G_A] via  F[w^a G_A] = (i d/dxi)^a [det(A)^{-1/2} G_{A^{-1}}]
        acc: Poly = {}
        for mono, c in self.poly.items():
            term = GaussPoly(self.dim, Ainv, {tuple([0] * self.dim): c * base})
            for j, mj in enumerate(mono):
                for _ in range(mj):
                    term = term.differentiate(j).scaled(1j)
            acc = poly_add(acc, term.poly)
        phase0 = np.exp(1j * np.dot(self.freq, self.shift))
        return GaussPoly(self.dim, Ainv, poly_scale(acc, phase0),
                         shift=self.freq.copy(), freq=-self.shift.copy())

    def inverse_fourier(self) -> "GaussPoly":
        return self.fourier().precompose_affine(-np.eye(self.dim), np.zeros(self.dim))

    def partial_fourier(self, axes) -> "GaussPoly":
        """Fourier transform in the listed axes only.

        Requires the quadratic form to be block diagonal between `axes` and
        the remaining coordinates (true for all product test functions used
        here); the transformed block follows the full-transform rules.
        """
        axes = sorted(axes)
        keep = [j for j in range(self.dim) if j not in axes]
        if keep and np.any(self.quad[np.ix_(axes, keep)] != 0):
            raise DimensionMismatch("partial_fourier needs block-diagonal quad")
        At = self.quad[np.ix_(axes, axes)]
        At_inv = np.linalg.inv(At)
        At_inv = 0.5 * (At_inv + At_inv.T)
        base = det_inv_sqrt(At)
        dt = len(axes)

        # group monomials by their kept part; transform the axes part
        acc: Poly = {}
        for mono, c in self.poly.items():
            t_mono = tuple(mono[j] for j in axes)
            term = GaussPoly(dt, At_inv, {tuple([0] * dt): c * base})
            for jj, mj in enumerate(t_mono):
                for _ in range(mj):
                    term = term.differentiate(jj).scaled(1j)
            for t_m, t_c in term.poly.items():
                m = list(mono)
                for jj, j in enumerate(axes):
                    m[j] = t_m[jj]
                key = tuple(m)
                acc[key] = acc.get(key, 0.0) + t_c
        new_quad = self.quad.copy()
        new_quad[np.ix_(axes, axes)] = At_inv
        new_shift = self.shift.copy()
        new_freq = self.freq.copy()
        phase0 = np.exp(1j * np.dot(self.freq[axes], self.shift[axes]))
        new_shift[axes] = self.freq[axes]
        new_freq[axes] = -self.shift[axes]
        return GaussPoly(self.dim, new_quad, poly_scale(acc, phase0), new_shift, new_freq)

    # -- restriction --------------------------------------------------------
    def restrict(self, fixed_axes, values) -> "GaussPoly":
        """phi with the listed coordinates frozen at numeric values.

        Works for a general quadratic form: the cross terms contribute a real
        linear exponential absorbed by recentering the kept Gaussian.
        """
        fixed = list(fixed_axes)
        keep = [j for j in range(self.dim) if j not in fixed]
        values = np.asarray(values, float)
        A = self.quad
        Akk = A[np.ix_(keep, keep)]
        Akf = A[np.ix_(keep, fixed)]
        Aff = A[np.ix_(fixed, fixed)]
        q = values - self.shift[fixed]
        dvec = Akf @ q                  # linear coefficient against (y - c_k)
        delta = np.linalg.solve(Akk, dvec)
        const = np.exp(-0.5 * q @ Aff @ q + 0.5 * dvec @ delta
                       + 1j * np.dot(self.freq[fixed], values))
        # substitute the fixed coordinates into the polynomial, then re-center
        reduced: Poly = {}
        for mono, c in self.poly.items():
            coeff = c
            for jj, j in enumerate(fixed):
                if mono[j]:
                    coeff = coeff * q[jj] ** mono[j]
            key = tuple(mono[j] for j in keep)
            reduced[key] = reduced.get(key, 0.0) + coeff
        # poly was in w = y - c_k; the new center is c_k - delta, so w = w' - delta
        reduced = poly_shift(reduced, -delta)
        return GaussPoly(len(keep), Akk, poly_scale(reduced, const),
                         shift=self.shift[keep] - delta, freq=self.freq[keep])

    # -- integrals ----------------------------------------------------------
    def integral(self) -> complex:
        """integral phi(u) du, exact."""
        return self.integrate_against()

    def integrate_against(self, W=None, eta=None) -> complex:
        """integral phi(u) exp(-1/2 u^T W u + eta.u) du.

        W complex symmetric with Re(quad + W) positive definite; eta complex.
        """
        d = self.dim
        W = np.zeros((d, d)) if W is None else np.asarray(W)
        eta = np.zeros(d) if eta is None else np.asarray(eta)
        M = self.quad + W
        c = self.shift
        lin = 1j * self.freq + eta - W @ c
        const = np.exp(1j * self.freq @ c + eta @ c - 0.5 * c @ W @ c)
        return const * gaussian_poly_integral(M, lin, self.poly)

    def l1_norm(self, rel_tol: float = 1e-8, max_axis_nodes: int = 512) -> float:
        """integral |phi| du by adaptive tensor quadrature in whitened coordinates.

        |phi| has gradient kinks on the zero set of the polynomial, so the
        per-axis composite Gauss-Legendre grid is doubled until two
        refinements agree; the axis node count is capped (the cap binds only
        in dimension >= 3, where the default tolerances used by callers are
        looser than the 1-D/2-D default).
        """
        from .quadrature import composite_legendre

        radial = self._radial_profile()
        if radial is not None:
            return self._l1_radial(radial, rel_tol)

        L = np.linalg.cholesky(np.linalg.inv(self.quad))
        detL = abs(np.linalg.det(L))
        half = 8.6  # e^{-y^2/2} < 1e-16 outside

        def eval_with(panels: int, order: int) -> float:
            x, w = composite_legendre(np.linspace(-half, half, panels + 1), order)
            total = 0.0
            # chunk over the first axis to bound memory
            tail_grids = np.meshgrid(*([x] * (self.dim - 1)), indexing="ij") \
                if self.dim > 1 else []
            tail_w = np.meshgrid(*([w] * (self.dim - 1)), indexing="ij") \
                if self.dim > 1 else []
            if self.dim == 1:
                Y = x[:, None]
                Wt = w
                vals = np.abs(poly_eval_many(self.poly, Y @ L.T))
                return float(detL * np.sum(Wt * vals
                                           * np.exp(-0.5 * np.sum(Y ** 2, axis=1))))
            T = np.stack([g.ravel() for g in tail_grids], axis=1)
            TW = np.prod(np.stack([g.ravel() for g in tail_w], axis=1), axis=1)
            for x0, w0 in zip(x, w):
                Y = np.concatenate([np.full((T.shape[0], 1), x0), T], axis=1)
                vals = np.abs(poly_eval_many(self.poly, Y @ L.T))
                total += w0 * float(np.sum(TW * vals
                                           * np.exp(-0.5 * np.sum(Y ** 2, axis=1))))
            return detL * total

        panels, order = 4, 6
        prev = eval_with(panels, order)
        while panels * order < max_axis_nodes:
            panels *= 2
            cur = eval_with(panels, order)
            if abs(cur - prev) <= rel_tol * max(abs(cur), 1e-300):
                return cur
            prev = cur
        return prev

    def _radial_profile(self):
        """(a, q) with phi(u) = q(|u|^2) e^{-a |u|^2 / 2} if phi is radial, else None."""
        diag = np.diagonal(self.quad)
        if np.any(self.quad != np.diag(diag)) or not np.allclose(diag, diag[0]) \
                or np.any(self.shift) or np.any(self.freq):
            return None
        deg = self.degree()
        if deg % 2 == 1:
            return None
        # candidate radial polynomial from the values along the first axis
        k = deg // 2 + 1
        t = np.linspace(0.8, 1.8, k)
        axis_pts = np.zeros((k, self.dim))
        axis_pts[:, 0] = t
        vals = poly_eval_many(self.poly, axis_pts)
        coeffs = np.linalg.solve(np.vander(t ** 2, k, increasing=True), vals)
        # verify exactly: expand sum_j coeffs_j S^j, S = |u|^2, and compare
        S = {}
        for j in range(self.dim):
            S[_axis_monomial(self.dim, j, 2)] = 1.0
        expanded: Poly = {tuple([0] * self.dim): coeffs[0]}
        power: Poly = {tuple([0] * self.dim): 1.0}
        for j in range(1, k):
            power = poly_mul(power, S)
            expanded = poly_add(expanded, poly_scale(power, coeffs[j]))
        diff = poly_add(expanded, poly_scale(self.poly, -1.0))
        scale = max((abs(c) for c in self.poly.values()), default=1.0)
        if any(abs(c) > 1e-10 * scale for c in diff.values()):
            return None
        return float(diag[0]), coeffs

    def _l1_radial(self, radial, rel_tol: float) -> float:
        """Surface-measure reduction of the L1 norm for radial members."""
        import math

        from .quadrature import composite_legendre, refine_until

        a, coeffs = radial
        d = self.dim
        surf = 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)
        r_max = math.sqrt(2 * 40.0 / a)

        def eval_with(npts: int) -> float:
            r, w = composite_legendre(np.linspace(0.0, r_max, 17), npts)
            q = np.polynomial.polynomial.polyval(r ** 2, coeffs)
            return float(surf * np.sum(w * r ** (d - 1) * np.abs(q)
                                       * np.exp(-0.5 * a * r ** 2)))

        val, _, _ = refine_until(eval_with, 8, rel_tol)
        return val

    # -- serialization ------------------------------------------------------
    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "quad": self.quad.tolist(),
            "shift": self.shift.tolist(),
            "freq": self.freq.tolist(),
            "poly": sorted(
                [list(m) + [float(c.real), float(c.imag)] for m, c in self.poly.items()]
            ),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "GaussPoly":
        poly = {tuple(int(x) for x in row[:-2]): complex(row[-2], row[-1]) for row in d["poly"]}
        return cls(int(d["dim"]), np.array(d["quad"]), poly,
                   shift=np.array(d["shift"]), freq=np.array(d.get("freq", np.zeros(d["dim"]))))

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json(cls, text: str) -> "GaussPoly":
        return cls.from_json_dict(json.loads(text))


@dataclass
class GaussMixture:
    """Finite sum of GaussPoly terms over a common dimension."""

    terms: list

    def __post_init__(self):
        if not self.terms:
            raise DimensionMismatch("mixture needs at least one term")
        dims = {t.dim for t in self.terms}
        if len(dims) != 1:
            raise DimensionMismatch("mixture terms must share dim")

    @property
    def dim(self) -> int:
        return self.terms[0].dim

    def evaluate(self, u) -> complex:
        return complex(sum(t.evaluate(u) for t in self.terms))

    def evaluate_many(self, U) -> np.ndarray:
        out = np.zeros(np.asarray(U).shape[0], dtype=complex)
        for t in self.terms:
            out += t.evaluate_many(U)
        return out

    def map_terms(self, f) -> "GaussMixture":
        return GaussMixture([f(t) for t in self.terms])

    def scaled(self, c) -> "GaussMixture":
        return self.map_terms(lambda t: t.scaled(c))

    def __add__(self, other):
        other_terms = other.terms if isinstance(other, GaussMixture) else [other]
        return GaussMixture(self.terms + list(other_terms))

    def differentiate(self, axis) -> "GaussMixture":
        return self.map_terms(lambda t: t.differentiate(axis))

    def fourier(self) -> "GaussMixture":
        return self.map_terms(lambda t: t.fourier())

    def inverse_fourier(self) -> "GaussMixture":
        return self.map_terms(lambda t: t.inverse_fourier())

    def precompose_affine(self, M, v) -> "GaussMixture":
        return self.map_terms(lambda t: t.precompose_affine(M, v))

    def integral(self) -> complex:
        return complex(sum(t.integral() for t in self.terms))

    def integrate_against(self, W=None, eta=None) -> complex:
        return complex(sum(t.integrate_against(W, eta) for t in self.terms))


def as_terms(phi) -> list:
    """phi as a list of GaussPoly terms (accepts GaussPoly or GaussMixture)."""
    if isinstance(phi, GaussMixture):
        return list(phi.terms)
    return [phi]


# ------------------------------------------------- batched diagonal fast path

def batched_osc_integral(phi, w: np.ndarray, tau: np.ndarray) -> np.ndarray:
    """integral phi(u) exp(i w P_tau(u)) du for an array of w values.

    P_tau(u) = sum tau_j u_j^2 with tau_j = +-1.  Diagonal quadratic forms use
    a fully vectorized per-axis closed form; general forms are reduced to that
    case once per term by a tau-congruence S (S^T A S = |Lambda| diagonal and
    S^T tau S = tau), which leaves P invariant up to coordinate ordering.
    """
    w = np.asarray(w, float)
    out = np.zeros(w.shape, dtype=complex)
    for term in as_terms(phi):
        A = term.quad
        if np.count_nonzero(A - np.diag(np.diagonal(A))) == 0:
            out += _batched_diag(term, w, tau)
        else:
            term2 = _tau_diagonalize(term, tau)
            out += _batched_diag(term2, w, tau)
    return out


def _tau_diagonalize(term: GaussPoly, tau: np.ndarray) -> GaussPoly:
    """Precompose with S such that the quadratic form becomes diagonal while
    sum tau_j u_j^2 keeps its shape: S = A^{-1/2} Q |L|^{1/2} with
    A^{1/2} tau A^{1/2} = Q L Q^T, columns ordered positives-first."""
    A = term.quad
    lam_a, Va = np.linalg.eigh(A)
    B = Va @ np.diag(np.sqrt(lam_a)) @ Va.T          # A^{1/2}
    Binv = Va @ np.diag(lam_a ** -0.5) @ Va.T
    Mt = B @ np.diag(tau) @ B
    lam, Q = np.linalg.eigh(0.5 * (Mt + Mt.T))
    order = np.argsort(-lam)                         # positives first
    lam, Q = lam[order], Q[:, order]
    if not np.array_equal(np.sign(lam), tau):
        raise NonSPDQuadraticForm("signature mismatch in tau-congruence")
    S = Binv @ Q @ np.diag(np.sqrt(np.abs(lam)))
    out = term.precompose_affine(S, np.zeros(term.dim))
    out = out.scaled(abs(np.linalg.det(S)))
    # the congruence leaves only roundoff off-diagonal mass; drop it
    out.quad = np.diag(np.diagonal(out.quad))
    return out


def _batched_diag(term: GaussPoly, w: np.ndarray, tau: np.ndarray) -> np.ndarray:
    d = term.dim
    a = np.diagonal(term.quad)
    c = term.shift
    b = term.freq
    beta = a[None, :] - 2j * w[:, None] * tau[None, :]     # (Nw, d)
    lin = 1j * b[None, :] + 2j * w[:, None] * tau[None, :] * c[None, :]
    mu = lin / beta
    # prefactor per axis: sqrt(2 pi / beta) e^{lin^2 / (2 beta)}; plus center phase
    pref = np.prod(np.sqrt(2 * np.pi / beta) * np.exp(0.5 * lin * mu), axis=1)
    const = np.exp(1j * b @ c + 1j * w * (tau @ c**2))
    # E[(mu + sigma N)^m] per axis, sigma^2 = 1/beta
    max_deg = max((max(m) for m in term.poly), default=0)
    from math import comb

    mom = np.ones((w.size, d, max_deg + 1), dtype=complex)
    if max_deg >= 1:
        sig2 = 1.0 / beta
        for m in range(1, max_deg + 1):
            tot = np.zeros((w.size, d), dtype=complex)
            for k in range(0, m + 1, 2):
                dfact = 1.0
                for jj in range(1, k, 2):
                    dfact *= jj
                tot += comb(m, k) * mu ** (m - k) * dfact * sig2 ** (k // 2)
            mom[:, :, m] = tot
    total = np.zeros(w.size, dtype=complex)
    for mono, cc in term.poly.items():
        t = np.full(w.size, cc, dtype=complex)
        for j, mj in enumerate(mono):
            if mj:
                t = t * mom[:, j, mj]
        total += t
    return const * pref * total
