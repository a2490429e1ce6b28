"""NumPy implementations of the hot kernel loops.

The compiled extension (_kernels_ext) provides the same four functions; the
active implementation is chosen in _backend at import time.  Keep the two in
exact agreement: tests compare them bit-for-bit on random inputs.
"""
import numpy as np


def kappa_vec(rho: np.ndarray) -> np.ndarray:
    """(rho/4) coth(rho/2) with the continuous value 1/2 at rho = 0."""
    rho = np.asarray(rho, float)
    out = np.empty_like(rho)
    small = rho < 1e-8
    out[small] = 0.5
    r = rho[~small]
    out[~small] = 0.25 * r / np.tanh(0.5 * r)
    return out


def volume_element_vec(rho: np.ndarray, n: int) -> np.ndarray:
    """((rho/2) / sinh(rho/2))^n with value 1 at rho = 0, overflow-safe."""
    rho = np.asarray(rho, float)
    out = np.empty_like(rho)
    x = 0.5 * rho
    small = x < 1e-8
    out[small] = 1.0
    big = x > 30.0
    mid = ~(small | big)
    out[mid] = (x[mid] / np.sinh(x[mid])) ** n
    # log form: n (log x - (x + log1p(-e^{-2x}) - log 2))
    xb = x[big]
    out[big] = np.exp(n * (np.log(xb) - xb - np.log1p(-np.exp(-2 * xb)) + np.log(2.0)))
    return out


def osc_rho_sum(v: np.ndarray, rho: np.ndarray, w: np.ndarray, power: int = 0) -> np.ndarray:
    """sum_k w_k rho_k^power exp(i v rho_k) for an array of frequencies v."""
    v = np.asarray(v, float)
    wk = w * rho ** power if power else w
    out = np.empty(v.shape, dtype=complex)
    chunk = 4096
    for i in range(0, v.size, chunk):
        vi = v.flat[i:i + chunk]
        out.flat[i:i + chunk] = np.exp(1j * np.outer(vi, rho)) @ wk
    return out


def offcone_accumulate(rho: np.ndarray, P: float, z2: float,
                       qj_powers: np.ndarray, qj_coeffs: np.ndarray,
                       qj_index: np.ndarray, n: int, s: int,
                       branch_sign: float) -> np.ndarray:
    """Integrand of the off-cone kernel after the rho = tanh(t) substitution.

    Returns (1-rho^2)^{(n-2)/2} (2 rho)^{-n} sum_j Q_j(lam) u^{-((s+1)/2+j)}
    with lam = i P / (4 rho) and u = z2 - P^2/(16 rho^2).  For u < 0 and even
    s the half-integer power takes the branch exp(i pi p * branch_sign).
    """
    rho = np.asarray(rho, float)
    lam = 1j * P / (4.0 * rho)
    u = z2 - P * P / (16.0 * rho * rho)
    pref = (1.0 - rho * rho) ** ((n - 2) / 2.0) / (2.0 * rho) ** n
    out = np.zeros(rho.shape, dtype=complex)
    for a, c, j in zip(qj_powers, qj_coeffs, qj_index):
        p = (s + 1) / 2.0 + j
        if s % 2 == 1:
            upow = (u + 0.0j) ** (-int(round(p)))
        else:
            upow = np.where(
                u >= 0,
                (np.abs(u) + 0.0j) ** (-p),
                np.abs(u) ** (-p) * np.exp(-1j * np.pi * p * branch_sign),
            )
        out += c * lam ** int(a) * upow
    return pref * out
