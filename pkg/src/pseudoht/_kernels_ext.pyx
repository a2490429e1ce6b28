# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Cython fast path for the hot kernel loops; mirrors _kernels_py exactly."""
import numpy as np

cimport numpy as cnp
from libc.math cimport M_PI, cos, exp, fabs, log, log1p, pow, sin, sinh, sqrt, tanh

cnp.import_array()


def kappa_vec(object rho_in):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rho = np.ascontiguousarray(rho_in, dtype=np.float64).ravel()
    cdef Py_ssize_t i, m = rho.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(m)
    cdef double r
    for i in range(m):
        r = rho[i]
        if r < 1e-8:
            out[i] = 0.5
        else:
            out[i] = 0.25 * r / tanh(0.5 * r)
    return out.reshape(np.shape(rho_in))


def volume_element_vec(object rho_in, int n):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rho = np.ascontiguousarray(rho_in, dtype=np.float64).ravel()
    cdef Py_ssize_t i, m = rho.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(m)
    cdef double x
    cdef double base, acc
    cdef int k
    for i in range(m):
        x = 0.5 * rho[i]
        if x < 1e-8:
            out[i] = 1.0
        elif x > 30.0:
            out[i] = exp(n * (log(x) - x - log1p(-exp(-2.0 * x)) + log(2.0)))
        else:
            base = x / sinh(x)
            acc = 1.0
            for k in range(n):
                acc *= base
            out[i] = acc
    return out.reshape(np.shape(rho_in))


def osc_rho_sum(object v_in, object rho_in, object w_in, int power=0):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v = np.ascontiguousarray(v_in, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rho = np.ascontiguousarray(rho_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] w = np.ascontiguousarray(w_in, dtype=np.float64)
    cdef Py_ssize_t i, k, nv = v.shape[0], nk = rho.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(nv, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] wk = np.empty(nk)
    cdef double re, im, ph, wv
    for k in range(nk):
        wk[k] = w[k] * pow(rho[k], power) if power else w[k]
    for i in range(nv):
        re = 0.0
        im = 0.0
        for k in range(nk):
            ph = v[i] * rho[k]
            wv = wk[k]
            re += wv * cos(ph)
            im += wv * sin(ph)
        out[i] = re + 1j * im
    return out.reshape(np.shape(v_in))


def offcone_accumulate(object rho_in, double P, double z2,
                       object qj_powers, object qj_coeffs, object qj_index,
                       int n, int s, double branch_sign):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rho = np.ascontiguousarray(rho_in, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.int64_t, ndim=1] pw = np.ascontiguousarray(qj_powers, dtype=np.int64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] cf = np.ascontiguousarray(qj_coeffs, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] jx = np.ascontiguousarray(qj_index, dtype=np.int64)
    cdef Py_ssize_t i, t, m = rho.shape[0], nt = pw.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.zeros(m, dtype=np.complex128)
    cdef double r, u, pref, pval, ur, tpow
    cdef double complex lam, upow, acc, lampow
    cdef int k, ip
    for i in range(m):
        r = rho[i]
        lam = 1j * P / (4.0 * r)
        u = z2 - P * P / (16.0 * r * r)
        tpow = 1.0
        for k in range(n):
            tpow *= 2.0 * r
        pref = pow(1.0 - r * r, (n - 2) / 2.0) / tpow
        acc = 0.0
        for t in range(nt):
            pval = (s + 1) / 2.0 + jx[t]
            if s % 2 == 1:
                ip = <int>(pval + 0.5)
                ur = 1.0
                for k in range(ip):
                    ur /= u
                upow = ur + 0j
            elif u >= 0:
                upow = pow(fabs(u), -pval) + 0j
            else:
                upow = pow(fabs(u), -pval) * (
                    cos(M_PI * pval * branch_sign) - 1j * sin(M_PI * pval * branch_sign))
            lampow = 1.0
            for k in range(pw[t]):
                lampow = lampow * lam
            acc = acc + cf[t] * lampow * upow
        out[i] = pref * acc
    return out.reshape(np.shape(rho_in))
