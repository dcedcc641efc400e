"""Numba-compiled twins of the _kernels_numpy kernels.

Same contract as _kernels_numpy (see its docstring).  Rows of the lam
grid are independent, so both kernels parallelize over them with prange.
Importing this module requires numba; _backend handles the fallback.
"""

import math

import numpy as np
from numba import njit, prange


@njit(cache=True)
def _row_poly(zeros, lam, coeffs):
    # coeffs (ascending, length d+1) of w prod(w - a_k) - lam prod(1 - conj(a_k) w)
    d = zeros.size + 1
    a = np.zeros(d, dtype=np.complex128)
    c = np.zeros(d, dtype=np.complex128)
    a[0] = 1.0
    c[0] = 1.0
    deg = 0
    for k in range(zeros.size):
        ak = zeros[k]
        deg += 1
        for m in range(deg, 0, -1):
            a[m] = a[m - 1] - ak * a[m]
            c[m] = c[m] - np.conj(ak) * c[m - 1]
        a[0] = -ak * a[0]
        # c[0] stays 1
    for m in range(d + 1):
        coeffs[m] = 0.0
    for m in range(d):
        coeffs[m + 1] = a[m]
        coeffs[m] -= lam * c[m]


@njit(cache=True)
def _polish(zeros, lam, w, iters):
    for _ in range(iters):
        for r in range(w.size):
            wr = w[r]
            b = wr
            logd = 1.0 / wr
            for k in range(zeros.size):
                num = wr - zeros[k]
                den = 1.0 - np.conj(zeros[k]) * wr
                b *= num / den
                logd += 1.0 / num + np.conj(zeros[k]) / den
            den2 = b * logd
            if abs(den2) > 1e-30:
                w[r] = wr - (b - lam) / den2
    return w


@njit(parallel=True, cache=True)
def preimage_grid(zeros, lams, newton_iters=3):
    d = zeros.size + 1
    n = lams.size
    out = np.empty((n, d), dtype=np.complex128)
    for i in prange(n):
        coeffs = np.empty(d + 1, dtype=np.complex128)
        _row_poly(zeros, lams[i], coeffs)
        comp = np.zeros((d, d), dtype=np.complex128)
        for m in range(1, d):
            comp[m, m - 1] = 1.0
        for m in range(d):
            comp[m, d - 1] = -coeffs[m]
        w = np.linalg.eigvals(comp)
        w = _polish(zeros, lams[i], w, newton_iters)
        ang = np.empty(d, dtype=np.float64)
        for m in range(d):
            ang[m] = math.atan2(w[m].imag, w[m].real) % (2.0 * np.pi)
        order = np.argsort(ang)
        for m in range(d):
            out[i, m] = w[order[m]]
    return out


@njit(parallel=True, cache=True)
def chord_tangency_grid(roots, u, p, v, q):
    n, d = roots.shape
    ncols = d * (d - 1) // 2
    ub = np.conj(u)
    vb = np.conj(v)
    out = np.empty((n, ncols), dtype=np.float64)
    for r in prange(n):
        col = 0
        for i in range(d - 1):
            for j in range(i + 1, d):
                z1 = roots[r, i]
                z2 = roots[r, j]
                beta = 1j * np.conj(z1 - z2)
                nb = abs(beta)
                beta = beta / nb
                gamma = -2.0 * (z1 * np.conj(z2)).imag / nb
                z0 = -0.5 * gamma * np.conj(beta)
                dv = 1j * np.conj(beta)
                alpha = 2.0 * (ub * dv * dv).real + p
                if alpha == 0.0:
                    out[r, col] = np.inf
                else:
                    b = 2.0 * ((2.0 * ub * z0 + p * np.conj(z0) + vb) * dv).real
                    z0b = np.conj(z0)
                    g = (ub * z0 * z0 + u * z0b * z0b + vb * z0 + v * z0b).real
                    g += p * (z0 * z0b).real + q
                    out[r, col] = (b * b - 4.0 * alpha * g) / (alpha * alpha)
                col += 1
    return out
