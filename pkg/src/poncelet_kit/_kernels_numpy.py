"""Vectorized numpy kernels; the reference implementation.

The numba twins in _kernels_numba follow the same contract:

preimage_grid(zeros, lams, newton_iters)
    zeros: (d-1,) complex zeros of a canonical product (origin implicit)
    lams:  (n,) unimodular target values
    Returns the (n, d) roots of w prod(w - a_k) - lam prod(1 - conj(a_k) w),
    one row per lam, each row sorted by argument in [0, 2pi).  Roots come
    from companion-matrix eigenvalues and are polished with a few Newton
    steps on B(w) - lam; they are never projected onto the unit circle.

chord_tangency_grid(roots, u, p, v, q)
    roots: (n, d) chord endpoints per row
    Returns (n, d(d-1)/2) tangency residuals of every chord of each row
    against the conic (u, p, v, q); columns enumerate index pairs (i, j),
    i < j, lexicographically.  Residual convention matches
    conics.tangency_residual: 0 tangent, > 0 secant, < 0 disjoint;
    +inf for a chord running in an asymptotic direction.
"""

import numpy as np


def _linear_products(zeros):
    """Ascending coefficients of prod(w - a_k) and prod(1 - conj(a_k) w)."""
    a = np.array([1.0 + 0.0j])
    c = np.array([1.0 + 0.0j])
    for ak in zeros:
        a = np.convolve(a, np.array([-ak, 1.0 + 0.0j]))
        c = np.convolve(c, np.array([1.0 + 0.0j, -np.conj(ak)]))
    return a, c


def _value_and_logderiv(zeros, w):
    b = w.copy()
    logd = 1.0 / w
    for ak in zeros:
        num = w - ak
        den = 1.0 - np.conj(ak) * w
        b *= num / den
        logd += 1.0 / num + np.conj(ak) / den
    return b, logd


def preimage_grid(zeros, lams, newton_iters=3):
    zeros = np.asarray(zeros, dtype=np.complex128)
    lams = np.asarray(lams, dtype=np.complex128)
    d = zeros.size + 1
    n = lams.size
    a, c = _linear_products(zeros)
    coeffs = np.zeros((n, d + 1), dtype=np.complex128)
    coeffs[:, 1:] = a[None, :]
    coeffs[:, :d] -= lams[:, None] * c[None, :]

    comp = np.zeros((n, d, d), dtype=np.complex128)
    idx = np.arange(1, d)
    comp[:, idx, idx - 1] = 1.0
    comp[:, :, d - 1] = -coeffs[:, :d]
    w = np.linalg.eigvals(comp)

    for _ in range(newton_iters):
        b, logd = _value_and_logderiv(zeros, w)
        f = b - lams[:, None]
        den = b * logd
        ok = np.abs(den) > 1e-30
        w = w - np.where(ok, f / np.where(ok, den, 1.0), 0.0)

    ang = np.mod(np.angle(w), 2.0 * np.pi)
    order = np.argsort(ang, axis=1)
    return np.take_along_axis(w, order, axis=1)


def chord_tangency_grid(roots, u, p, v, q):
    roots = np.asarray(roots, dtype=np.complex128)
    n, d = roots.shape
    ub = np.conj(u)
    vb = np.conj(v)
    out = np.empty((n, d * (d - 1) // 2), dtype=np.float64)
    col = 0
    for i in range(d - 1):
        for j in range(i + 1, d):
            z1 = roots[:, i]
            z2 = roots[:, j]
            beta = 1j * np.conj(z1 - z2)
            nb = np.abs(beta)
            beta = beta / nb
            gamma = -2.0 * (z1 * np.conj(z2)).imag / nb
            z0 = -0.5 * gamma * np.conj(beta)
            dv = 1j * np.conj(beta)
            alpha = 2.0 * (ub * dv * dv).real + p
            b = 2.0 * ((2.0 * ub * z0 + p * np.conj(z0) + vb) * dv).real
            z0b = np.conj(z0)
            g = (ub * z0 * z0 + u * z0b * z0b + vb * z0 + v * z0b).real
            g += p * (z0 * z0b).real + q
            with np.errstate(divide="ignore", invalid="ignore"):
                res = (b * b - 4.0 * alpha * g) / (alpha * alpha)
            out[:, col] = np.where(alpha == 0.0, np.inf, res)
            col += 1
    return out
