"""Exterior of a parabola: the squared-Cayley map, its conjugated
Blaschke-like maps, the interior-curve ellipse, and exterior samples.

For t > 0 the map

    psi_t(w) = ((1 - w)/(1 + w) + t)^2 - t^2

carries the unit disk conformally onto the exterior of the left-opening
parabola P_t : (z - zbar)^2 = 8 t^2 (z + zbar), with focus -t^2 and
directrix Re z = t^2.  The pole at w = -1 is the point at infinity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blaschke import BlaschkeProduct, ExteriorSamples, preimage_rows, preimages
from .conics import ConicGeneral, evaluate_conic
from .errors import (
    InsideParabolaError,
    NotOnBoundaryError,
    PoleInputError,
    ValidationError,
)

__all__ = [
    "ParabolicBlaschkeLike",
    "psi_forward",
    "psi_inverse",
    "psi_second_branch",
    "parabola_Pt",
    "boundary_transform",
    "blaschke_like_apply",
    "preimages_on_Pt",
    "interior_curve_parabolic",
    "exterior_curve_samples_parabolic",
]


def _check_t(t: float) -> float:
    t = float(t)
    if not t > 0.0:
        raise ValidationError(f"need t > 0, got {t}")
    return t


def _check_pole(w) -> None:
    if np.any(np.abs(np.asarray(w) + 1.0) < 1e-10):
        raise PoleInputError("w = -1 maps to the point at infinity")


@dataclass(frozen=True)
class ParabolicBlaschkeLike:
    """A canonical product conjugated to the exterior of P_t."""

    b: BlaschkeProduct
    t: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "t", _check_t(self.t))

    def __call__(self, z):
        return blaschke_like_apply(self, z)


def psi_forward(t: float, w):
    """psi_t on the closed disk minus the pole at -1."""
    t = _check_t(t)
    scalar = np.isscalar(w)
    w = complex(w) if scalar else np.asarray(w, dtype=complex)
    _check_pole(w)
    if np.any(np.abs(w) > 1.0 + 1e-9):
        raise ValidationError("psi_t domain is the closed unit disk")
    u = (1.0 - w) / (1.0 + w)
    val = (u + t) ** 2 - t * t
    return complex(val) if scalar else val


def parabola_Pt(t: float) -> ConicGeneral:
    """The boundary parabola (z - zbar)^2 - 8 t^2 (z + zbar) = 0."""
    t = _check_t(t)
    return ConicGeneral(u=1.0, p=-2.0, v=-8.0 * t * t, q=0.0)


def _on_Pt(t: float, z: complex) -> bool:
    pt = parabola_Pt(t)
    return abs(evaluate_conic(pt, z)) < 1e-10 * pt.scale() * max(1.0, abs(z)) ** 2


def psi_inverse(t: float, z: complex) -> complex:
    """The branch of psi_t^{-1} with |w| < 1.

    Solves (u + t)^2 = z + t^2 for u = (1 - w)/(1 + w) and prefers the
    root in the right half-plane, whose Moebius image lies in the disk;
    points of P_t itself use the closed form
    w = (-(z + zbar + 2) t + z - zbar)/((z + zbar - 2) t).
    """
    t = _check_t(t)
    z = complex(z)
    if _on_Pt(t, z):
        zb = np.conj(z)
        return complex((-(z + zb + 2.0) * t + z - zb) / ((z + zb - 2.0) * t))
    s = np.sqrt(z + t * t)
    cands = sorted((s - t, -s - t), key=lambda u: -u.real)
    for u in cands:
        if abs(1.0 + u) < 1e-10:
            continue
        w = (1.0 - u) / (1.0 + u)
        if abs(w) < 1.0:
            return complex(w)
    raise InsideParabolaError("no preimage in the unit disk; z is inside P_t")


def psi_second_branch(t: float, w: complex) -> complex:
    """The other preimage of psi_t(w): psi_t((1+t+tw)/(w-t-tw)) = psi_t(w).

    For w in the disk the value lies in a region disjoint from the disk
    (outside an internally tangent disk for t < 1/2, the half-plane
    Re w < -1 at t = 1/2, inside an externally tangent disk for t > 1/2).
    """
    t = _check_t(t)
    w = complex(w)
    den = w - t - t * w
    if abs(den) < 1e-12:
        raise PoleInputError("second branch is unbounded at w = t/(1 - t)")
    return (1.0 + t + t * w) / den


def boundary_transform(t: float, w: complex) -> complex:
    """Degree-preserving boundary correspondence: X + iY on the unit circle
    goes to (X - 1)/(X + 1) - 2iYt/(X + 1) on P_t.  Maps lines to lines,
    and agrees with psi_t on the circle."""
    t = _check_t(t)
    w = complex(w)
    _check_pole(w)
    if abs(abs(w) - 1.0) > 1e-9:
        raise NotOnBoundaryError("boundary transform needs |w| = 1")
    x, y = w.real, w.imag
    return complex((x - 1.0) / (x + 1.0), -2.0 * y * t / (x + 1.0))


def blaschke_like_apply(m: ParabolicBlaschkeLike, z):
    """B_{psi_t}(z) = psi_t(B(psi_t^{-1}(z))) for z outside or on P_t."""
    if np.isscalar(z):
        return psi_forward(m.t, m.b(psi_inverse(m.t, z)))
    return np.asarray([psi_forward(m.t, m.b(psi_inverse(m.t, zz))) for zz in np.ravel(z)])


def preimages_on_Pt(m: ParabolicBlaschkeLike, lam_hat: complex) -> list:
    """The d boundary points mapped to lam_hat by B_{psi_t}."""
    lam_hat = complex(lam_hat)
    if not _on_Pt(m.t, lam_hat):
        raise NotOnBoundaryError("lam_hat is not on P_t")
    lam = psi_inverse(m.t, lam_hat)
    lam = lam / abs(lam)
    ws = preimages(m.b, lam)
    _check_pole(np.asarray(ws))
    return [psi_forward(m.t, w) for w in ws]


def interior_curve_parabolic(a: complex, b: complex, t: float) -> ConicGeneral:
    """The ellipse enveloped by preimage chords on P_t (degree 3, zeros
    {0, a, b}).  Single transcription point for the long coefficient
    blocks; the relation

        t^2 (z + zbar - 2)^2 g_I((-(z + zbar + 2) t + z - zbar)
                                  / ((z + zbar - 2) t)) = g_I^{psi_t}(z)

    ties it to the disk interior curve g_I and is enforced in the tests.
    """
    t = _check_t(t)
    a, b = complex(a), complex(b)
    if abs(a) >= 1.0 or abs(b) >= 1.0:
        raise ValidationError("zeros must lie in the open unit disk")
    ab2 = abs(a * b) ** 2
    s = a + b
    s2 = abs(s) ** 2
    sr = (s - np.conj(s))  # 2i Im(a+b)
    dd2 = (a - b) ** 2 + np.conj(a - b) ** 2  # 2 Re((a-b)^2)
    quad = (ab2 - abs(s + 1.0) ** 2) ** 2 - 4.0 * abs(a + 1.0) ** 2 * abs(b + 1.0) ** 2
    u = (
        quad * t * t
        + 2.0
        * (
            ab2 * sr
            - (np.conj(s) + 1.0) * (a * a + b * b + 1.0)
            + (s + 1.0) * (np.conj(a) ** 2 + np.conj(b) ** 2 + 1.0)
            + 2.0 * (a * b - np.conj(a * b))
        )
        * t
        + dd2
        - 2.0 * s2
        + 4.0 * (ab2 + 1.0)
    )
    p = 2.0 * quad * t * t - 2.0 * (4.0 * ab2 + dd2 - 2.0 * s2 + 4.0)
    v = (
        -4.0
        * (ab2 * (ab2 - 2.0 * s2 + 2.0) + (s2 - 2.0) ** 2 - dd2 + 1.0)
        * t
        * t
        - 4.0
        * (
            (ab2 - abs(s - 1.0) ** 2) * sr
            + 2.0 * (np.conj(s) - 2.0) * (a * b - 1.0)
            - 2.0 * (s - 2.0) * (np.conj(a * b) - 1.0)
        )
        * t
    )
    q = 4.0 * ((ab2 - abs(s - 1.0) ** 2) ** 2 - 4.0 * abs(a - 1.0) ** 2 * abs(b - 1.0) ** 2) * t * t
    return ConicGeneral(u=u, p=float(p.real), v=v, q=float(q))


def _circle_tangent_intersection(w1: complex, w2: complex) -> complex:
    return 2.0 * w1 * w2 / (w1 + w2)


def exterior_curve_samples_parabolic(m: ParabolicBlaschkeLike, n: int = 360) -> ExteriorSamples:
    """Tangent-intersection cloud of the P_t exterior curve (degree <= d-1).

    Intersections are computed in the disk picture and pushed through the
    line-preserving boundary transform; pairs whose circle tangents are
    parallel, or whose intersection hits the transform's singular line
    Re w = -1 (parallel parabola tangents), are skipped.
    """
    if n < 3:
        raise ValidationError("need n >= 3 samples")
    args = 2.0 * np.pi * np.arange(n) / n
    rows = preimage_rows(m.b, np.exp(1j * args))
    d = m.b.degree
    t = m.t
    pts = []
    ang = []
    skipped = 0
    for r in range(n):
        for i in range(d - 1):
            for j in range(i + 1, d):
                wi, wj = rows[r, i], rows[r, j]
                if abs(wi + wj) < 1e-9:
                    skipped += 1
                    continue
                w0 = _circle_tangent_intersection(wi, wj)
                if abs(w0.real + 1.0) < 1e-9:
                    skipped += 1
                    continue
                x, y = w0.real, w0.imag
                pts.append(complex((x - 1.0) / (x + 1.0), -2.0 * y * t / (x + 1.0)))
                ang.append(args[r])
    return ExteriorSamples(
        points=np.asarray(pts, dtype=complex),
        arg_lambda=np.asarray(ang, dtype=float),
        skipped=skipped,
    )
