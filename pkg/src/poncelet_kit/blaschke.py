"""Canonical Blaschke products: evaluation, boundary preimages,
canonicalization of general products, the degree-3 interior ellipse,
the vertex-centroid circle, and the disk exterior curve.

A canonical product of degree d is

    B(w) = w (w - a_1)/(1 - conj(a_1) w) ... (w - a_{d-1})/(1 - conj(a_{d-1}) w)

with all a_k in the open unit disk; the zero at the origin and the
unimodular prefactor 1 are the canonical choices.  A general product
carries an explicit zero list of length d and a rotation e^{i theta};
``canonicalize`` reduces it by pre/post Moebius composition.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .conics import ConicGeneral
from .errors import (
    AntipodalPointsError,
    NotUnimodularError,
    NumericalError,
    PoleInputError,
    RootQualityError,
    ValidationError,
)

__all__ = [
    "BlaschkeProduct",
    "GeneralBlaschke",
    "Circle",
    "MobiusPair",
    "ExteriorSamples",
    "evaluate",
    "preimages",
    "preimage_rows",
    "canonicalize",
    "interior_curve_disk",
    "centroid_circle",
    "exterior_intersection_disk",
    "exterior_curve_samples_disk",
]


def _check_disk_zeros(zeros):
    for a in zeros:
        if abs(a) >= 1.0:
            raise ValidationError(f"zero {a} is not in the open unit disk")


@dataclass(frozen=True)
class BlaschkeProduct:
    """Canonical product; ``zeros`` lists the d-1 nonzero zeros only."""

    zeros: tuple

    def __post_init__(self) -> None:
        zs = tuple(complex(a) for a in self.zeros)
        if len(zs) == 0:
            raise ValidationError("need degree >= 2 (at least one listed zero)")
        _check_disk_zeros(zs)
        object.__setattr__(self, "zeros", zs)

    @property
    def degree(self) -> int:
        return len(self.zeros) + 1

    def __call__(self, w):
        return evaluate(self, w)

    def to_json(self) -> dict:
        return {"zeros": [[a.real, a.imag] for a in self.zeros]}

    @classmethod
    def from_json(cls, obj: dict) -> "BlaschkeProduct":
        return cls(zeros=tuple(complex(re, im) for re, im in obj["zeros"]))


@dataclass(frozen=True)
class GeneralBlaschke:
    """Product e^{i theta} prod (w - a_k)/(1 - conj(a_k) w) over all d zeros."""

    zeros: tuple
    theta: float = 0.0

    def __post_init__(self) -> None:
        zs = tuple(complex(a) for a in self.zeros)
        if len(zs) < 2:
            raise ValidationError("need degree >= 2")
        _check_disk_zeros(zs)
        object.__setattr__(self, "zeros", zs)
        object.__setattr__(self, "theta", float(self.theta))

    @property
    def degree(self) -> int:
        return len(self.zeros)

    def __call__(self, w):
        w = np.asarray(w, dtype=complex) if not np.isscalar(w) else complex(w)
        _check_poles(self.zeros, w)
        val = cmath.exp(1j * self.theta) * np.ones(1, dtype=complex)[0]
        for a in self.zeros:
            val = val * (w - a) / (1.0 - np.conj(a) * w)
        return val if isinstance(val, np.ndarray) else complex(val)

    def to_json(self) -> dict:
        return {"zeros": [[a.real, a.imag] for a in self.zeros], "theta": self.theta}

    @classmethod
    def from_json(cls, obj: dict) -> "GeneralBlaschke":
        return cls(
            zeros=tuple(complex(re, im) for re, im in obj["zeros"]),
            theta=float(obj.get("theta", 0.0)),
        )


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if self.radius < 0.0:
            raise ValidationError("radius must be nonnegative")

    @property
    def is_point(self) -> bool:
        return self.radius == 0.0


@dataclass(frozen=True)
class MobiusPair:
    """The reducing pair: f1 (rotation, applied before B) and f2 (disk
    automorphism moving w0 to 0, applied after)."""

    rotation: complex
    w0: complex

    def f1(self, z):
        return self.rotation * z

    def f2(self, z):
        return (z - self.w0) / (1.0 - np.conj(self.w0) * z)

    @property
    def is_identity(self) -> bool:
        return abs(self.rotation - 1.0) < 1e-12 and abs(self.w0) < 1e-12


@dataclass(frozen=True, eq=False)
class ExteriorSamples:
    """Point cloud of tangent-line intersections plus its source angles."""

    points: np.ndarray
    arg_lambda: np.ndarray
    skipped: int


def _check_poles(zeros, w):
    for a in zeros:
        if a == 0:
            continue
        pole = 1.0 / np.conj(a)
        if np.any(np.abs(np.asarray(w) - pole) < 1e-12):
            raise PoleInputError(f"evaluation at pole {pole}")


def evaluate(b: BlaschkeProduct, w):
    """B(w) for scalar or ndarray w; rejects the poles 1/conj(a_k)."""
    scalar = np.isscalar(w)
    w = complex(w) if scalar else np.asarray(w, dtype=complex)
    _check_poles(b.zeros, w)
    val = w
    for a in b.zeros:
        val = val * (w - a) / (1.0 - np.conj(a) * w)
    return complex(val) if scalar else val


def preimage_rows(b: BlaschkeProduct, lams, newton_iters: int = 3) -> np.ndarray:
    """Backend-dispatched preimage grid; rows sorted by argument."""
    return _backend.preimage_grid(
        np.asarray(b.zeros, dtype=np.complex128),
        np.asarray(lams, dtype=np.complex128),
        newton_iters,
    )


def preimages(b: BlaschkeProduct, lam: complex) -> list:
    """The d distinct solutions of B(w) = lam on the unit circle.

    Roots of the monic polynomial w prod(w - a_k) - lam prod(1 - conj(a_k) w)
    via companion-matrix eigenvalues, Newton-polished on B(w) - lam.  Roots
    are reported as computed (never projected onto the circle); residuals
    beyond tolerance raise RootQualityError.
    """
    lam = complex(lam)
    if abs(abs(lam) - 1.0) > 1e-12:
        raise NotUnimodularError(f"|lambda| = {abs(lam)} is not 1")
    lam /= abs(lam)
    row = preimage_rows(b, [lam])[0]
    if np.max(np.abs(np.abs(row) - 1.0)) > 1e-8:
        raise RootQualityError("a preimage left the unit circle beyond 1e-8")
    resid = np.abs(evaluate(b, row) - lam)
    if np.max(resid) > 1e-9:
        raise RootQualityError(f"polished residual {np.max(resid):.3e} exceeds 1e-9")
    d = b.degree
    for i in range(d - 1):
        for j in range(i + 1, d):
            if abs(row[i] - row[j]) < 1e-12:
                raise RootQualityError("preimages collided; input out of theory's reach")
    return [complex(z) for z in row]


def canonicalize(g: GeneralBlaschke):
    """Reduce a general product to canonical form.

    With theta taken in [0, 2pi) and w0 = B(0), the pair f1(z) = e^{-i theta/d} z,
    f2(z) = (z - w0)/(1 - conj(w0) z) makes B' = f2 o B o f1 canonical.  The
    zeros of B' are e^{i theta/d} u_j for the d-1 nonzero roots u_j of

        e^{i theta} prod(z - a_k) - w0 prod(1 - conj(a_k) z) = 0,

    whose remaining root is always 0.  Returns (B', MobiusPair).
    """
    d = g.degree
    theta = g.theta % (2.0 * math.pi)
    phase = cmath.exp(1j * theta)
    w0 = complex(g(0.0))

    asc_a = np.array([1.0 + 0.0j])
    asc_c = np.array([1.0 + 0.0j])
    for a in g.zeros:
        asc_a = np.convolve(asc_a, np.array([-a, 1.0 + 0.0j]))
        asc_c = np.convolve(asc_c, np.array([1.0 + 0.0j, -np.conj(a)]))
    coeffs = phase * asc_a - w0 * asc_c          # ascending, degree d
    desc = coeffs[::-1]
    roots = np.roots(desc)
    dp = np.polyder(desc)
    for _ in range(3):
        val = np.polyval(desc, roots)
        der = np.polyval(dp, roots)
        ok = np.abs(der) > 1e-30
        roots = roots - np.where(ok, val / np.where(ok, der, 1.0), 0.0)

    k0 = int(np.argmin(np.abs(roots)))
    if abs(roots[k0]) > 1e-8:
        raise NumericalError("canonicalization lost the root at the origin")
    rest = np.delete(roots, k0)
    new_zeros = cmath.exp(1j * theta / d) * rest
    if np.any(np.abs(new_zeros) >= 1.0):
        raise NumericalError("canonicalized zero left the unit disk")
    new_zeros = sorted((complex(z) for z in new_zeros), key=lambda z: (z.real, z.imag))
    pair = MobiusPair(rotation=cmath.exp(-1j * theta / d), w0=w0)
    return BlaschkeProduct(zeros=tuple(new_zeros)), pair


def interior_curve_disk(b: BlaschkeProduct) -> ConicGeneral:
    """The conic every preimage chord of a degree-3 product touches.

    For zeros {0, a, b} this is the ellipse with foci a, b and focal sum
    |1 - conj(a) b|, written directly in general form:

        u = (a-b)^2
        p = -2 (2 (1 + |ab|^2) - |a+b|^2)
        v = 2 ((1 + |ab|^2)(a+b) - (a^2+b^2)(conj(a)+conj(b)))
        q = (1 - |ab|^2)^2 - |a+b|^2 (2 (1 + |ab|^2) - |a+b|^2)

    These coefficients coincide exactly (same scale) with
    standard_to_general(EllipseStandard(a, b, |1 - conj(a) b|)).
    """
    if b.degree != 3:
        raise ValidationError("closed-form interior curve needs degree 3")
    za, zb = b.zeros
    ab2 = abs(za * zb) ** 2
    s = za + zb
    s2 = abs(s) ** 2
    m = 2.0 * (1.0 + ab2) - s2
    u = (za - zb) ** 2
    p = -2.0 * m
    v = 2.0 * ((1.0 + ab2) * s - (za * za + zb * zb) * np.conj(s))
    q = (1.0 - ab2) ** 2 - s2 * m
    return ConicGeneral(u=u, p=p, v=v, q=q)


def centroid_circle(b: BlaschkeProduct) -> Circle:
    """Locus of vertex centroids: as lam runs over the circle, the mean of
    the d preimages stays on the circle with center (a_1 + ... + a_{d-1})/d
    and radius |a_1 ... a_{d-1}|/d."""
    d = b.degree
    center = sum(b.zeros) / d
    radius = abs(np.prod(np.asarray(b.zeros))) / d
    return Circle(center=complex(center), radius=float(radius))


def _check_unimodular(w, tol=1e-9):
    if abs(abs(w) - 1.0) > tol:
        raise ValidationError(f"|w| = {abs(w)} is not 1")


def exterior_intersection_disk(omega1: complex, omega2: complex) -> complex:
    """Intersection of the unit-circle tangent lines at omega1 and omega2:
    w0 = 2 omega1 omega2/(omega1 + omega2).  Antipodal points give parallel
    tangents and are rejected."""
    omega1, omega2 = complex(omega1), complex(omega2)
    _check_unimodular(omega1)
    _check_unimodular(omega2)
    if abs(omega1 + omega2) < 1e-12:
        raise AntipodalPointsError("tangents at antipodal points are parallel")
    return 2.0 * omega1 * omega2 / (omega1 + omega2)


def exterior_curve_samples_disk(b: BlaschkeProduct, n: int = 360) -> ExteriorSamples:
    """Tangent-intersection cloud of the disk exterior curve.

    For n values of lam on the circle, intersects the unit-circle tangents
    at every pair of preimages; near-antipodal pairs are skipped and
    counted.  The cloud lies on an algebraic curve of degree <= d-1.
    """
    if n < 3:
        raise ValidationError("need n >= 3 samples")
    args = 2.0 * np.pi * np.arange(n) / n
    lams = np.exp(1j * args)
    rows = preimage_rows(b, lams)
    d = b.degree
    pts = []
    ang = []
    skipped = 0
    for r in range(n):
        for i in range(d - 1):
            for j in range(i + 1, d):
                s = rows[r, i] + rows[r, j]
                if abs(s) < 1e-9:
                    skipped += 1
                    continue
                pts.append(2.0 * rows[r, i] * rows[r, j] / s)
                ang.append(args[r])
    return ExteriorSamples(
        points=np.asarray(pts, dtype=complex),
        arg_lambda=np.asarray(ang, dtype=float),
        skipped=skipped,
    )
