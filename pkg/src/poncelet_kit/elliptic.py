"""Exterior of an ellipse: the conjugated Blaschke-like map, its interior
and exterior curves, the triangle radius quadratic, and the centroid locus.

The ellipse E_t (0 < t < 1) is the image of the unit circle under the
Joukowski-type map

    phi_t(w) = (t^2 w + 1/w)/(1 + t^2),

which carries the punctured unit disk conformally onto the exterior of
E_t.  Conjugation B_{phi_t} = phi_t o B o phi_t^{-1} turns a canonical
Blaschke product B into a self-map of that exterior; chords of boundary
preimages then envelope an ellipse and tangent-line intersections trace
an algebraic curve of degree at most d-1.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .blaschke import (
    BlaschkeProduct,
    ExteriorSamples,
    centroid_circle,
    exterior_intersection_disk,
    preimage_rows,
    preimages,
)
from .conics import (
    ConicGeneral,
    EllipseStandard,
    evaluate_conic,
    general_to_standard,
    standard_to_general,
)
from .errors import (
    ComplexRootsError,
    InsideEllipseError,
    NotOnBoundaryError,
    PonceletKitError,
    ValidationError,
    ZeroInputError,
)
from .verify import poncelet_closure

__all__ = [
    "EllipticBlaschkeLike",
    "CentroidLocus",
    "CayleySelection",
    "phi_forward",
    "phi_inverse",
    "phi_boundary",
    "ellipse_Et",
    "blaschke_like_apply",
    "preimages_on_Et",
    "interior_curve_elliptic",
    "interior_foci",
    "interior_r",
    "cayley_R",
    "select_inscribed",
    "exterior_intersection_Et",
    "exterior_curve_samples_elliptic",
    "centroid_locus_elliptic",
]


def _check_t(t: float) -> float:
    t = float(t)
    if not 0.0 < t < 1.0:
        raise ValidationError(f"need 0 < t < 1, got {t}")
    return t


@dataclass(frozen=True)
class EllipticBlaschkeLike:
    """A canonical product conjugated to the exterior of E_t."""

    b: BlaschkeProduct
    t: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "t", _check_t(self.t))

    def __call__(self, z):
        return blaschke_like_apply(self, z)


def phi_forward(t: float, w):
    """phi_t on the punctured closed disk 0 < |w| <= 1."""
    t = _check_t(t)
    scalar = np.isscalar(w)
    w = complex(w) if scalar else np.asarray(w, dtype=complex)
    if np.any(np.abs(w) < 1e-12):
        raise ZeroInputError("phi_t is unbounded at w = 0")
    if np.any(np.abs(w) > 1.0 + 1e-9):
        raise ValidationError("phi_t domain is the punctured closed unit disk")
    val = (t * t * w + 1.0 / w) / (1.0 + t * t)
    return complex(val) if scalar else val


def phi_boundary(t: float, w):
    """Boundary form of phi_t: on |w| = 1, 1/w = conj(w), so
    phi_t(w) = (t^2 w + conj(w))/(1 + t^2)."""
    t = _check_t(t)
    return (t * t * w + np.conj(w)) / (1.0 + t * t)


def ellipse_Et(t: float) -> ConicGeneral:
    """The boundary ellipse t^2 z^2 - (1 + t^4) z conj(z) + t^2 conj(z)^2
    + (1 - t^2)^2 = 0, with foci +-2t/(1+t^2) and focal sum 2."""
    t = _check_t(t)
    return ConicGeneral(u=t * t, p=-(1.0 + t**4), v=0.0, q=(1.0 - t * t) ** 2)


def phi_inverse(t: float, z: complex) -> complex:
    """The branch of phi_t^{-1} with |w| < 1.

    Roots of t^2 w^2 - (1 + t^2) z w + 1 = 0 have modulus product 1/t^2 > 1,
    so at most one lies in the disk; z inside E_t leaves none and is
    rejected.  On the boundary the closed form (conj(z) - t^2 z)/(1 - t^2)
    is used directly.
    """
    t = _check_t(t)
    z = complex(z)
    et = ellipse_Et(t)
    if abs(evaluate_conic(et, z)) < 1e-10 * et.scale() * max(1.0, abs(z)) ** 2:
        return (np.conj(z) - t * t * z) / (1.0 - t * t)
    a = t * t
    b = -(1.0 + t * t) * z
    disc = b * b - 4.0 * a
    sq = np.sqrt(complex(disc))
    if (np.conj(b) * sq).real < 0.0:
        sq = -sq
    qq = -0.5 * (b + sq)
    # qq = 0 would need b = 0 and disc = 0 at once, impossible for t > 0
    w = min(qq / a, 1.0 / qq, key=abs)
    if abs(w) >= 1.0:
        raise InsideEllipseError("no preimage in the unit disk; z is inside E_t")
    return complex(w)


def blaschke_like_apply(m: EllipticBlaschkeLike, z):
    """B_{phi_t}(z) = phi_t(B(phi_t^{-1}(z))) for z outside or on E_t."""
    if np.isscalar(z):
        return phi_forward(m.t, m.b(phi_inverse(m.t, z)))
    return np.asarray([phi_forward(m.t, m.b(phi_inverse(m.t, zz))) for zz in np.ravel(z)])


def preimages_on_Et(m: EllipticBlaschkeLike, lam_tilde: complex) -> list:
    """The d boundary points mapped to lam_tilde by B_{phi_t}."""
    lam_tilde = complex(lam_tilde)
    et = ellipse_Et(m.t)
    if abs(evaluate_conic(et, lam_tilde)) > 1e-10 * et.scale() * max(1.0, abs(lam_tilde)) ** 2:
        raise NotOnBoundaryError("lam_tilde is not on E_t")
    lam = (np.conj(lam_tilde) - m.t**2 * lam_tilde) / (1.0 - m.t**2)
    lam = lam / abs(lam)
    ws = preimages(m.b, lam)
    return [phi_forward(m.t, w) for w in ws]


def interior_curve_elliptic(a: complex, b: complex, t: float) -> ConicGeneral:
    """The ellipse enveloped by preimage chords on E_t (degree 3, zeros
    {0, a, b}).  Single transcription point for the long coefficient
    blocks; the contraction identity

        (t^2 - 1)^2 g_I((conj(z) - t^2 z)/(1 - t^2)) = g_I^{phi_t}(z)

    relating it to the disk interior curve g_I is enforced in the tests.
    """
    t = _check_t(t)
    a, b = complex(a), complex(b)
    if abs(a) >= 1.0 or abs(b) >= 1.0:
        raise ValidationError("zeros must lie in the open unit disk")
    ab2 = abs(a * b) ** 2
    s2 = abs(a + b) ** 2
    m = 2.0 * ab2 - s2 + 2.0
    dd = (a - b) ** 2
    ddc = np.conj(dd)
    u = dd * t**4 + 2.0 * m * t * t + ddc
    p = -2.0 * (m * (t**4 + 1.0) + (dd + ddc).real * t * t)
    v = -2.0 * (1.0 - t * t) * (
        ((ab2 + 1.0) * (a + b) - (a * a + b * b) * np.conj(a + b)) * t * t
        + (a + b) * np.conj(a * a + b * b)
        - (ab2 + 1.0) * np.conj(a + b)
    )
    q = (1.0 - t * t) ** 2 * ((ab2 - s2 - 1.0) ** 2 - 4.0 * s2)
    return ConicGeneral(u=u, p=float(p), v=v, q=float(q))


def interior_foci(a: complex, b: complex, t: float):
    """Foci of the E_t interior curve as the roots of

        (t^2+1)^2 zeta^2 - (t^2+1)((a+b)t^2 + conj(a+b)) zeta
            + (conj(a) + t^2 a)(conj(b) + t^2 b) - t^2 (1-|a|^2)(1-|b|^2) = 0,

    returned in lexicographic order.
    """
    t = _check_t(t)
    a, b = complex(a), complex(b)
    t2 = t * t
    c2 = (t2 + 1.0) ** 2
    c1 = -(t2 + 1.0) * ((a + b) * t2 + np.conj(a + b))
    c0 = (np.conj(a) + t2 * a) * (np.conj(b) + t2 * b) - t2 * (1.0 - abs(a) ** 2) * (
        1.0 - abs(b) ** 2
    )
    roots = np.roots([c2, c1, c0])
    f1, f2 = sorted((complex(r) for r in roots), key=lambda z: (z.real, z.imag))
    return f1, f2


def interior_r(a: complex, b: complex, t: float) -> float:
    """Focal sum of the E_t interior curve: r = |f1-f2| sqrt(2 + |P/U|)/2.

    Coincident foci (a = b) make the curve a circle and U vanish; that case
    falls back to the circle radius recovered from the conic itself and is
    flagged with a warning.
    """
    f1, f2 = interior_foci(a, b, t)
    conic = interior_curve_elliptic(a, b, t)
    scale = max(1.0, abs(f1), abs(f2))
    if abs(f1 - f2) < 1e-9 * scale or abs(conic.u) < 1e-13 * conic.scale():
        warnings.warn(
            "coincident foci; falling back to the circle case", RuntimeWarning, stacklevel=2
        )
        return general_to_standard(conic).r
    return 0.5 * abs(f1 - f2) * math.sqrt(2.0 + abs(conic.p / conic.u))


def cayley_R(f1: complex, f2: complex, t: float):
    """Candidate focal sums of a 3-inscribed ellipse in E_t with foci f1, f2.

    The squares x = r^2 solve t^4 x^2 + c1 x + c0 = 0 with

        c1 = (1+t^4) t^2 (2 Re(f1 f2) + 2) - 2 (|f1|^2 + |f2|^2) t^4 - (1+t^4)^2
        c0 = |(conj(f1) f2 - 1) t^4 - (f2^2 + conj(f1)^2 - 2) t^2 + conj(f1) f2 - 1|^2.

    Both roots are positive for admissible foci; exactly one of the two
    returned values (r_small, r_large) yields a triangle-inscribed ellipse
    (see select_inscribed).
    """
    t = _check_t(t)
    f1, f2 = complex(f1), complex(f2)
    et = ellipse_Et(t)
    for f in (f1, f2):
        if evaluate_conic(et, f) <= 0.0:
            raise ValidationError(f"focus {f} is not strictly inside E_t")
    t2 = t * t
    t4 = t2 * t2
    c1 = (1.0 + t4) * t2 * (2.0 * (f1 * f2).real + 2.0) - 2.0 * (
        abs(f1) ** 2 + abs(f2) ** 2
    ) * t4 - (1.0 + t4) ** 2
    c0 = abs(
        (np.conj(f1) * f2 - 1.0) * t4
        - (f2 * f2 + np.conj(f1) ** 2 - 2.0) * t2
        + np.conj(f1) * f2
        - 1.0
    ) ** 2
    disc = c1 * c1 - 4.0 * t4 * c0
    if disc < 0.0:
        raise ComplexRootsError("no real inscribed ellipse for these foci")
    sq = math.sqrt(disc)
    x1 = (-c1 - sq) / (2.0 * t4)
    x2 = (-c1 + sq) / (2.0 * t4)
    if x1 <= 0.0 or x2 <= 0.0:
        raise ComplexRootsError("radius quadratic produced a nonpositive root")
    return math.sqrt(x1), math.sqrt(x2)


@dataclass(frozen=True)
class CayleySelection:
    r_accepted: float
    r_rejected: float
    closure_accepted: float
    closure_rejected: float


def select_inscribed(f1: complex, f2: complex, t: float, n_starts: int = 5, seed: int = 0):
    """Disambiguate the two cayley_R roots by Poncelet closure.

    Runs the tangent-chord iteration on (E_t, candidate ellipse) from
    several boundary starts; the root whose worst closure distance is
    smaller is accepted.  A candidate that cannot even form an ellipse
    (r <= |f1 - f2|) scores infinity.
    """
    r_small, r_large = cayley_R(f1, f2, t)
    f1, f2 = complex(f1), complex(f2)
    et = ellipse_Et(t)
    rng = np.random.default_rng(seed)
    thetas = rng.uniform(0.0, 2.0 * np.pi, n_starts)
    bm = (1.0 - t * t) / (1.0 + t * t)
    starts = np.cos(thetas) + 1j * bm * np.sin(thetas)

    def worst_closure(r):
        if r <= abs(f1 - f2):
            return math.inf
        inner = standard_to_general(EllipseStandard(f1=f1, f2=f2, r=r))
        worst = 0.0
        for z0 in starts:
            try:
                worst = max(worst, poncelet_closure(et, inner, complex(z0), 3))
            except PonceletKitError:
                return math.inf
        return worst

    c_small = worst_closure(r_small)
    c_large = worst_closure(r_large)
    if c_small <= c_large:
        return CayleySelection(r_small, r_large, c_small, c_large)
    return CayleySelection(r_large, r_small, c_large, c_small)


def exterior_intersection_Et(t: float, omega1: complex, omega2: complex) -> complex:
    """Intersection of the E_t tangent lines at phi_t(omega1), phi_t(omega2):
    z = (t^2 w0 + conj(w0))/(1 + t^2) for the disk intersection w0."""
    t = _check_t(t)
    w0 = exterior_intersection_disk(omega1, omega2)
    return complex((t * t * w0 + np.conj(w0)) / (1.0 + t * t))


def exterior_curve_samples_elliptic(m: EllipticBlaschkeLike, n: int = 360) -> ExteriorSamples:
    """Tangent-intersection cloud of the E_t exterior curve (degree <= d-1)."""
    if n < 3:
        raise ValidationError("need n >= 3 samples")
    args = 2.0 * np.pi * np.arange(n) / n
    rows = preimage_rows(m.b, np.exp(1j * args))
    d = m.b.degree
    t2 = m.t * m.t
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
                w0 = 2.0 * rows[r, i] * rows[r, j] / s
                pts.append((t2 * w0 + np.conj(w0)) / (1.0 + t2))
                ang.append(args[r])
    return ExteriorSamples(
        points=np.asarray(pts, dtype=complex),
        arg_lambda=np.asarray(ang, dtype=float),
        skipped=skipped,
    )


@dataclass(frozen=True)
class CentroidLocus:
    """Vertex-centroid locus on E_t: an ellipse similar to E_t or a point."""

    kind: str
    ellipse: EllipseStandard | None
    point: complex | None
    axis_ratio: float


def centroid_locus_elliptic(m: EllipticBlaschkeLike) -> CentroidLocus:
    """Image of the disk centroid circle under the boundary contraction
    X + iY -> X + i ((t^2-1)/(1+t^2)) Y.

    A circle of radius rho maps to an ellipse with horizontal semi-major
    axis rho and axis ratio (1-t^2)/(1+t^2), the similarity class of E_t;
    radius 0 degenerates to a point.
    """
    circ = centroid_circle(m.b)
    t = m.t
    s = (t * t - 1.0) / (1.0 + t * t)
    center = circ.center.real + 1j * s * circ.center.imag
    ratio = (1.0 - t * t) / (1.0 + t * t)
    if circ.radius < 1e-14:
        return CentroidLocus(kind="point", ellipse=None, point=center, axis_ratio=ratio)
    rho = circ.radius
    off = rho * math.sqrt(1.0 - s * s)
    ell = EllipseStandard(f1=center - off, f2=center + off, r=2.0 * rho)
    return CentroidLocus(kind="ellipse", ellipse=ell, point=None, axis_ratio=ratio)
