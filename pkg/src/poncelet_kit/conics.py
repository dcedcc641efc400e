"""Conic algebra in complex notation.

A real conic is written as

    E(z) = u_bar z^2 + p z z_bar + u z_bar^2 + v_bar z + v z_bar + q = 0

with p, q real and u, v complex; realness of the locus forces the z^2 and
z coefficients to be the conjugates of the z_bar^2 and z_bar ones, so the
tuple (u, p, v, q) determines the conic.  An ellipse also has the focal
("standard") form |z - f1| + |z - f2| = r.  This module converts between
the two, classifies conics, and provides the line primitives (chords,
tangent lines, tangency residuals) that the rest of the package builds on.

Conics are defined only up to a real scale; ``normalize_conic`` fixes a
canonical representative so equality is testable.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    CoincidentPointsError,
    DegenerateConicError,
    NotAnEllipseError,
    NotOnConicError,
    SingularPointError,
    ValidationError,
)

__all__ = [
    "ConicGeneral",
    "EllipseStandard",
    "RealLine",
    "ConicClass",
    "evaluate_conic",
    "classify_conic",
    "standard_to_general",
    "general_to_standard",
    "line_through",
    "tangent_line_at",
    "tangency_residual",
    "intersect_lines",
    "normalize_conic",
    "conics_equivalent",
    "ellipse_boundary_points",
]

_EPS = 1e-14


@dataclass(frozen=True)
class ConicGeneral:
    """Coefficients (u, p, v, q) of u_bar z^2 + p z z_bar + u z_bar^2 +
    v_bar z + v z_bar + q = 0."""

    u: complex
    p: float
    v: complex
    q: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "u", complex(self.u))
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "v", complex(self.v))
        object.__setattr__(self, "q", float(self.q))
        if self.scale() == 0.0:
            raise ValidationError("conic is the zero polynomial")

    def scale(self) -> float:
        """Largest coefficient magnitude; the natural relative scale."""
        return max(abs(self.u), abs(self.p), abs(self.v), abs(self.q))

    def to_json(self) -> dict:
        return {
            "u": [self.u.real, self.u.imag],
            "p": self.p,
            "v": [self.v.real, self.v.imag],
            "q": self.q,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ConicGeneral":
        return cls(
            u=complex(obj["u"][0], obj["u"][1]),
            p=float(obj["p"]),
            v=complex(obj["v"][0], obj["v"][1]),
            q=float(obj["q"]),
        )


@dataclass(frozen=True)
class EllipseStandard:
    """Focal form |z - f1| + |z - f2| = r; circles are the f1 = f2 case."""

    f1: complex
    f2: complex
    r: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "f1", complex(self.f1))
        object.__setattr__(self, "f2", complex(self.f2))
        object.__setattr__(self, "r", float(self.r))
        d = abs(self.f1 - self.f2)
        if self.r <= 0.0:
            raise ValidationError("focal sum r must be positive")
        if d > 0.0 and self.r <= d:
            raise ValidationError("need r > |f1 - f2| for a real ellipse")

    @property
    def center(self) -> complex:
        return 0.5 * (self.f1 + self.f2)

    @property
    def semi_major(self) -> float:
        return 0.5 * self.r

    @property
    def semi_minor(self) -> float:
        c = 0.5 * abs(self.f1 - self.f2)
        return math.sqrt(max(self.semi_major**2 - c**2, 0.0))

    def to_json(self) -> dict:
        return {
            "f1": [self.f1.real, self.f1.imag],
            "f2": [self.f2.real, self.f2.imag],
            "r": self.r,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EllipseStandard":
        return cls(
            f1=complex(obj["f1"][0], obj["f1"][1]),
            f2=complex(obj["f2"][0], obj["f2"][1]),
            r=float(obj["r"]),
        )


@dataclass(frozen=True)
class RealLine:
    """Line beta z + beta_bar z_bar + gamma = 0 with |beta| = 1, gamma real.

    (beta, gamma) and (-beta, -gamma) describe the same line; construction
    canonicalizes to gamma > 0, breaking gamma = 0 ties by Im(beta) > 0 and
    then Re(beta) > 0.
    """

    beta: complex
    gamma: float

    def __post_init__(self) -> None:
        beta = complex(self.beta)
        gamma = float(self.gamma)
        mod = abs(beta)
        if mod < _EPS:
            raise ValidationError("line normal vector must be nonzero")
        beta /= mod
        gamma /= mod
        if abs(gamma) < _EPS:
            gamma = 0.0
        flip = gamma < 0.0
        if gamma == 0.0:
            if abs(beta.imag) <= _EPS:
                flip = beta.real < 0.0
            else:
                flip = beta.imag < 0.0
        if flip:
            beta = -beta
            gamma = abs(gamma)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "gamma", gamma)

    def evaluate(self, z: complex) -> float:
        return (self.beta * z + np.conj(self.beta) * np.conj(z)).real + self.gamma

    def point_on(self) -> complex:
        """The foot of the perpendicular from the origin."""
        return -0.5 * self.gamma * np.conj(self.beta)

    def direction(self) -> complex:
        """Unit direction vector of the line."""
        return 1j * np.conj(self.beta)

    def to_json(self) -> dict:
        return {"beta": [self.beta.real, self.beta.imag], "gamma": self.gamma}

    @classmethod
    def from_json(cls, obj: dict) -> "RealLine":
        return cls(beta=complex(obj["beta"][0], obj["beta"][1]), gamma=float(obj["gamma"]))


class ConicClass(enum.Enum):
    ELLIPSE = "ellipse"
    CIRCLE = "circle"
    PARABOLA = "parabola"
    HYPERBOLA = "hyperbola"
    DEGENERATE_POINT = "degenerate-point"
    DEGENERATE_LINES = "degenerate-lines"
    EMPTY = "empty"


def evaluate_conic(c: ConicGeneral, z):
    """Real value of the defining polynomial at z (scalar or ndarray)."""
    z = np.asarray(z, dtype=complex) if not np.isscalar(z) else complex(z)
    zb = np.conj(z)
    val = (
        np.conj(c.u) * z * z
        + c.p * z * zb
        + c.u * zb * zb
        + np.conj(c.v) * z
        + c.v * zb
        + c.q
    )
    return val.real


# Relative tolerance of the parabola classification band: the discriminant
# p^2 - 4|u|^2 never hits exact zero in floating point.
_PARABOLA_RTOL = 1e-10


def classify_conic(c: ConicGeneral, rtol: float = _PARABOLA_RTOL) -> ConicClass:
    """Classify by the discriminant p^2 - 4|u|^2 and the cubic invariant.

    Elliptic type (discriminant > 0) splits on the sign of

        E5 = p (p v v_bar - u v_bar^2 - u_bar v^2 + q (4 u u_bar - p^2)),

    which is positive exactly for a real ellipse, zero for a single point
    and negative for the empty locus.  E5 equals -p det(M) for the 3x3
    matrix M of the projective quadratic form.
    """
    u, p, v, q = c.u, c.p, c.v, c.q
    disc = p * p - 4.0 * abs(u) ** 2
    disc_scale = p * p + 4.0 * abs(u) ** 2

    if disc_scale == 0.0:
        # No quadratic part at all: a line (v != 0) or empty/zero constant.
        return ConicClass.DEGENERATE_LINES if abs(v) > 0.0 else ConicClass.EMPTY

    if abs(disc) < rtol * disc_scale:
        return _classify_parabolic(c)

    if disc < 0.0:
        det = _det3(c)
        if abs(det) < 1e-10 * c.scale() ** 3:
            return ConicClass.DEGENERATE_LINES
        return ConicClass.HYPERBOLA

    e5 = p * (
        p * abs(v) ** 2
        - (u * np.conj(v) ** 2).real * 2.0
        + q * (4.0 * abs(u) ** 2 - p * p)
    )
    # u v_bar^2 + u_bar v^2 = 2 Re(u v_bar^2), folded above.
    if abs(e5) < 1e-12 * c.scale() ** 3:
        return ConicClass.DEGENERATE_POINT
    if e5 < 0.0:
        return ConicClass.EMPTY
    if abs(u) < rtol * abs(p):
        return ConicClass.CIRCLE
    return ConicClass.ELLIPSE


def _det3(c: ConicGeneral) -> float:
    m = _matrix3(c)
    return float(np.linalg.det(m))


def _matrix3(c: ConicGeneral) -> np.ndarray:
    """Symmetric matrix of the quadratic form at (x, y, 1)."""
    u, p, v, q = c.u, c.p, c.v, c.q
    return np.array(
        [
            [p + 2.0 * u.real, 2.0 * u.imag, v.real],
            [2.0 * u.imag, p - 2.0 * u.real, v.imag],
            [v.real, v.imag, q],
        ]
    )


def _classify_parabolic(c: ConicGeneral) -> ConicClass:
    # Quadratic part is a perfect square mu (n . X)^2; split the linear part
    # into components along n and the perpendicular m.
    s2 = _matrix3(c)[:2, :2]
    mu = s2[0, 0] + s2[1, 1]
    if abs(mu) < _EPS * c.scale():
        return ConicClass.DEGENERATE_LINES if abs(c.v) > 0.0 else ConicClass.EMPTY
    w, vecs = np.linalg.eigh(s2)
    n = vecs[:, int(np.argmax(np.abs(w)))]
    g = np.array([c.v.real, c.v.imag])
    g_par = float(g @ n)
    g_perp = float(g @ np.array([-n[1], n[0]]))
    if abs(g_perp) > 1e-10 * c.scale():
        return ConicClass.PARABOLA
    # mu s^2 + 2 g_par s + q = 0 along the n axis.
    disc1 = g_par * g_par - mu * c.q
    if disc1 < -1e-12 * c.scale() ** 2:
        return ConicClass.EMPTY
    return ConicClass.DEGENERATE_LINES


def standard_to_general(e: EllipseStandard) -> ConicGeneral:
    """Expand |z - f1| + |z - f2| = r into general form.

    The coefficients are exactly those of the double-squared expansion

        (f1b - f2b)^2 z^2 + 2(|f1 - f2|^2 - 2 r^2) z z_bar + (f1 - f2)^2 z_bar^2
        - 2((f1b - f2b)(|f1|^2 - |f2|^2) - r^2 (f1b + f2b)) z
        - 2((f1 - f2)(|f1|^2 - |f2|^2) - r^2 (f1 + f2)) z_bar
        + (|f1|^2 - |f2|^2)^2 - 2(|f1|^2 + |f2|^2) r^2 + r^4 = 0,

    with no renormalization applied.
    """
    f1, f2, r = e.f1, e.f2, e.r
    m = abs(f1) ** 2 - abs(f2) ** 2
    u = (f1 - f2) ** 2
    p = 2.0 * abs(f1 - f2) ** 2 - 4.0 * r * r
    v = -2.0 * ((f1 - f2) * m - r * r * (f1 + f2))
    q = m * m - 2.0 * (abs(f1) ** 2 + abs(f2) ** 2) * r * r + r**4
    return ConicGeneral(u=u, p=p, v=v, q=q)


def general_to_standard(c: ConicGeneral) -> EllipseStandard:
    """Recover the focal form of an ellipse or circle.

    The foci are the roots of

        (4 u u_bar - p^2) zeta^2 + (4 u v_bar - 2 p v) zeta + 4 q u - v^2 = 0

    and r = |f1 - f2| sqrt(2 + |p/u|) / 2.  For a circle (u = 0) the focus
    is -v/p with r^2 = 4 (v v_bar - p q)/p^2.
    """
    kind = classify_conic(c)
    if kind not in (ConicClass.ELLIPSE, ConicClass.CIRCLE):
        if kind in (ConicClass.DEGENERATE_POINT, ConicClass.DEGENERATE_LINES, ConicClass.EMPTY):
            raise DegenerateConicError(f"conic classifies as {kind.value}")
        raise NotAnEllipseError(f"conic classifies as {kind.value}")
    u, p, v, q = c.u, c.p, c.v, c.q
    if kind is ConicClass.CIRCLE or abs(u) < _PARABOLA_RTOL * abs(p):
        f = -v / p
        r2 = 4.0 * (abs(v) ** 2 - p * q) / (p * p)
        if r2 <= 0.0:
            raise DegenerateConicError("circle radius is not positive")
        return EllipseStandard(f1=f, f2=f, r=math.sqrt(r2))
    a2 = 4.0 * abs(u) ** 2 - p * p
    a1 = 4.0 * u * np.conj(v) - 2.0 * p * v
    a0 = 4.0 * q * u - v * v
    roots = np.roots([a2, a1, a0])
    f1, f2 = sorted(roots, key=lambda z: (z.real, z.imag))
    r = 0.5 * abs(f1 - f2) * math.sqrt(2.0 + abs(p / u))
    return EllipseStandard(f1=complex(f1), f2=complex(f2), r=r)


def line_through(z1: complex, z2: complex) -> RealLine:
    """Normalized line through two distinct points.

    The chord form (z1b - z2b) z - (z1 - z2) z_bar + (z1 z2b - z1b z2) = 0
    has an imaginary constant; multiplying by i gives the real normal form.
    """
    z1, z2 = complex(z1), complex(z2)
    if abs(z1 - z2) < _EPS * max(1.0, abs(z1), abs(z2)):
        raise CoincidentPointsError("line through coincident points is undefined")
    beta = 1j * (np.conj(z1) - np.conj(z2))
    gamma = -2.0 * (z1 * np.conj(z2)).imag
    return RealLine(beta=beta, gamma=gamma)


def tangent_line_at(c: ConicGeneral, z0: complex, rtol: float = 1e-8) -> RealLine:
    """Tangent line to the conic at a point z0 of its locus:

        (2 u_bar z0 + p z0b + v_bar) z + (2 u z0b + p z0 + v) z_bar
            + (v_bar z0 + v z0b + 2 q) = 0.
    """
    z0 = complex(z0)
    scale = c.scale() * max(1.0, abs(z0)) ** 2
    if abs(evaluate_conic(c, z0)) > rtol * scale:
        raise NotOnConicError("point is not on the conic")
    beta = 2.0 * np.conj(c.u) * z0 + c.p * np.conj(z0) + np.conj(c.v)
    if abs(beta) < 1e-12 * scale:
        raise SingularPointError("conic gradient vanishes at the point")
    gamma = (np.conj(c.v) * z0 + c.v * np.conj(z0)).real + 2.0 * c.q
    return RealLine(beta=beta, gamma=gamma)


def tangency_residual(line: RealLine, c: ConicGeneral) -> float:
    """Discriminant-based contact classification of a line and a conic.

    Substituting the parametrization z(s) = z0 + s d (z0 the canonical point
    of the line, d its unit direction) gives a real quadratic
    alpha s^2 + b s + g; the value returned is (b^2 - 4 alpha g)/alpha^2:
    0 at tangency, positive for a secant, negative for a disjoint line.
    The normalization makes the value invariant to the conic's scale.
    """
    z0 = line.point_on()
    d = line.direction()
    alpha = 2.0 * (np.conj(c.u) * d * d).real + c.p
    # |d| = 1, so the p|d|^2 term is just p.
    if alpha == 0.0:
        raise DegenerateConicError("line direction is asymptotic for this conic")
    b = 2.0 * ((2.0 * np.conj(c.u) * z0 + c.p * np.conj(z0) + np.conj(c.v)) * d).real
    g = evaluate_conic(c, z0)
    return (b * b - 4.0 * alpha * g) / (alpha * alpha)


def intersect_lines(l1: RealLine, l2: RealLine, rtol: float = 1e-12) -> complex:
    """Intersection point of two non-parallel lines."""
    det = 2.0 * (l1.beta * np.conj(l2.beta)).imag
    if abs(det) < rtol:
        raise ValidationError("lines are parallel or coincident")
    # Solve beta1 z + beta1b zb = -gamma1, beta2 z + beta2b zb = -gamma2.
    z = (-l1.gamma * np.conj(l2.beta) + l2.gamma * np.conj(l1.beta)) * (1j / det) * -1.0
    # Cramer: z = (-g1 * conj(b2) + g2 * conj(b1)) / (b1 conj(b2) - conj(b1) b2)
    # and the denominator equals i * det with det as above.
    return complex(z)


def normalize_conic(c: ConicGeneral) -> ConicGeneral:
    """Canonical representative of the real-scale equivalence class.

    Divides by the largest coefficient magnitude, then fixes the sign so
    that p > 0 when p is nonzero, else Re(u) > 0, else Re(v) > 0 (ties
    broken by Im(u), Im(v), then q).
    """
    s = c.scale()
    u, p, v, q = c.u / s, c.p / s, c.v / s, c.q / s
    for key in (p, u.real, u.imag, v.real, v.imag, q):
        if abs(key) > 1e-13:
            if key < 0.0:
                u, p, v, q = -u, -p, -v, -q
            break
    return ConicGeneral(u=u, p=p, v=v, q=q)


def conics_equivalent(c1: ConicGeneral, c2: ConicGeneral, tol: float = 1e-9) -> bool:
    """True when the conics agree up to a real scalar within tol."""
    n1 = normalize_conic(c1)
    n2 = normalize_conic(c2)
    diff = max(
        abs(n1.u - n2.u),
        abs(n1.p - n2.p),
        abs(n1.v - n2.v),
        abs(n1.q - n2.q),
    )
    return diff <= tol


def ellipse_boundary_points(e: EllipseStandard, n: int) -> np.ndarray:
    """n points tracing the ellipse counterclockwise (exact parametrization)."""
    theta = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    a = e.semi_major
    b = e.semi_minor
    axis = e.f2 - e.f1
    rot = axis / abs(axis) if abs(axis) > 0.0 else 1.0 + 0.0j
    return e.center + rot * (a * np.cos(theta) + 1j * b * np.sin(theta))
