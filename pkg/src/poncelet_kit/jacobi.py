"""Conformal map from the disk onto the interior of an ellipse via Jacobi
elliptic integrals, and the envelope experiment showing the transported
interior curve is not a conic.

The chain is u = (w-1)/(w+1), v = c sn^{-1}(u, k), z = sqrt(1-p^2) cosh(L+v)
with L = atanh(p), where k and c solve L = pi K(k)/K'(k) = c K(k).  The upper
boundary arc of the disk lands on the upper half of the ellipse with foci
+-sqrt(1-p^2) and focal sum 2 (semi-axes 1 and p); Schwarz reflection
extends the map to the full disk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import ellipkinc

from .blaschke import BlaschkeProduct
from .errors import (
    BranchPointInputError,
    ModulusOutOfRangeError,
    NoConvergenceError,
    ValidationError,
)
from .verify import chord_envelope_samples, fit_conic

__all__ = [
    "InteriorMapParam",
    "ExperimentReport",
    "elliptic_K",
    "elliptic_Kprime",
    "solve_params",
    "inverse_sn",
    "gamma_map",
    "gamma_extended",
    "non_ellipse_experiment",
]


def _agm(a: float, b: float) -> float:
    # tolerance sits above one ulp so a 1-ulp gap cannot cycle forever
    for _ in range(80):
        if abs(a - b) <= 4e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def elliptic_K(k: float) -> float:
    """Complete elliptic integral of the first kind, by the arithmetic
    geometric mean: K(k) = pi / (2 agm(1, k'))."""
    k = float(k)
    if not 0.0 <= k < 1.0:
        raise ModulusOutOfRangeError(f"need 0 <= k < 1, got {k}")
    return math.pi / (2.0 * _agm(1.0, math.sqrt((1.0 - k) * (1.0 + k))))


def elliptic_Kprime(k: float) -> float:
    """Complementary integral K'(k) = K(sqrt(1-k^2)) = pi / (2 agm(1, k)).

    The agm form stays accurate for tiny k, where forming sqrt(1-k^2)
    explicitly would round to 1.
    """
    k = float(k)
    if not 0.0 < k < 1.0:
        raise ModulusOutOfRangeError(f"need 0 < k < 1, got {k}")
    return math.pi / (2.0 * _agm(1.0, k))


@dataclass(frozen=True)
class InteriorMapParam:
    """Ellipse-interior map parameters: the defining relations
    atanh(p) = pi K(k)/K'(k) = c K(k) are validated on construction."""

    p: float
    k: float
    c: float

    def __post_init__(self) -> None:
        if not 0.0 < self.p < 1.0:
            raise ValidationError(f"need 0 < p < 1, got {self.p}")
        if not 0.0 < self.k < 1.0:
            raise ValidationError(f"need 0 < k < 1, got {self.k}")
        ell = math.atanh(self.p)
        kk = elliptic_K(self.k)
        if abs(math.pi * kk / elliptic_Kprime(self.k) - ell) > 1e-10 * max(1.0, ell):
            raise ValidationError("p and k violate atanh(p) = pi K/K'")
        if abs(self.c * kk - ell) > 1e-10 * max(1.0, ell):
            raise ValidationError("c violates atanh(p) = c K(k)")

    @property
    def L(self) -> float:
        return math.atanh(self.p)

    @property
    def focus(self) -> float:
        return math.sqrt((1.0 - self.p) * (1.0 + self.p))


def solve_params(p: float) -> InteriorMapParam:
    """Solve atanh(p) = pi K(k)/K'(k) for k by bisection (the ratio is
    strictly increasing in k), then set c = atanh(p)/K(k)."""
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValidationError(f"need 0 < p < 1, got {p}")
    ell = math.atanh(p)

    def ratio(s: float) -> float:
        return math.pi * elliptic_K(math.exp(s)) / elliptic_Kprime(math.exp(s))

    # bisect in log k so tiny moduli (p near 0) stay resolvable
    lo, hi = math.log(1e-300), math.log(1.0 - 1e-12)
    if not ratio(lo) <= ell <= ratio(hi):
        raise NoConvergenceError(
            f"target {ell} outside bracket [{ratio(lo)}, {ratio(hi)}] for k in (1e-300, 1)"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if ratio(mid) < ell:
            lo = mid
        else:
            hi = mid
    k = math.exp(0.5 * (lo + hi))
    if abs(math.pi * elliptic_K(k) / elliptic_Kprime(k) - ell) > 1e-10 * max(1.0, ell):
        raise NoConvergenceError(f"bisection stalled in bracket [{math.exp(lo)}, {math.exp(hi)}]")
    return InteriorMapParam(p=p, k=k, c=ell / elliptic_K(k))


def _branch_points(k: float):
    pts = [1.0, -1.0]
    if k > 0.0:
        pts += [1.0 / k, -1.0 / k]
    return pts


def inverse_sn(u: complex, k: float) -> complex:
    """sn^{-1}(u, k) = integral of 1/sqrt((1-w^2)(1-k^2 w^2)) from 0 to u.

    The branch is fixed by the principal value of each square-root factor
    along the straight path, which is analytic in the open upper half-plane
    and continuous from above on the real axis; values fill the rectangle
    [-K, K] x [0, K'].  Real and purely imaginary arguments use closed
    forms in incomplete elliptic integrals; other arguments are integrated
    numerically.  Arguments in the lower half-plane are reflected through
    conjugation (continuity from below there).
    """
    u = complex(u)
    k = float(k)
    if not 0.0 <= k < 1.0:
        raise ModulusOutOfRangeError(f"need 0 <= k < 1, got {k}")
    for bp in _branch_points(k):
        if abs(u - bp) < 1e-12:
            raise BranchPointInputError(f"sn^-1 has a branch point at {bp}")
    if u.imag < 0.0:
        return np.conj(inverse_sn(np.conj(u), k))
    kp2 = (1.0 - k) * (1.0 + k)  # complementary modulus squared
    if u.imag == 0.0:
        x = u.real
        sgn = 1.0 if x >= 0.0 else -1.0
        ax = abs(x)
        if ax < 1.0:
            return complex(sgn * ellipkinc(math.asin(ax), k * k))
        big = elliptic_K(k)
        if k == 0.0 or ax < 1.0 / k:
            th = math.asin(math.sqrt(1.0 - 1.0 / (ax * ax)) / math.sqrt(kp2))
            return complex(sgn * big, ellipkinc(th, kp2))
        th = math.asin(1.0 / (k * ax))
        return complex(sgn * ellipkinc(th, k * k), elliptic_Kprime(k))
    if u.real == 0.0:
        return 1j * ellipkinc(math.atan(u.imag), kp2)

    def integrand(s: float) -> complex:
        w = s * u
        den = np.sqrt(1.0 - w) * np.sqrt(1.0 + w)
        if k > 0.0:
            den = den * np.sqrt(1.0 - k * w) * np.sqrt(1.0 + k * w)
        return u / den

    bps = set()
    for bp in _branch_points(k):
        # nearest approach of the path to each branch point
        s = (u * bp).real / abs(u) ** 2
        if 0.0 < s < 1.0:
            bps.add(s)
    for r in (1.0, 1.0 / k if k > 0.0 else 0.0):
        if r > 0.0 and 0.0 < r / abs(u) < 1.0:
            bps.add(r / abs(u))
    pts = sorted(bps)
    re = quad(lambda s: integrand(s).real, 0.0, 1.0, points=pts, limit=200,
              epsabs=1e-12, epsrel=1e-12)[0]
    im = quad(lambda s: integrand(s).imag, 0.0, 1.0, points=pts, limit=200,
              epsabs=1e-12, epsrel=1e-12)[0]
    return complex(re, im)


def gamma_map(param: InteriorMapParam, w: complex) -> complex:
    """The conformal map of the closed upper half-disk onto the closed upper
    half of the ellipse interior; the arc of the circle lands on the
    elliptical boundary and the diameter on the real segment [-1, 1].

    w = +-1 map to the ellipse vertices +-1, w = 0 to the right focus, and
    w = -(1-k)/(1+k) to the left focus.
    """
    w = complex(w)
    if abs(w) > 1.0 + 1e-9:
        raise ValidationError("gamma domain is the closed unit disk")
    if w.imag < -1e-12:
        raise ValidationError("gamma takes the upper half-disk; see gamma_extended")
    if abs(w - 1.0) < 1e-13:
        return 1.0 + 0.0j
    if abs(w + 1.0) < 1e-13:
        return -1.0 + 0.0j
    u = (w - 1.0) / (w + 1.0)
    kk = elliptic_K(param.k)
    if abs(u + 1.0) < 1e-12:
        v = -param.c * kk
    elif abs(u + 1.0 / param.k) < 1e-12:
        v = param.c * complex(-kk, elliptic_Kprime(param.k))
    else:
        v = param.c * inverse_sn(u, param.k)
    return param.focus * np.cosh(param.L + v)


def gamma_extended(param: InteriorMapParam, w: complex) -> complex:
    """Schwarz reflection of gamma_map to the full closed disk:
    conj(gamma(conj(w))) below the real axis."""
    w = complex(w)
    if w.imag < 0.0:
        return np.conj(gamma_map(param, np.conj(w)))
    return gamma_map(param, w)


@dataclass(frozen=True, eq=False)
class ExperimentReport:
    verdict: str
    fit_residual_max: float
    fit_residual_mean: float
    n_samples: int
    params: dict
    points: np.ndarray = None
    point_args: np.ndarray = None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "fit_residual_max": self.fit_residual_max,
            "fit_residual_mean": self.fit_residual_mean,
            "n_samples": self.n_samples,
            "params": dict(self.params),
        }


def non_ellipse_experiment(
    param: InteriorMapParam,
    b: BlaschkeProduct,
    n: int = 360,
    control_t: float | None = None,
) -> ExperimentReport:
    """Envelope the transported preimage-chord family and fit a conic.

    With the ellipse-interior map the envelope is not a conic and the
    normalized fit residual stays large; with the affine boundary map of
    the ellipse-exterior transport (control_t set) the same pipeline
    reproduces an exact ellipse and the residual collapses.  The residual
    is measured in the fit's RMS-normalized coordinates, so it is
    invariant under any rescaling of the envelope.
    """
    if b.degree != 3:
        raise ValidationError("experiment is defined for degree-3 products")
    if n < 12:
        raise ValidationError("need n >= 12 boundary samples")
    if control_t is not None:
        from .elliptic import phi_boundary

        def push(w):
            return phi_boundary(control_t, w)

    else:

        def push(w):
            return gamma_extended(param, w)

    env = chord_envelope_samples(push, b, n)
    _, resid = fit_conic(env.points)
    rmax = float(np.max(resid))
    rmean = float(np.mean(resid))
    if rmax > 1e-3:
        verdict = "non-ellipse"
    elif rmax < 1e-6:
        verdict = "ellipse"
    else:
        verdict = "inconclusive"
    params = {"p": param.p, "k": param.k, "c": param.c}
    if control_t is not None:
        params["control_t"] = float(control_t)
    return ExperimentReport(
        verdict=verdict,
        fit_residual_max=rmax,
        fit_residual_mean=rmean,
        n_samples=int(n),
        params=params,
        points=env.points,
        point_args=env.point_args,
    )
