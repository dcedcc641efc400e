"""Independent geometric oracles.

Everything here deliberately avoids the closed forms it is used to check:
Poncelet closure is a tangent-chord iteration, the Cayley criterion works
on projective matrices, envelopes are built from finite line families, and
conic/curve fits are plain least squares.  Closed-form results elsewhere
in the package are validated against these routines in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .conics import (
    ConicClass,
    ConicGeneral,
    EllipseStandard,
    RealLine,
    classify_conic,
    ellipse_boundary_points,
    evaluate_conic,
    general_to_standard,
    intersect_lines,
    line_through,
)
from .errors import (
    NoTangentError,
    NotOnConicError,
    PonceletKitError,
    RankDeficientError,
    SingularInnerError,
    ValidationError,
)

__all__ = [
    "conic_to_matrix",
    "matrix_to_conic",
    "quadratic_form_value",
    "cayley_c2_residual",
    "poncelet_closure",
    "chapple_check",
    "envelope_points_numeric",
    "ChordEnvelope",
    "chord_envelope_samples",
    "fit_conic",
    "fit_algebraic_curve",
]


def conic_to_matrix(c: ConicGeneral) -> np.ndarray:
    """Symmetric 3x3 matrix M with (x, y, 1) M (x, y, 1)^T = evaluate_conic(c, x+iy).

    Writing z = x + iy gives a11 = p + 2 Re(u), a22 = p - 2 Re(u),
    a12 = 2 Im(u), a13 = Re(v), a23 = Im(v), a33 = q.
    """
    u, p, v, q = c.u, c.p, c.v, c.q
    return np.array(
        [
            [p + 2.0 * u.real, 2.0 * u.imag, v.real],
            [2.0 * u.imag, p - 2.0 * u.real, v.imag],
            [v.real, v.imag, q],
        ]
    )


def matrix_to_conic(m: np.ndarray) -> ConicGeneral:
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3) or np.max(np.abs(m - m.T)) > 1e-10 * max(1.0, np.max(np.abs(m))):
        raise ValidationError("need a symmetric 3x3 matrix")
    u = complex((m[0, 0] - m[1, 1]) / 4.0, m[0, 1] / 2.0)
    p = (m[0, 0] + m[1, 1]) / 2.0
    v = complex(m[0, 2], m[1, 2])
    return ConicGeneral(u=u, p=p, v=v, q=m[2, 2])


def quadratic_form_value(m: np.ndarray, z: complex) -> float:
    x = np.array([z.real, z.imag, 1.0])
    return float(x @ m @ x)


def _mixed_det_coeffs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Coefficients (f0..f3) of det(s a + b) as an exact cubic in s.

    f_k sums the determinants with the columns of a substituted into b on
    every k-subset of column indices; no numerical differentiation.
    """
    f = np.zeros(4)
    for k in range(4):
        for cols in combinations(range(3), k):
            m = b.copy()
            for c in cols:
                m[:, c] = a[:, c]
            f[k] += np.linalg.det(m)
    return f


def cayley_c2_residual(outer, inner) -> float:
    """Triangle-interscription test via the series sqrt(det(sA + B)) = sum c_n s^n.

    A and B are the projective matrices of the outer and inner conics
    (ConicGeneral inputs are converted).  c2 = 0 is equivalent to
    -(F')^2 + 2 F F'' = 0 at s = 0 for F(s) = det(sA + B); the returned
    value is (-f1^2 + 4 f0 f2)/f0^2 with f_n the exact cubic coefficients.
    Both matrices are Frobenius-normalized first, so the residual is
    invariant under rescaling of either conic.
    """
    a = conic_to_matrix(outer) if isinstance(outer, ConicGeneral) else np.asarray(outer, float)
    b = conic_to_matrix(inner) if isinstance(inner, ConicGeneral) else np.asarray(inner, float)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    f = _mixed_det_coeffs(a, b)
    if abs(f[0]) < 1e-12:
        raise SingularInnerError("det of inner matrix vanishes; sqrt series undefined")
    return float((-f[1] ** 2 + 4.0 * f[0] * f[2]) / f[0] ** 2)


def _tangent_next_vertices(outer_m, inner_m, p: complex):
    """Both tangent lines from p to the inner conic, each intersected again
    with the outer conic; returns the two (direction, next_vertex) pairs."""
    pv = np.array([p.real, p.imag, 1.0])
    mp = inner_m @ pv
    g = float(pv @ mp)
    aa = inner_m[0, 0]
    bb = inner_m[0, 1]
    cc = inner_m[1, 1]
    qa = mp[0] ** 2 - aa * g
    qb = mp[0] * mp[1] - bb * g
    qc = mp[1] ** 2 - cc * g
    # qa c^2 + 2 qb c s + qc s^2 = 0 for the tangent directions (c, s)
    disc = qb * qb - qa * qc
    if disc < 0.0:
        raise NoTangentError("vertex lies inside the inner conic")
    sq = math.sqrt(disc)
    dirs = []
    if abs(qa) >= abs(qc):
        for sgn in (1.0, -1.0):
            s = qa
            c = -qb + sgn * sq
            dirs.append(complex(c, s))
    else:
        for sgn in (1.0, -1.0):
            c = qc
            s = -qb + sgn * sq
            dirs.append(complex(c, s))
    out = []
    for d in dirs:
        if abs(d) == 0.0:
            continue
        d = d / abs(d)
        # outer restricted to p + tau d: quadratic alpha tau^2 + beta tau + gamma
        dv = np.array([d.real, d.imag, 0.0])
        alpha = float(dv @ outer_m @ dv)
        beta = 2.0 * float(dv @ outer_m @ pv)
        gamma = float(pv @ outer_m @ pv)
        if abs(alpha) < 1e-14:
            continue
        tau2 = -beta / alpha
        if tau2 != 0.0:
            tau1 = (gamma / alpha) / tau2
            tau2 = -beta / alpha - tau1
        out.append((d, p + tau2 * d))
    if not out:
        raise NoTangentError("no transversal tangent line meets the outer conic again")
    return out


def _inner_reference(inner: ConicGeneral) -> complex:
    e = general_to_standard(inner)
    return e.center


def poncelet_closure(outer: ConicGeneral, inner: ConicGeneral, z0: complex, n: int = 3) -> float:
    """Tangent-chord iteration: inscribe in ``outer`` while circumscribing
    ``inner``, starting at z0 on the outer conic; returns |z_n - z0|.

    The first step turns counterclockwise around the inner conic; afterwards
    each step leaves the vertex along the tangent line that is not the
    incoming chord.  Vertices are never projected back onto either conic, so
    the return distance honestly accumulates any failure to close.
    """
    z0 = complex(z0)
    if n < 3:
        raise ValidationError("need n >= 3 sides")
    scale = outer.scale() * max(1.0, abs(z0)) ** 2
    if abs(evaluate_conic(outer, z0)) > 1e-8 * scale:
        raise NotOnConicError("starting vertex is not on the outer conic")
    ic = _inner_reference(inner)
    ref_sign = math.copysign(1.0, evaluate_conic(outer, ic))
    for w in ellipse_boundary_points(general_to_standard(inner), 64):
        if math.copysign(1.0, evaluate_conic(outer, complex(w))) != ref_sign:
            raise NoTangentError("inner conic is not strictly inside the outer conic")

    outer_m = conic_to_matrix(outer)
    inner_m = conic_to_matrix(inner)
    z = z0
    d_in = None
    for _ in range(n):
        cands = _tangent_next_vertices(outer_m, inner_m, z)
        if d_in is None:
            best = None
            for d, nxt in cands:
                if ((np.conj(z - ic)) * (nxt - z)).imag > 0.0:
                    best = (d, nxt)
                    break
            if best is None:
                best = cands[0]
        else:
            # drop the candidate retracing the incoming chord
            best = max(cands, key=lambda c: abs((np.conj(d_in) * c[0]).imag))
        d, z_next = best
        d_in = (z_next - z) / abs(z_next - z) if z_next != z else d
        z = z_next
    return abs(z - z0)


def chapple_check(c: complex, r: float) -> float:
    """Interscribed-triangle residual | |c|^2 - (1 - 2r) | for a circle of
    center c, radius r inside the unit circle."""
    c = complex(c)
    r = float(r)
    if abs(c) + r >= 1.0:
        raise ValidationError("circle must lie strictly inside the unit circle")
    return abs(abs(c) ** 2 - (1.0 - 2.0 * r))


def envelope_points_numeric(lines, closed: bool = True) -> np.ndarray:
    """Discrete envelope: intersection of each consecutive pair of lines.

    Converges to the true envelope at second order in the family spacing.
    Parallel consecutive pairs are skipped.
    """
    lines = list(lines)
    if len(lines) < 3:
        raise ValidationError("need at least 3 lines")
    pairs = list(zip(lines, lines[1:]))
    if closed:
        pairs.append((lines[-1], lines[0]))
    pts = []
    for l1, l2 in pairs:
        try:
            pts.append(intersect_lines(l1, l2))
        except ValidationError:
            continue
    return np.asarray(pts, dtype=complex)


@dataclass(frozen=True, eq=False)
class ChordEnvelope:
    """Pushed preimage chords of a boundary-value sweep and the discrete
    envelope of the family.  chords has one (z1, z2) endpoint row per kept
    chord; chord_args and point_args carry the sweep angle psi."""

    chords: np.ndarray
    chord_args: np.ndarray
    points: np.ndarray
    point_args: np.ndarray


def chord_envelope_samples(push, b, n: int) -> ChordEnvelope:
    """Sweep lam = e^{i psi} over a half-offset grid, push the preimage
    chords of a Blaschke product through a boundary map, and intersect
    adjacent chords.

    The half-offset grid psi = 2 pi (r + 1/2)/n avoids lam = B(-1) hitting
    the grid head-on for products with real coefficients, and keeps the
    conjugation symmetry of such products exact in the sample set.
    Angle-sorted preimage labels rotate one slot somewhere during the
    sweep; neighbor pairs spanning such a jump would intersect unrelated
    chords, so pairs with a discontinuous endpoint are dropped.  Chords
    pushed to far-field values (maps with a boundary pole) are dropped too.
    """
    from .blaschke import preimage_rows

    if n < 8:
        raise ValidationError("need at least 8 boundary samples")
    args = 2.0 * np.pi * (np.arange(n) + 0.5) / n
    rows = preimage_rows(b, np.exp(1j * args))
    d = rows.shape[1]
    zs = np.zeros_like(rows)
    good = np.zeros(rows.shape, dtype=bool)
    for r in range(n):
        for col in range(d):
            try:
                z = complex(push(rows[r, col]))
            except PonceletKitError:
                continue
            if np.isfinite(z) and abs(z) < 1e8:
                zs[r, col] = z
                good[r, col] = True
    chords, chord_args, pts, pt_args = [], [], [], []
    for i in range(d - 1):
        for j in range(i + 1, d):
            lines = {}
            for r in range(n):
                if not (good[r, i] and good[r, j]):
                    continue
                try:
                    lines[r] = line_through(zs[r, i], zs[r, j])
                except ValidationError:
                    continue
                chords.append((zs[r, i], zs[r, j]))
                chord_args.append(args[r])
            for r in range(n - 1):
                if r not in lines or r + 1 not in lines:
                    continue
                if (
                    abs(rows[r + 1, i] - rows[r, i]) > 0.2
                    or abs(rows[r + 1, j] - rows[r, j]) > 0.2
                ):
                    continue
                try:
                    pts.append(intersect_lines(lines[r], lines[r + 1]))
                except ValidationError:
                    continue
                pt_args.append(args[r])
    return ChordEnvelope(
        chords=np.asarray(chords, dtype=complex).reshape(-1, 2),
        chord_args=np.asarray(chord_args, dtype=float),
        points=np.asarray(pts, dtype=complex),
        point_args=np.asarray(pt_args, dtype=float),
    )


def _normalized_design(points, columns_fn):
    pts = np.asarray(points, dtype=complex).ravel()
    ctr = pts.mean()
    scale = math.sqrt(float(np.mean(np.abs(pts - ctr) ** 2)))
    if scale == 0.0:
        raise RankDeficientError("all points coincide")
    x = (pts.real - ctr.real) / scale
    y = (pts.imag - ctr.imag) / scale
    return columns_fn(x, y), ctr, scale


def fit_conic(points):
    """Least-squares conic through a point cloud.

    Points are centered and isotropically scaled to unit RMS radius, the
    6-column quadric design matrix is factored by SVD, and the unit-norm
    right singular vector of the smallest singular value is the fit.
    Returns (ConicGeneral in original coordinates, per-point residuals
    |design @ theta| in normalized coordinates).
    """
    pts = np.asarray(points, dtype=complex).ravel()
    if pts.size < 6:
        raise RankDeficientError("need at least 6 points for a conic fit")

    def cols(x, y):
        return np.column_stack([x * x, x * y, y * y, x, y, np.ones_like(x)])

    d, ctr, scale = _normalized_design(pts, cols)
    _, sing, vt = np.linalg.svd(d, full_matrices=False)
    if sing[-2] < 1e-10 * sing[0]:
        raise RankDeficientError("conic fit is ambiguous (degenerate point set)")
    theta = vt[-1]
    resid = np.abs(d @ theta)
    a2, a11, c2, b1, b2, c0 = theta
    mprime = np.array(
        [
            [a2, a11 / 2.0, b1 / 2.0],
            [a11 / 2.0, c2, b2 / 2.0],
            [b1 / 2.0, b2 / 2.0, c0],
        ]
    )
    t = np.array(
        [
            [1.0 / scale, 0.0, -ctr.real / scale],
            [0.0, 1.0 / scale, -ctr.imag / scale],
            [0.0, 0.0, 1.0],
        ]
    )
    m = t.T @ mprime @ t
    return matrix_to_conic(m), resid


def _monomial_columns(degree):
    def cols(x, y):
        out = []
        for total in range(degree + 1):
            for i in range(total, -1, -1):
                out.append(x**i * y ** (total - i))
        return np.column_stack(out)

    return cols


def fit_algebraic_curve(points, degree: int):
    """Unit-norm least-squares bivariate polynomial of given total degree.

    Returns (coefficients in normalized coordinates, per-point residuals).
    The coefficient order is constant term first, then each total degree
    block with descending x-power.  Used for the degree-at-most-(d-1)
    bound on exterior curves, where only the residual magnitude matters.
    """
    pts = np.asarray(points, dtype=complex).ravel()
    ncoef = (degree + 1) * (degree + 2) // 2
    if degree < 1:
        raise ValidationError("degree must be >= 1")
    if pts.size < ncoef:
        raise RankDeficientError(f"need at least {ncoef} points for degree {degree}")
    d, _, _ = _normalized_design(pts, _monomial_columns(degree))
    _, _, vt = np.linalg.svd(d, full_matrices=False)
    theta = vt[-1]
    return theta, np.abs(d @ theta)
