"""Closure iteration, series residual, discrete envelopes, and fits."""

import numpy as np
import pytest

from poncelet_kit.blaschke import BlaschkeProduct, interior_curve_disk, preimages
from poncelet_kit.conics import (
    ConicGeneral,
    EllipseStandard,
    conics_equivalent,
    ellipse_boundary_points,
    evaluate_conic,
    general_to_standard,
    line_through,
    standard_to_general,
    tangent_line_at,
)
from poncelet_kit.errors import (
    NoTangentError,
    NotOnConicError,
    RankDeficientError,
    SingularInnerError,
    ValidationError,
)
from poncelet_kit.verify import (
    cayley_c2_residual,
    chapple_check,
    conic_to_matrix,
    envelope_points_numeric,
    fit_algebraic_curve,
    fit_conic,
    matrix_to_conic,
    poncelet_closure,
    quadratic_form_value,
)

UNIT_CIRCLE = ConicGeneral(u=0.0, p=1.0, v=0.0, q=-1.0)

FIG_A = 0.2 + 0.17j
FIG_B = -0.42 - 0.17j


def ellipse_Et(t):
    return ConicGeneral(u=t * t, p=-(1.0 + t**4), v=0.0, q=(1.0 - t * t) ** 2)


def circle(center, radius):
    center = complex(center)
    return ConicGeneral(u=0.0, p=1.0, v=-center, q=abs(center) ** 2 - radius**2)


def test_matrix_matches_evaluation(rng):
    cases = [
        ellipse_Et(0.5),
        ConicGeneral(u=0.3 - 0.2j, p=1.7, v=0.4 + 1.1j, q=-0.9),
        circle(0.3 + 0.2j, 0.7),
    ]
    for c in cases:
        m = conic_to_matrix(c)
        assert np.allclose(m, m.T)
        for _ in range(20):
            z = complex(rng.normal(), rng.normal())
            assert abs(quadratic_form_value(m, z) - evaluate_conic(c, z)) < 1e-12 * max(
                1.0, abs(z) ** 2
            )


def test_Et_matrix_is_diagonal():
    t = 0.7
    m = conic_to_matrix(ellipse_Et(t))
    ref = -np.diag([(t * t - 1.0) ** 2, (t * t + 1.0) ** 2, -((t * t - 1.0) ** 2)])
    assert np.allclose(m, ref, atol=1e-14)


def test_matrix_roundtrip(rng):
    for _ in range(10):
        c = ConicGeneral(
            u=complex(rng.normal(), rng.normal()),
            p=float(rng.normal()),
            v=complex(rng.normal(), rng.normal()),
            q=float(rng.normal()),
        )
        c2 = matrix_to_conic(conic_to_matrix(c))
        assert abs(c2.u - c.u) < 1e-14
        assert abs(c2.p - c.p) < 1e-14
        assert abs(c2.v - c.v) < 1e-14
        assert abs(c2.q - c.q) < 1e-14


@pytest.mark.parametrize("c,r", [(0.0, 0.5), (0.3, 0.455), (0.1 + 0.2j, 0.475)])
def test_cayley_residual_chapple_circles(c, r):
    # |c|^2 = 1 - 2r puts the pair in triangle position
    c = complex(c)
    assert abs(abs(c) ** 2 - (1.0 - 2.0 * r)) < 1e-12
    assert abs(cayley_c2_residual(UNIT_CIRCLE, circle(c, r))) < 1e-12


def test_cayley_residual_interior_curve():
    inner = interior_curve_disk(BlaschkeProduct(zeros=(FIG_A, FIG_B)))
    assert abs(cayley_c2_residual(UNIT_CIRCLE, inner)) < 1e-7

    e = general_to_standard(inner)
    inflated = standard_to_general(EllipseStandard(f1=e.f1, f2=e.f2, r=1.1 * e.r))
    assert abs(cayley_c2_residual(UNIT_CIRCLE, inflated)) > 1e-3


def rescaled(c, s):
    return ConicGeneral(u=s * c.u, p=s * c.p, v=s * c.v, q=s * c.q)


def test_cayley_residual_scale_invariance():
    inner = circle(0.3, 0.455)
    r0 = cayley_c2_residual(rescaled(UNIT_CIRCLE, -7.0), rescaled(inner, 0.01))
    r1 = cayley_c2_residual(UNIT_CIRCLE, inner)
    assert abs(r0 - r1) < 1e-12


def test_cayley_singular_inner():
    with pytest.raises(SingularInnerError):
        cayley_c2_residual(UNIT_CIRCLE, circle(0.2, 0.0))


@pytest.mark.parametrize("theta", [0.0, 0.7, 2.0, 4.1])
def test_closure_concentric_half_circle(theta):
    z0 = np.exp(1j * theta)
    assert poncelet_closure(UNIT_CIRCLE, circle(0.0, 0.5), z0) < 1e-10


def test_closure_offset_chapple_circle(rng):
    inner = circle(0.3, 0.455)
    for _ in range(6):
        z0 = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
        assert poncelet_closure(UNIT_CIRCLE, inner, z0) < 1e-8


def test_closure_detects_wrong_radius():
    # radius off the Chapple relation cannot close for every start
    worst = max(
        poncelet_closure(UNIT_CIRCLE, circle(0.0, 0.55), np.exp(1j * th))
        for th in (0.0, 1.0, 2.5)
    )
    assert worst > 1e-3


def test_closure_input_validation():
    with pytest.raises(NotOnConicError):
        poncelet_closure(UNIT_CIRCLE, circle(0.0, 0.5), 0.5)
    with pytest.raises(ValidationError):
        poncelet_closure(UNIT_CIRCLE, circle(0.0, 0.5), 1.0, n=2)
    with pytest.raises(NoTangentError):
        poncelet_closure(UNIT_CIRCLE, circle(0.6, 0.5), 1j)


def test_chapple_check_values():
    assert chapple_check(0.3, 0.455) < 1e-12
    assert abs(chapple_check(0.0, 0.4) - 0.2) < 1e-12
    with pytest.raises(ValidationError):
        chapple_check(0.6, 0.5)


def envelope_error_circle(n):
    thetas = 2.0 * np.pi * np.arange(n) / n
    lines = [tangent_line_at(UNIT_CIRCLE, np.exp(1j * th)) for th in thetas]
    pts = envelope_points_numeric(lines)
    assert pts.size == n
    return float(np.max(np.abs(np.abs(pts) - 1.0)))


def test_envelope_circle_tangents():
    assert envelope_error_circle(360) < 5e-5


def test_envelope_second_order_convergence():
    ratio = envelope_error_circle(180) / envelope_error_circle(360)
    assert 3.5 < ratio < 4.5


def test_envelope_cubic_chords():
    # chords joining angularly adjacent preimages of w^3 wrap a circle of
    # radius 1/2; after a full sweep the labels rotate by one slot, so the
    # family is open and the wrap pair must not be joined
    b = BlaschkeProduct(zeros=(0.0, 0.0))
    lines = []
    for psi in 2.0 * np.pi * np.arange(720) / 720:
        w = preimages(b, np.exp(1j * psi))
        lines.append(line_through(w[0], w[1]))
    pts = envelope_points_numeric(lines, closed=False)
    assert np.max(np.abs(np.abs(pts) - 0.5)) < 1e-4


def test_envelope_needs_three_lines():
    l0 = line_through(0.0, 1.0)
    with pytest.raises(ValidationError):
        envelope_points_numeric([l0, line_through(0.0, 1j)])


def test_fit_conic_recovers_ellipse():
    t = 0.6
    pts = ellipse_boundary_points(general_to_standard(ellipse_Et(t)), 40)
    fitted, resid = fit_conic(pts)
    assert conics_equivalent(fitted, ellipse_Et(t), tol=1e-9)
    assert np.max(resid) < 1e-12


def test_fit_conic_recovers_circle():
    ref = circle(0.3 + 0.2j, 0.7)
    pts = 0.3 + 0.2j + 0.7 * np.exp(1j * np.linspace(0.0, 2.0 * np.pi, 25, endpoint=False))
    fitted, resid = fit_conic(pts)
    assert conics_equivalent(fitted, ref, tol=1e-9)
    assert np.max(resid) < 1e-12


def test_fit_conic_rank_deficient_inputs(rng):
    with pytest.raises(RankDeficientError):
        fit_conic(np.exp(1j * np.arange(5)))
    with pytest.raises(RankDeficientError):
        fit_conic(np.full(12, 0.3 + 0.4j))
    with pytest.raises(RankDeficientError):
        fit_conic(np.linspace(-1.0, 1.0, 20) + 0.0j)  # collinear


def test_fit_algebraic_curve_degrees():
    pts = np.exp(1j * np.linspace(0.0, 2.0 * np.pi, 60, endpoint=False))
    _, r2 = fit_algebraic_curve(pts, 2)
    assert np.max(r2) < 1e-12
    _, r1 = fit_algebraic_curve(pts, 1)
    assert np.max(r1) > 1e-2
    # degree 3 contains the circle's polynomial, so the residual stays tiny
    _, r3 = fit_algebraic_curve(pts, 3)
    assert np.max(r3) < 1e-10


def test_fit_algebraic_curve_line():
    pts = np.linspace(-2.0, 2.0, 30) * (1.0 + 0.5j)
    _, resid = fit_algebraic_curve(pts, 1)
    assert np.max(resid) < 1e-12


def test_fit_algebraic_curve_validation():
    pts = np.exp(1j * np.arange(5))
    with pytest.raises(ValidationError):
        fit_algebraic_curve(pts, 0)
    with pytest.raises(RankDeficientError):
        fit_algebraic_curve(pts, 2)
