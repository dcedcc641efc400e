"""Parabola-exterior transport: psi maps, interior curve, exterior cloud."""

import numpy as np
import pytest

from poncelet_kit.blaschke import BlaschkeProduct, interior_curve_disk
from poncelet_kit.conics import (
    ConicClass,
    classify_conic,
    evaluate_conic,
    line_through,
    tangency_residual,
    tangent_line_at,
)
from poncelet_kit.errors import (
    InsideParabolaError,
    NotOnBoundaryError,
    PoleInputError,
    ValidationError,
)
from poncelet_kit.parabolic import (
    ParabolicBlaschkeLike,
    blaschke_like_apply,
    boundary_transform,
    exterior_curve_samples_parabolic,
    interior_curve_parabolic,
    parabola_Pt,
    preimages_on_Pt,
    psi_forward,
    psi_inverse,
    psi_second_branch,
)
from poncelet_kit.verify import fit_algebraic_curve, poncelet_closure

FIG_A = 0.2 + 0.17j
FIG_B = -0.42 - 0.17j
FIG_T = 0.7


def random_zero(rng, rmax=0.9):
    return rmax * np.sqrt(rng.uniform()) * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))


def boundary_point(t, theta):
    return psi_forward(t, np.exp(1j * theta))


def fig_map():
    return ParabolicBlaschkeLike(b=BlaschkeProduct(zeros=(FIG_A, FIG_B)), t=FIG_T)


@pytest.mark.parametrize("t", [0.2, 0.7, 1.3])
def test_psi_special_values(t):
    assert abs(psi_forward(t, 0.0) - (1.0 + 2.0 * t)) < 1e-14
    assert abs(psi_forward(t, 1.0)) < 1e-14
    z = psi_forward(t, 1j)
    assert abs(z - (-1.0 - 2.0j * t)) < 1e-14
    assert abs((z - np.conj(z)) ** 2 - 8.0 * t * t * (z + np.conj(z))) < 1e-12


def test_psi_domain_checks():
    with pytest.raises(PoleInputError):
        psi_forward(0.5, -1.0)
    with pytest.raises(PoleInputError):
        psi_forward(0.5, -1.0 + 1e-12j)
    with pytest.raises(ValidationError):
        psi_forward(0.5, 1.5)
    with pytest.raises(ValidationError):
        psi_forward(-0.2, 0.0)


def test_parabola_class_and_focus():
    for t in (0.3, 0.7):
        pt = parabola_Pt(t)
        assert classify_conic(pt) is ConicClass.PARABOLA
        assert abs(evaluate_conic(pt, 0.0)) < 1e-14
        # focus -t^2, directrix Re z = t^2
        for th in (0.4, 1.7, 2.9):
            z = boundary_point(t, th)
            assert abs(evaluate_conic(pt, z)) < 1e-10 * max(1.0, abs(z)) ** 2
            assert abs(abs(z + t * t) - abs(z.real - t * t)) < 1e-10


def test_boundary_formula_matches_map():
    t = 0.7
    for th in np.linspace(0.1, 2.0 * np.pi - 0.1, 40):
        w = np.exp(1j * th)
        ref = ((1.0 - 2.0 * t) * w + (1.0 + 2.0 * t) * np.conj(w) - 2.0) / (
            w + np.conj(w) + 2.0
        )
        # relative tolerance: the image is unbounded near the pole
        assert abs(psi_forward(t, w) - ref) < 1e-12 * max(1.0, abs(ref))


def test_boundary_transform_values():
    t = 0.6
    assert abs(boundary_transform(t, 1.0)) < 1e-14
    assert abs(boundary_transform(t, 1j) - (-1.0 - 2.0j * t)) < 1e-14
    for th in (0.3, 2.0, 4.4):
        w = np.exp(1j * th)
        assert abs(boundary_transform(t, w) - psi_forward(t, w)) < 1e-12
    with pytest.raises(NotOnBoundaryError):
        boundary_transform(t, 0.5)
    with pytest.raises(PoleInputError):
        boundary_transform(t, -1.0)


def test_psi_roundtrip(rng):
    for t in (0.2, 0.5, 1.1):
        done = 0
        while done < 40:
            w = random_zero(rng, 0.999)
            if abs(w + 1.0) < 0.05:
                continue
            assert abs(psi_inverse(t, psi_forward(t, w)) - w) < 1e-12
            done += 1


def test_psi_inverse_on_boundary():
    t = 0.8
    for th in np.linspace(0.2, 2.0 * np.pi - 0.3, 17):
        w = np.exp(1j * th)
        z = psi_forward(t, w)
        got = psi_inverse(t, z)
        assert abs(got - w) < 1e-9
        zb = np.conj(z)
        ref = (-(z + zb + 2.0) * t + z - zb) / ((z + zb - 2.0) * t)
        assert abs(got - ref) < 1e-12


def test_psi_inverse_inside():
    for t in (0.3, 0.9):
        with pytest.raises(InsideParabolaError):
            psi_inverse(t, -1.0)
        with pytest.raises(InsideParabolaError):
            psi_inverse(t, -t * t)  # focus


@pytest.mark.parametrize("t", [0.2, 0.5, 0.9])
def test_second_branch_avoids_disk(t, rng):
    for _ in range(50):
        w = random_zero(rng, 0.95)
        w2 = psi_second_branch(t, w)
        # same image under the defining formula
        u = (1.0 - w2) / (1.0 + w2)
        val = (u + t) ** 2 - t * t
        ref = psi_forward(t, w)
        assert abs(val - ref) < 1e-9 * max(1.0, abs(ref))
        assert abs(w2) >= 1.0 - 1e-12 or w2.real <= -1.0 + 1e-12
        if t < 0.5:
            assert abs(w2 - 2.0 * t / (1.0 - 2.0 * t)) >= 1.0 / (1.0 - 2.0 * t) - 1e-9
        elif t == 0.5:
            assert w2.real <= -1.0 + 1e-9
        else:
            c = 2.0 * t / (1.0 - 2.0 * t)
            assert abs(w2 - c) <= 1.0 / (2.0 * t - 1.0) + 1e-9


def test_interior_curve_reduces_at_origin():
    for t in (0.3, 0.7, 1.2):
        c = interior_curve_parabolic(0.0, 0.0, t)
        assert abs(c.u - (4.0 - 3.0 * t * t)) < 1e-13
        assert abs(c.p - (-6.0 * t * t - 8.0)) < 1e-13
        assert abs(c.v - (-20.0 * t * t)) < 1e-13
        assert abs(c.q - (-12.0 * t * t)) < 1e-13


def test_interior_curve_vertex_point():
    # z = -1/3, the image of w = 1/2 on the interior circle |w| = 1/2,
    # satisfies the a=b=0 curve for every t
    for t in np.linspace(0.05, 1.6, 10):
        c = interior_curve_parabolic(0.0, 0.0, t)
        assert abs(evaluate_conic(c, -1.0 / 3.0)) < 1e-12


def test_interior_tangency_fig2():
    m = fig_map()
    conic = interior_curve_parabolic(FIG_A, FIG_B, FIG_T)
    worst = 0.0
    for th in (2.0 * np.pi / 60) * (np.arange(60) + 0.5):  # grid avoids the pole
        zs = preimages_on_Pt(m, boundary_point(FIG_T, th))
        for i in range(3):
            for j in range(i + 1, 3):
                worst = max(worst, abs(tangency_residual(line_through(zs[i], zs[j]), conic)))
    assert worst < 1e-8


def test_relation_to_disk_curve(rng):
    for _ in range(10):
        a, b = random_zero(rng), random_zero(rng)
        t = rng.uniform(0.1, 1.4)
        gi = interior_curve_disk(BlaschkeProduct(zeros=(a, b)))
        gpsi = interior_curve_parabolic(a, b, t)
        for _ in range(20):
            z = boundary_point(t, rng.uniform(0.1, 2.0 * np.pi - 0.1))
            zb = np.conj(z)
            w = (-(z + zb + 2.0) * t + z - zb) / ((z + zb - 2.0) * t)
            lhs = t * t * (z + zb - 2.0).real ** 2 * evaluate_conic(gi, w)
            rhs = evaluate_conic(gpsi, z)
            assert abs(lhs - rhs) < 1e-8 * max(1.0, abs(rhs))


def test_ellipse_positivity_closed_form(rng):
    for _ in range(100):
        a, b = random_zero(rng), random_zero(rng)
        t = rng.uniform(0.05, 1.5)
        c = interior_curve_parabolic(a, b, t)
        lhs = c.p**2 - 4.0 * abs(c.u) ** 2
        assert lhs > 0.0
        rhs = (
            -64.0
            * (1.0 - abs(b) ** 2)
            * (1.0 - abs(a) ** 2)
            * abs(1.0 - a * np.conj(b)) ** 2
            * t
            * t
            * ((1.0 - abs(b) ** 2) * (1.0 - abs(a) ** 2) - 4.0 * (a.real + 1.0) * (b.real + 1.0))
        )
        assert abs(lhs - rhs) < 1e-9 * abs(rhs)


def test_preimages_on_Pt_basic():
    m = fig_map()
    for th in (0.4, 1.9, 5.0):
        lam = boundary_point(FIG_T, th)
        zs = preimages_on_Pt(m, lam)
        assert len(zs) == 3
        pt = parabola_Pt(FIG_T)
        for z in zs:
            assert abs(evaluate_conic(pt, z)) < 1e-9 * max(1.0, abs(z)) ** 2
            assert abs(blaschke_like_apply(m, z) - lam) < 1e-8 * max(1.0, abs(lam))
    with pytest.raises(NotOnBoundaryError):
        preimages_on_Pt(m, 1.0 + 1.0j)


def test_exterior_samples_sit_on_tangent_lines():
    m = ParabolicBlaschkeLike(b=BlaschkeProduct(zeros=(FIG_A, FIG_B)), t=0.6)
    s = exterior_curve_samples_parabolic(m, n=24)
    pt = parabola_Pt(0.6)
    # reconstruct the tangent lines independently and test incidence
    from poncelet_kit.blaschke import preimage_rows

    rows = preimage_rows(m.b, np.exp(1j * s.arg_lambda[::3]))
    idx = 0
    for r in range(rows.shape[0]):
        zs = [psi_forward(0.6, w) for w in rows[r]]
        pairs = [(0, 1), (0, 2), (1, 2)]
        for i, j in pairs:
            z0 = s.points[idx]
            idx += 1
            for k in (i, j):
                line = tangent_line_at(pt, zs[k])
                assert abs(line.evaluate(z0)) < 1e-9 * max(1.0, abs(z0)) ** 2


def test_exterior_samples_fit_degree_two():
    m = ParabolicBlaschkeLike(b=BlaschkeProduct(zeros=(0.0, 0.0)), t=0.7)
    s = exterior_curve_samples_parabolic(m, n=240)
    _, resid = fit_algebraic_curve(s.points, 2)
    assert np.max(resid) < 1e-6


def test_exterior_samples_degree_three(rng):
    zeros = (0.7, -0.5 + 0.3j, 0.2 - 0.6j)
    m = ParabolicBlaschkeLike(b=BlaschkeProduct(zeros=zeros), t=0.55)
    s = exterior_curve_samples_parabolic(m, n=200)
    _, r3 = fit_algebraic_curve(s.points, 3)
    _, r2 = fit_algebraic_curve(s.points, 2)
    assert np.max(r3) < 1e-6
    assert np.max(r2) > 1e-2


def test_closure_on_parabola(rng):
    outer = parabola_Pt(FIG_T)
    inner = interior_curve_parabolic(FIG_A, FIG_B, FIG_T)
    for _ in range(5):
        z0 = boundary_point(FIG_T, rng.uniform(0.3, 2.0 * np.pi - 0.3))
        assert poncelet_closure(outer, inner, z0) < 1e-7
