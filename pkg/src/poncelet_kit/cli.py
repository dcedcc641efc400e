"""Batch command line: compute interior/exterior curves, centroid loci,
run verification bundles, and emit JSON/CSV/SVG artifacts.

Subcommands: interior-curve, exterior-curve, centroid-locus, verify,
cayley, jacobi-experiment.  The boundary is chosen with --boundary
(disk, ellipse:T, parabola:T, jacobi:P); --zeros lists the product's
zeros besides the one pinned at the origin, complex numbers written
a+bi with no spaces.  Identical inputs give byte-identical outputs;
SVG files are drawn from the same data that lands in the CSV/JSON.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import traceback

import numpy as np

from .blaschke import (
    BlaschkeProduct,
    GeneralBlaschke,
    canonicalize,
    centroid_circle,
    exterior_curve_samples_disk,
    interior_curve_disk,
    preimages,
)
from .conics import (
    ConicGeneral,
    EllipseStandard,
    ellipse_boundary_points,
    general_to_standard,
    line_through,
    standard_to_general,
    tangency_residual,
)
from .elliptic import (
    EllipticBlaschkeLike,
    cayley_R,
    centroid_locus_elliptic,
    ellipse_Et,
    exterior_curve_samples_elliptic,
    interior_curve_elliptic,
    interior_foci,
    interior_r,
    phi_boundary,
    preimages_on_Et,
    select_inscribed,
)
from .errors import NumericalError, PonceletKitError, ValidationError
from .jacobi import gamma_extended, non_ellipse_experiment, solve_params
from .parabolic import (
    ParabolicBlaschkeLike,
    exterior_curve_samples_parabolic,
    interior_curve_parabolic,
    parabola_Pt,
    preimages_on_Pt,
    psi_forward,
)
from .svg import BOUNDARY_STYLE, CHORD_STYLE, CURVE_STYLE, DOT_STYLE, SvgCanvas
from .verify import (
    cayley_c2_residual,
    chapple_check,
    chord_envelope_samples,
    fit_algebraic_curve,
    fit_conic,
    poncelet_closure,
)

UNIT_CIRCLE = ConicGeneral(u=0.0, p=1.0, v=0.0, q=-1.0)

_DEFAULT_TOLS = {
    "tangency": 1e-8,
    "closure": 1e-7,
    "cayley": 1e-7,
    "centroid": 1e-8,
    "chapple": 1e-12,
}


# ---------------------------------------------------------------- parsing


def _parse_complex(s: str) -> complex:
    try:
        return complex(s.strip().replace("i", "j"))
    except ValueError:
        raise ValidationError(f"cannot parse complex number {s!r}") from None


def _parse_zeros(s):
    if not s:
        raise ValidationError("--zeros is required for this command")
    return tuple(_parse_complex(tok) for tok in s.split(","))


def _parse_boundary(s: str):
    if s == "disk":
        return "disk", None
    for kind in ("ellipse", "parabola", "jacobi"):
        if s.startswith(kind + ":"):
            try:
                return kind, float(s[len(kind) + 1 :])
            except ValueError:
                raise ValidationError(f"bad boundary parameter in {s!r}") from None
    raise ValidationError(f"unknown boundary {s!r}; use disk, ellipse:T, parabola:T, jacobi:P")


def _parse_formats(s: str):
    fmts = {tok for tok in s.split(",") if tok}
    bad = fmts - {"json", "csv", "svg"}
    if bad:
        raise ValidationError(f"unknown output format(s): {sorted(bad)}")
    if "svg" in fmts:
        # the plot is drawn from the emitted data files
        fmts |= {"json", "csv"}
    return fmts


def _parse_tols(items):
    tols = dict(_DEFAULT_TOLS)
    for item in items or []:
        name, eq, val = item.partition("=")
        if not eq or name not in tols:
            raise ValidationError(f"bad --tol {item!r}; known: {sorted(tols)}")
        tols[name] = float(val)
    return tols


def _build_product(zeros, theta: float) -> BlaschkeProduct:
    if theta:
        b, _ = canonicalize(GeneralBlaschke(zeros=(0.0,) + tuple(zeros), theta=theta))
        return b
    return BlaschkeProduct(zeros=tuple(zeros))


# ---------------------------------------------------------------- output


def _cpair(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _jnum(v):
    # strict JSON has no Infinity/NaN token
    v = float(v)
    return v if math.isfinite(v) else None


def _conic_json(c: ConicGeneral) -> dict:
    return {"u": _cpair(c.u), "p": float(c.p), "v": _cpair(c.v), "q": float(c.q)}


def _ellipse_json(e: EllipseStandard) -> dict:
    return {"f1": _cpair(e.f1), "f2": _cpair(e.f2), "r": float(e.r)}


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write(path: str, text: str):
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


def _csv_text(header: str, rows) -> str:
    lines = [header]
    for row in rows:
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def _emit(args, name: str, json_obj, csv_files=(), svg_build=None):
    fmts = _parse_formats(args.format)
    outdir = args.out_dir
    os.makedirs(outdir, exist_ok=True)
    if "json" in fmts:
        _write(os.path.join(outdir, name + ".json"), _dump(json_obj))
    if "csv" in fmts:
        for fname, header, rows in csv_files:
            _write(os.path.join(outdir, fname), _csv_text(header, rows))
    if "svg" in fmts and svg_build is not None:
        _write(os.path.join(outdir, name + ".svg"), svg_build().render())


def _xy(zs):
    return [(z.real, z.imag) for z in np.asarray(zs, dtype=complex).ravel()]


def _boundary_conic(kind, val):
    if kind == "disk":
        return UNIT_CIRCLE
    if kind == "ellipse":
        return ellipse_Et(val)
    if kind == "parabola":
        return parabola_Pt(val)
    return None


def _draw_boundary(canvas: SvgCanvas, kind, val, data):
    if kind == "disk":
        pts = np.exp(2j * np.pi * np.arange(256) / 256)
        canvas.polyline(_xy(pts), closed=True, **BOUNDARY_STYLE)
    elif kind in ("ellipse", "jacobi"):
        if kind == "ellipse":
            f = 2.0 * val / (1.0 + val * val)
        else:
            f = math.sqrt((1.0 - val) * (1.0 + val))
        e = EllipseStandard(f1=-f, f2=f, r=2.0)
        canvas.polyline(_xy(ellipse_boundary_points(e, 256)), closed=True, **BOUNDARY_STYLE)
    else:
        data = np.asarray(data, dtype=complex).ravel()
        ymax = 1.1 * max(1.0, float(np.max(np.abs(data.imag)))) if data.size else 1.0
        ys = np.linspace(-ymax, ymax, 129)
        xs = -(ys * ys) / (4.0 * val * val)
        canvas.polyline(list(zip(xs, ys)), **BOUNDARY_STYLE)


# ---------------------------------------------------------------- commands


def _interior_push(kind, val):
    if kind == "disk":
        return lambda w: w
    if kind == "ellipse":
        return lambda w: phi_boundary(val, w)
    if kind == "parabola":
        return lambda w: psi_forward(val, w)
    par = solve_params(val)
    return lambda w: gamma_extended(par, w)


def cmd_interior_curve(args) -> int:
    kind, val = _parse_boundary(args.boundary)
    tols = _parse_tols(args.tol)
    b = _build_product(_parse_zeros(args.zeros), args.theta)
    env = chord_envelope_samples(_interior_push(kind, val), b, args.samples)

    conic = ellipse = circle = None
    tangency_max = None
    if b.degree == 3 and kind != "jacobi":
        za, zb = b.zeros
        if kind == "disk":
            conic = interior_curve_disk(b)
        elif kind == "ellipse":
            conic = interior_curve_elliptic(za, zb, val)
        else:
            conic = interior_curve_parabolic(za, zb, val)
        tangency_max = max(
            tangency_residual(line_through(z1, z2), conic) for z1, z2 in env.chords
        )
        ellipse = general_to_standard(conic)
        if abs(ellipse.f1 - ellipse.f2) < 1e-12:
            circle = {"center": _cpair(ellipse.f1), "radius": float(ellipse.r) / 2.0}

    obj = {
        "boundary": {"kind": kind, "param": val},
        "zeros": [_cpair(z) for z in b.zeros],
        "samples": int(args.samples),
        "conic": None if conic is None else _conic_json(conic),
        "ellipse": None if ellipse is None else _ellipse_json(ellipse),
        "circle": circle,
        "envelope_points": int(env.points.size),
        "checks": None
        if tangency_max is None
        else {
            "tangency": {
                "residual": float(tangency_max),
                "tol": tols["tangency"],
                "verdict": "PASS" if tangency_max < tols["tangency"] else "FAIL",
            }
        },
    }
    chord_rows = [
        (z1.real, z1.imag, z2.real, z2.imag, a)
        for (z1, z2), a in zip(env.chords, env.chord_args)
    ]
    env_rows = [(z.real, z.imag, a) for z, a in zip(env.points, env.point_args)]

    def build():
        canvas = SvgCanvas()
        _draw_boundary(canvas, kind, val, env.chords.ravel())
        for z1, z2 in env.chords:
            canvas.polyline([(z1.real, z1.imag), (z2.real, z2.imag)], **CHORD_STYLE)
        if ellipse is not None:
            canvas.polyline(
                _xy(ellipse_boundary_points(ellipse, 256)), closed=True, **CURVE_STYLE
            )
        canvas.dots(_xy(env.points), **DOT_STYLE)
        return canvas

    _emit(
        args,
        "interior_curve",
        obj,
        [
            ("interior_curve_chords.csv", "re1,im1,re2,im2,arg_lambda", chord_rows),
            ("interior_curve_envelope.csv", "re,im,arg_lambda", env_rows),
        ],
        build,
    )
    if tangency_max is not None and not tangency_max < tols["tangency"]:
        return 3
    return 0


def cmd_exterior_curve(args) -> int:
    kind, val = _parse_boundary(args.boundary)
    b = _build_product(_parse_zeros(args.zeros), args.theta)
    if kind == "disk":
        s = exterior_curve_samples_disk(b, args.samples)
    elif kind == "ellipse":
        s = exterior_curve_samples_elliptic(EllipticBlaschkeLike(b=b, t=val), args.samples)
    elif kind == "parabola":
        s = exterior_curve_samples_parabolic(ParabolicBlaschkeLike(b=b, t=val), args.samples)
    else:
        raise ValidationError("exterior curves are defined for disk, ellipse, parabola")

    deg = b.degree - 1
    _, resid = fit_algebraic_curve(s.points, deg)
    fit = {"degree": deg, "residual_max": float(np.max(resid))}
    conic_fit = None
    if b.degree == 3:
        cfit, r2 = fit_conic(s.points)
        conic_fit = {"conic": _conic_json(cfit), "residual_max": float(np.max(r2))}

    obj = {
        "boundary": {"kind": kind, "param": val},
        "zeros": [_cpair(z) for z in b.zeros],
        "samples": int(args.samples),
        "skipped": int(s.skipped),
        "fit": fit,
        "conic_fit": conic_fit,
    }
    rows = [(z.real, z.imag, a) for z, a in zip(s.points, s.arg_lambda)]

    def build():
        canvas = SvgCanvas()
        _draw_boundary(canvas, kind, val, s.points)
        canvas.dots(_xy(s.points), **DOT_STYLE)
        return canvas

    _emit(
        args,
        "exterior_curve",
        obj,
        [("exterior_curve_samples.csv", "re,im,arg_lambda", rows)],
        build,
    )
    return 0


def _sampled_centroids(kind, val, b, n):
    psis = 2.0 * np.pi * (np.arange(n) + 0.5) / n
    cents = []
    for psi in psis:
        lam = np.exp(1j * psi)
        if kind == "disk":
            pts = preimages(b, lam)
        else:
            m = EllipticBlaschkeLike(b=b, t=val)
            pts = preimages_on_Et(m, phi_boundary(val, lam))
        cents.append(np.mean(np.asarray(pts, dtype=complex)))
    return psis, np.asarray(cents, dtype=complex)


def cmd_centroid_locus(args) -> int:
    kind, val = _parse_boundary(args.boundary)
    tols = _parse_tols(args.tol)
    b = _build_product(_parse_zeros(args.zeros), args.theta)
    if kind not in ("disk", "ellipse"):
        raise ValidationError("the centroid locus is stated for disk and ellipse boundaries")

    psis, cents = _sampled_centroids(kind, val, b, args.samples)
    if kind == "disk":
        circ = centroid_circle(b)
        if circ.radius < 1e-14:
            locus_kind, point, ell = "point", circ.center, None
        else:
            locus_kind, point, ell = "circle", None, EllipseStandard(
                f1=circ.center, f2=circ.center, r=2.0 * circ.radius
            )
        ratio = 1.0
    else:
        locus = centroid_locus_elliptic(EllipticBlaschkeLike(b=b, t=val))
        locus_kind, point, ell = locus.kind, locus.point, locus.ellipse
        ratio = locus.axis_ratio

    if point is not None:
        res = np.abs(cents - point)
    else:
        res = np.abs(np.abs(cents - ell.f1) + np.abs(cents - ell.f2) - ell.r)
    res_max = float(np.max(res))

    obj = {
        "boundary": {"kind": kind, "param": val},
        "zeros": [_cpair(z) for z in b.zeros],
        "samples": int(args.samples),
        "kind": locus_kind,
        "point": None if point is None else _cpair(point),
        "ellipse": None if ell is None else _ellipse_json(ell),
        "axis_ratio": float(ratio),
        "checks": {
            "centroid": {
                "residual": res_max,
                "tol": tols["centroid"],
                "verdict": "PASS" if res_max < tols["centroid"] else "FAIL",
            }
        },
    }
    rows = [(z.real, z.imag, a) for z, a in zip(cents, psis)]

    def build():
        canvas = SvgCanvas()
        _draw_boundary(canvas, kind, val, cents)
        if ell is not None:
            canvas.polyline(_xy(ellipse_boundary_points(ell, 256)), closed=True, **CURVE_STYLE)
        canvas.dots(_xy(cents), **DOT_STYLE)
        return canvas

    _emit(
        args,
        "centroid_locus",
        obj,
        [("centroid_locus_samples.csv", "re,im,arg_lambda", rows)],
        build,
    )
    return 0 if res_max < tols["centroid"] else 3


def _closure_starts(kind, val, seed, want=5):
    rng = np.random.default_rng(seed)
    thetas = rng.uniform(0.0, 2.0 * np.pi, 4 * want)
    starts = []
    for th in thetas:
        if len(starts) == want:
            break
        if kind == "disk":
            starts.append(np.exp(1j * th))
        elif kind == "ellipse":
            bm = (1.0 - val * val) / (1.0 + val * val)
            starts.append(complex(math.cos(th), bm * math.sin(th)))
        else:
            if abs(math.pi - th) < 0.1:
                continue
            starts.append(psi_forward(val, np.exp(1j * th)))
    return starts


def cmd_verify(args) -> int:
    tols = _parse_tols(args.tol)
    if args.check == "chapple":
        if args.center is None or args.radius is None:
            raise ValidationError("--check chapple needs --center and --radius")
        c = _parse_complex(args.center)
        r = float(args.radius)
        inputs = {"check": "chapple", "center": _cpair(c), "radius": r}
        res = {"chapple": float(chapple_check(c, r))}
    else:
        kind, val = _parse_boundary(args.boundary)
        if kind == "jacobi":
            raise ValidationError("verify bundles cover disk, ellipse, parabola boundaries")
        b = _build_product(_parse_zeros(args.zeros), args.theta)
        if b.degree != 3:
            raise ValidationError("the verification bundle needs a degree-3 product")
        za, zb = b.zeros
        inputs = {
            "boundary": {"kind": kind, "param": val},
            "zeros": [_cpair(z) for z in b.zeros],
            "samples": int(args.samples),
            "inner_scale": float(args.inner_scale),
            "seed": int(args.seed),
        }
        if kind == "disk":
            conic = interior_curve_disk(b)
        elif kind == "ellipse":
            conic = interior_curve_elliptic(za, zb, val)
        else:
            conic = interior_curve_parabolic(za, zb, val)
        outer = _boundary_conic(kind, val)

        env = chord_envelope_samples(_interior_push(kind, val), b, args.samples)
        tang = max(tangency_residual(line_through(z1, z2), conic) for z1, z2 in env.chords)

        e0 = general_to_standard(conic)
        inner = standard_to_general(
            EllipseStandard(f1=e0.f1, f2=e0.f2, r=e0.r * float(args.inner_scale))
        )
        closures = []
        for z0 in _closure_starts(kind, val, args.seed):
            try:
                closures.append(poncelet_closure(outer, inner, z0, 3))
            except PonceletKitError:
                closures.append(float("inf"))
        res = {
            "tangency": float(tang),
            "closure": float(max(closures)),
            "cayley": abs(float(cayley_c2_residual(outer, inner))),
        }
        if kind != "parabola":
            _, cents = _sampled_centroids(kind, val, b, args.samples)
            if kind == "disk":
                circ = centroid_circle(b)
                cres = np.abs(np.abs(cents - circ.center) - circ.radius)
            else:
                locus = centroid_locus_elliptic(EllipticBlaschkeLike(b=b, t=val))
                if locus.kind == "point":
                    cres = np.abs(cents - locus.point)
                else:
                    ell = locus.ellipse
                    cres = np.abs(np.abs(cents - ell.f1) + np.abs(cents - ell.f2) - ell.r)
            res["centroid"] = float(np.max(cres))

    digest = hashlib.sha256(json.dumps(inputs, sort_keys=True).encode()).hexdigest()[:16]
    verdicts = {name: "PASS" if v < tols[name] else "FAIL" for name, v in res.items()}
    report = {
        "inputs_digest": digest,
        "residuals": {name: _jnum(v) for name, v in res.items()},
        "verdicts": verdicts,
    }
    os.makedirs(args.out_dir, exist_ok=True)
    _write(os.path.join(args.out_dir, "verify_report.json"), _dump(report))
    sys.stdout.write(_dump(report))
    return 3 if "FAIL" in verdicts.values() else 0


def cmd_cayley(args) -> int:
    kind, val = _parse_boundary(args.boundary)
    if kind == "ellipse":
        b = _build_product(_parse_zeros(args.zeros), args.theta)
        if b.degree != 3:
            raise ValidationError("the focal radius construction needs a degree-3 product")
        za, zb = b.zeros
        f1, f2 = interior_foci(za, zb, val)
        roots = cayley_R(f1, f2, val)
        sel = select_inscribed(f1, f2, val, seed=args.seed)
        rc = float(interior_r(za, zb, val))
        obj = {
            "boundary": {"kind": kind, "param": val},
            "zeros": [_cpair(z) for z in b.zeros],
            "foci": [_cpair(f1), _cpair(f2)],
            "roots": [float(roots[0]), float(roots[1])],
            "accepted": {
                "r": float(sel.r_accepted),
                "closure_residual": _jnum(sel.closure_accepted),
            },
            "rejected": {
                "r": float(sel.r_rejected),
                "closure_residual": _jnum(sel.closure_rejected),
            },
            "interior_r": rc,
            "agreement": abs(float(sel.r_accepted) - rc),
        }
    elif kind == "disk":
        if args.center is None or args.radius is None:
            raise ValidationError("disk mode needs --center and --radius")
        c = _parse_complex(args.center)
        r = float(args.radius)
        inner = standard_to_general(EllipseStandard(f1=c, f2=c, r=2.0 * r))
        closures = [
            poncelet_closure(UNIT_CIRCLE, inner, z0, 3)
            for z0 in _closure_starts("disk", None, args.seed, want=3)
        ]
        obj = {
            "boundary": {"kind": "disk", "param": None},
            "center": _cpair(c),
            "radius": r,
            "chapple_residual": float(chapple_check(c, r)),
            "cayley_residual": abs(float(cayley_c2_residual(UNIT_CIRCLE, inner))),
            "closure_residual": _jnum(max(closures)),
        }
    else:
        raise ValidationError("cayley mode covers disk and ellipse boundaries")
    os.makedirs(args.out_dir, exist_ok=True)
    _write(os.path.join(args.out_dir, "cayley.json"), _dump(obj))
    sys.stdout.write(_dump(obj))
    return 0


def cmd_jacobi_experiment(args) -> int:
    kind, val = _parse_boundary(args.boundary)
    if kind != "jacobi":
        raise ValidationError("jacobi-experiment needs --boundary jacobi:P")
    b = _build_product(_parse_zeros(args.zeros), args.theta)
    par = solve_params(val)
    rep = non_ellipse_experiment(par, b, args.samples, control_t=args.control_t)
    obj = rep.to_json()
    rows = [(z.real, z.imag, a) for z, a in zip(rep.points, rep.point_args)]

    def build():
        canvas = SvgCanvas()
        _draw_boundary(canvas, "ellipse" if args.control_t is not None else "jacobi",
                       args.control_t if args.control_t is not None else val, rep.points)
        canvas.dots(_xy(rep.points), **DOT_STYLE)
        return canvas

    _emit(
        args,
        "jacobi_experiment",
        obj,
        [("jacobi_experiment_envelope.csv", "re,im,arg_lambda", rows)],
        build,
    )
    sys.stdout.write(_dump(obj))
    return 0


# ---------------------------------------------------------------- wiring


def _add_common(sp):
    sp.add_argument("--boundary", default="disk",
                    help="disk, ellipse:T, parabola:T, or jacobi:P")
    sp.add_argument("--zeros",
                    help="comma-separated zeros besides the fixed one at the origin, a+bi form")
    sp.add_argument("--theta", type=float, default=0.0,
                    help="rotation angle; nonzero products are canonicalized first")
    sp.add_argument("--samples", type=int, default=360)
    sp.add_argument("--tol", action="append", metavar="NAME=VALUE",
                    help="override a check tolerance, e.g. tangency=1e-7")
    sp.add_argument("--out-dir", default=".")
    sp.add_argument("--format", default="json,csv,svg",
                    help="comma list from json,csv,svg")
    sp.add_argument("--seed", type=int, default=0)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="poncelet-kit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("interior-curve", help="chord-envelope interior curve")
    _add_common(sp)
    sp.set_defaults(func=cmd_interior_curve)

    sp = sub.add_parser("exterior-curve", help="tangent-intersection exterior curve samples")
    _add_common(sp)
    sp.set_defaults(func=cmd_exterior_curve)

    sp = sub.add_parser("centroid-locus", help="vertex-centroid locus")
    _add_common(sp)
    sp.set_defaults(func=cmd_centroid_locus)

    sp = sub.add_parser("verify", help="tangency/closure/Cayley/centroid verification bundle")
    _add_common(sp)
    sp.add_argument("--check", choices=["chapple"], help="run a single named check")
    sp.add_argument("--center", help="circle center for --check chapple / disk cayley")
    sp.add_argument("--radius", type=float, help="circle radius")
    sp.add_argument("--inner-scale", type=float, default=1.0,
                    help="scale the inscribed conic before closure/Cayley (negative control)")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("cayley", help="focal radius candidates and closure selection")
    _add_common(sp)
    sp.add_argument("--center", help="circle center (disk mode)")
    sp.add_argument("--radius", type=float, help="circle radius (disk mode)")
    sp.set_defaults(func=cmd_cayley)

    sp = sub.add_parser("jacobi-experiment", help="non-conic envelope experiment")
    _add_common(sp)
    sp.add_argument("--control-t", type=float, default=None,
                    help="replace the interior map by the ellipse boundary map (positive control)")
    sp.set_defaults(func=cmd_jacobi_experiment)

    args = parser.parse_args(argv)
    try:
        return int(args.func(args))
    except ValidationError as e:
        sys.stdout.write(_dump({"error": {"type": type(e).__name__, "message": str(e)}}))
        return 2
    except (NumericalError, PonceletKitError) as e:
        sys.stdout.write(_dump({"error": {"type": type(e).__name__, "message": str(e)}}))
        return 1
    except Exception:
        traceback.print_exc()
        return 1


if __name__ == "__main__":
    sys.exit(main())
