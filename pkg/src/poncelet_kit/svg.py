"""Tiny deterministic SVG writer for curve, chord, and point overlays.

Coordinates print with six decimals so identical data gives byte-identical
files.  The vertical axis is flipped at add time (SVG y grows downward),
and the viewBox is fitted to the data bounding box with a 5% margin.
Stroke widths and dot radii scale with the drawing extent.
"""

from __future__ import annotations

from .errors import ValidationError

BOUNDARY_STYLE = {"color": "#000000", "width": 0.004}
CHORD_STYLE = {"color": "#cccccc", "width": 0.0015}
CURVE_STYLE = {"color": "#d62728", "width": 0.004}
DOT_STYLE = {"color": "#1f77b4", "radius": 0.005}


def _f(x: float) -> str:
    s = "{:.6f}".format(float(x))
    # avoid the two spellings of zero
    return "0.000000" if s == "-0.000000" else s


class SvgCanvas:
    def __init__(self):
        self._items = []
        self._xs = []
        self._ys = []

    def _track(self, pts):
        for x, y in pts:
            self._xs.append(float(x))
            self._ys.append(float(y))

    def polyline(self, points, color: str, width: float, closed: bool = False):
        """points: iterable of (x, y) in math orientation; width is a
        fraction of the final drawing extent."""
        pts = [(float(x), -float(y)) for x, y in points]
        if len(pts) < 2:
            return
        self._track(pts)
        self._items.append(("poly", pts, color, float(width), bool(closed)))

    def dots(self, points, color: str, radius: float):
        pts = [(float(x), -float(y)) for x, y in points]
        self._track(pts)
        self._items.append(("dots", pts, color, float(radius), False))

    def render(self) -> str:
        if not self._xs:
            raise ValidationError("nothing to draw")
        x0, x1 = min(self._xs), max(self._xs)
        y0, y1 = min(self._ys), max(self._ys)
        extent = max(x1 - x0, y1 - y0, 1e-9)
        pad = 0.05 * extent
        vb = (x0 - pad, y0 - pad, (x1 - x0) + 2 * pad, (y1 - y0) + 2 * pad)
        out = [
            '<svg xmlns="http://www.w3.org/2000/svg" viewBox="%s %s %s %s">'
            % tuple(_f(v) for v in vb)
        ]
        for kind, pts, color, size, closed in self._items:
            if kind == "poly":
                coords = " ".join("%s,%s" % (_f(x), _f(y)) for x, y in pts)
                tag = "polygon" if closed else "polyline"
                out.append(
                    '<%s points="%s" fill="none" stroke="%s" stroke-width="%s"/>'
                    % (tag, coords, color, _f(size * extent))
                )
            else:
                r = _f(size * extent)
                for x, y in pts:
                    out.append(
                        '<circle cx="%s" cy="%s" r="%s" fill="%s"/>'
                        % (_f(x), _f(y), r, color)
                    )
        out.append("</svg>")
        return "\n".join(out) + "\n"
