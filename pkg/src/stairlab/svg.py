"""Static SVG emitters for two-dimensional pictures: stair-paths, box
unions, point sets, and rasterized stair-hulls, drawn in the unit square.

Output is deterministic: fixed banner, fixed attribute order, coordinates
formatted with six decimals.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .geometry import BoxUnion, Point, PointSet, StairPath
from .stair import sconv_contains

_BANNER = "<!-- stairlab figure v1 -->"
_SIZE = 480
_MARGIN = 20


def _fmt(x) -> str:
    return "%.6f" % float(x)


def _sx(x) -> str:
    return _fmt(_MARGIN + float(x) * _SIZE)


def _sy(y) -> str:
    # image y grows downward; flip so the unit square reads the usual way
    return _fmt(_MARGIN + (1.0 - float(y)) * _SIZE)


def svg_document(elements: Iterable[str]) -> str:
    side = _SIZE + 2 * _MARGIN
    body = "\n".join(elements)
    return (
        f"{_BANNER}\n"
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{side}" height="{side}" '
        f'viewBox="0 0 {side} {side}">\n'
        f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{_SIZE}" height="{_SIZE}" '
        f'fill="white" stroke="#888" stroke-width="1"/>\n'
        f"{body}\n"
        f"</svg>\n"
    )


def _require_2d(dim: int) -> None:
    if dim != 2:
        raise ValueError("SVG rendering is two-dimensional only")


def render_stair_path(path: StairPath) -> str:
    _require_2d(path.dim)
    pts = " ".join(f"{_sx(v[0])},{_sy(v[1])}" for v in path.vertices)
    return svg_document(
        [
            f'<polyline points="{pts}" fill="none" stroke="#1050c0" stroke-width="2"/>',
            _dot(path.start, "#1050c0"),
            _dot(path.end, "#1050c0"),
        ]
    )


def _dot(p: Point, color: str, r: float = 4.0) -> str:
    return (
        f'<circle cx="{_sx(p[0])}" cy="{_sy(p[1])}" r="{_fmt(r)}" fill="{color}"/>'
    )


def render_points(points: PointSet, color: str = "#c03030") -> str:
    _require_2d(points.dim)
    return svg_document([_dot(p, color, 3.0) for p in points])


def _box_rect(lo, hi, fill: str, opacity: str) -> str:
    x = _sx(lo[0])
    y = _sy(hi[1])
    w = _fmt((float(hi[0]) - float(lo[0])) * _SIZE)
    h = _fmt((float(hi[1]) - float(lo[1])) * _SIZE)
    return (
        f'<rect x="{x}" y="{y}" width="{w}" height="{h}" '
        f'fill="{fill}" fill-opacity="{opacity}" stroke="none"/>'
    )


def render_box_union(S: BoxUnion, extra_points: Sequence[Point] = ()) -> str:
    _require_2d(S.dim)
    elems = [_box_rect(b.lo, b.hi, "#30a050", "0.45") for b in S.boxes]
    elems.extend(_dot(p, "#c03030", 3.0) for p in extra_points)
    return svg_document(elems)


def render_stair_hull(X: PointSet, resolution: int = 64) -> str:
    """Rasterized stair-hull: cells of a resolution² lattice whose centers
    the hull covers, plus the generating points."""
    _require_2d(X.dim)
    if resolution < 2:
        raise ValueError("need resolution >= 2")
    step = Fraction(1, resolution)
    elems = []
    for i in range(resolution):
        for j in range(resolution):
            center = Point((step * i + step / 2, step * j + step / 2))
            if sconv_contains(X, center):
                lo = Point((step * i, step * j))
                hi = Point((step * (i + 1), step * (j + 1)))
                elems.append(_box_rect(lo, hi, "#8060d0", "0.5"))
    elems.extend(_dot(p, "#c03030", 3.0) for p in X)
    return svg_document(elems)
