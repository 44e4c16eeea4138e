"""Thin families of increasing triangles on two-axis stretched grids, with
exact point-in-triangle counting, per-shape-class bounds, and the
type-class counting that caps how many far-apart simplices can cover one
point.

Shape classes: a triangle with vertices p1, p2, p3 (indices strictly
increasing in both axes) is classified by its index offsets
(h12, h23, v12, v23) = (i2-i1, i3-i2, j2-j1, j3-j2).  A family fixes the
middle vertex to the central third of the index range, caps every offset at
⌊m/3⌋, and keeps only classes with h12·v23 below the thinness budget.
"""

from __future__ import annotations

import math
import warnings
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Optional, Sequence

from .errors import check_guard
from .geometry import Point, PointSet
from .grid import GridSpec, far_apart
from .linalg import solve_unique
from .rational import Scalar, format_scalar, ln_bounds, parse_scalar, round_up
from .stair import conv_contains, point_types

_SIMPLEX_CAP = 10**7
# Per-class slack: how many extra members (beyond the h12·v23 cell window)
# a probe can pick up from boundary rows/columns.  Two rows or two columns
# per vertex, three vertices, with margin.
_BOUND_SLACK = 8


def rho_for(n: int, t: int, C: Scalar = 1) -> Fraction:
    """Thinness scale C·t/(n³·ln(n³/t)), rounded up (outward: a larger
    value only admits more shape classes).

    Accepted domain: n^(5/2) ≤ t ≤ binomial(n, 3).  The lower end is the
    plain power — no extra log factor — so the window is nonempty at
    desk scales.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    if t != int(t):
        raise ValueError("t must be an integer count")
    t = int(t)
    C = parse_scalar(C)
    if C <= 0:
        raise ValueError("need C > 0")
    if t * t < n**5 or t > math.comb(n, 3):
        raise ValueError("t outside the accepted range [n^(5/2), binomial(n,3)]")
    ln_lo, _ = ln_bounds(Fraction(n**3, t))
    return round_up(C * t / (n**3 * ln_lo), 96)


@dataclass(frozen=True, slots=True)
class IncreasingTriangle:
    i1: int
    j1: int
    i2: int
    j2: int
    i3: int
    j3: int

    def __post_init__(self) -> None:
        if not (self.i1 < self.i2 < self.i3 and self.j1 < self.j2 < self.j3):
            raise ValueError("vertex indices must strictly increase in both axes")

    @property
    def h12(self) -> int:
        return self.i2 - self.i1

    @property
    def h23(self) -> int:
        return self.i3 - self.i2

    @property
    def v12(self) -> int:
        return self.j2 - self.j1

    @property
    def v23(self) -> int:
        return self.j3 - self.j2

    def dims(self) -> tuple[int, int, int, int]:
        return (self.h12, self.h23, self.v12, self.v23)

    def vertices(self, spec: GridSpec) -> tuple[Point, Point, Point]:
        xs, ys = spec.X
        return (
            Point((_column_value(xs, self.i1), _column_value(ys, self.j1))),
            Point((_column_value(xs, self.i2), _column_value(ys, self.j2))),
            Point((_column_value(xs, self.i3), _column_value(ys, self.j3))),
        )


def _column_value(vals: tuple[Fraction, ...], idx: int) -> Fraction:
    """Column value for a 1-based index, extended one virtual step below the
    first column by continuing the leading growth ratio (boundary triangles
    whose lowest index is 0 stay realizable)."""
    if 1 <= idx <= len(vals):
        return vals[idx - 1]
    if idx == 0:
        return vals[0] * vals[0] / vals[1]
    raise ValueError(f"column index {idx} out of range")


class TriangleFamily:
    """Compact family: every admissible shape class shares the same
    rectangle of middle-vertex cells (mid_lo..mid_hi in both axes), so the
    family is the product classes × cells."""

    __slots__ = ("spec", "rho", "classes", "mid_lo", "mid_hi")

    def __init__(
        self,
        spec: GridSpec,
        rho: Fraction,
        classes: tuple[tuple[int, int, int, int], ...],
        mid_lo: int,
        mid_hi: int,
    ) -> None:
        if spec.d != 2:
            raise ValueError("triangle families live on two-axis grids")
        if not (1 <= mid_lo and mid_hi <= spec.m):
            raise ValueError("middle-vertex window out of range")
        side = spec.m // 3
        cap = rho * spec.m**2
        seen = set()
        for dims in classes:
            h12, h23, v12, v23 = dims
            if dims in seen:
                raise ValueError("duplicate shape class")
            seen.add(dims)
            if min(dims) < 1 or max(dims) > side:
                raise ValueError(f"offsets {dims} outside [1, {side}]")
            if h12 * v23 > cap:
                raise ValueError(f"class {dims} exceeds the thinness budget")
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "classes", tuple(classes))
        object.__setattr__(self, "mid_lo", mid_lo)
        object.__setattr__(self, "mid_hi", mid_hi)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("TriangleFamily is immutable")

    def cell_count(self) -> int:
        w = self.mid_hi - self.mid_lo + 1
        return w * w if w > 0 else 0

    def __len__(self) -> int:
        return len(self.classes) * self.cell_count()

    def cells(self) -> Iterator[tuple[int, int]]:
        for i2 in range(self.mid_lo, self.mid_hi + 1):
            for j2 in range(self.mid_lo, self.mid_hi + 1):
                yield (i2, j2)

    def has_class(self, dims: tuple[int, int, int, int]) -> bool:
        return tuple(dims) in set(self.classes)

    def triangles(self) -> Iterator[IncreasingTriangle]:
        for dims in self.classes:
            h12, h23, v12, v23 = dims
            for i2, j2 in self.cells():
                yield IncreasingTriangle(
                    i2 - h12, j2 - v12, i2, j2, i2 + h23, j2 + v23
                )

    def to_json(self) -> dict:
        return {
            "grid": self.spec.to_json(),
            "rho": format_scalar(self.rho),
            "mid": [self.mid_lo, self.mid_hi],
            "count": len(self),
            "classes": [list(c) for c in self.classes],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TriangleFamily":
        spec = GridSpec.from_json(obj["grid"])
        rho = parse_scalar(obj["rho"])
        classes = tuple(tuple(int(v) for v in c) for c in obj["classes"])
        lo, hi = obj["mid"]
        return cls(spec, rho, classes, int(lo), int(hi))


def gen_thin_triangles(spec: GridSpec, rho: Scalar) -> TriangleFamily:
    """Enumerate every shape class meeting the three constraints (central
    middle vertex, offsets at most ⌊m/3⌋, h12·v23 within the thinness
    budget rho·m²); index windows are purely combinatorial, so boundary
    classes may reach one virtual column below the grid."""
    if spec.d != 2:
        raise ValueError("need a two-axis grid")
    rho = parse_scalar(rho)
    if rho < 0:
        raise ValueError("need rho >= 0")
    m = spec.m
    cap = rho * m**2
    side = m // 3
    lo = (m + 2) // 3
    hi = (2 * m) // 3
    classes = tuple(
        (h12, h23, v12, v23)
        for h12 in range(1, side + 1)
        for h23 in range(1, side + 1)
        for v12 in range(1, side + 1)
        for v23 in range(1, side + 1)
        if h12 * v23 <= cap
    )
    return TriangleFamily(spec, rho, classes, lo, hi)


# ---------------------------------------------------------------------------
# exact counting


def _scaled_axis(vals: list[Fraction], q: Fraction) -> tuple[list[int], int]:
    """Rescale one axis (columns plus the probe coordinate) to integers;
    orientation signs are invariant under positive per-axis scaling."""
    den = math.lcm(*(v.denominator for v in vals), q.denominator)
    return [int(v * den) for v in vals], int(q * den)


def _prepare(q: Point, F: TriangleFamily):
    m = F.spec.m
    xs = [_column_value(F.spec.X[0], i) for i in range(m + 1)]
    ys = [_column_value(F.spec.X[1], j) for j in range(m + 1)]
    sx, qx = _scaled_axis(xs, q[0])
    sy, qy = _scaled_axis(ys, q[1])
    # windows: a triangle can contain q only if its index span covers the
    # probe on both axes (closed containment, so ties are inclusive)
    i_le = bisect_right(sx, qx) - 1
    i_ge = bisect_left(sx, qx)
    j_le = bisect_right(sy, qy) - 1
    j_ge = bisect_left(sy, qy)
    return sx, sy, qx, qy, i_le, i_ge, j_le, j_ge


def _probe_counts(q: Point, F: TriangleFamily) -> dict[tuple[int, int, int, int], int]:
    """Exact per-class counts of family members containing q (closed
    triangles).  Validated grids grow so fast on the second axis that every
    increasing triangle is positively oriented — the growth factor of the
    second axis exceeds four times the first-axis maximum — so containment
    is three left-of-edge tests, each shared across many classes."""
    if q.dim != 2:
        raise ValueError("probe must be two-dimensional")
    if not F.classes:
        return {}
    sx, sy, qx, qy, i_le, i_ge, j_le, j_ge = _prepare(q, F)
    m = F.spec.m
    if i_le < 0 or i_ge > m or j_le < 0 or j_ge > m:
        return {}
    side = F.spec.m // 3
    # v23 budget per h12, from the admitted classes
    pair_ok = {(c[0], c[3]) for c in F.classes}
    class_set = set(F.classes)
    counts: dict[tuple[int, int, int, int], int] = {}
    t31_memo: dict[tuple[int, int, int, int], bool] = {}

    for i2 in range(max(F.mid_lo, i_ge - side), min(F.mid_hi, i_le + side) + 1):
        x2 = sx[i2]
        for j2 in range(max(F.mid_lo, j_ge - side), min(F.mid_hi, j_le + side) + 1):
            y2 = sy[j2]
            # lower-left vertex candidates: q left of directed edge p1->p2
            L12 = []
            for i1 in range(max(0, i2 - side), min(i_le, i2 - 1) + 1):
                x1 = sx[i1]
                for j1 in range(max(0, j2 - side), min(j_le, j2 - 1) + 1):
                    y1 = sy[j1]
                    if (x2 - x1) * (qy - y1) - (qx - x1) * (y2 - y1) >= 0:
                        L12.append((i1, j1, x1, y1))
            if not L12:
                continue
            # upper-right vertex candidates: q left of directed edge p2->p3
            L23 = []
            for i3 in range(max(i_ge, i2 + 1), min(m, i2 + side) + 1):
                x3 = sx[i3]
                for j3 in range(max(j_ge, j2 + 1), min(m, j2 + side) + 1):
                    y3 = sy[j3]
                    if (x3 - x2) * (qy - y2) - (qx - x2) * (y3 - y2) >= 0:
                        L23.append((i3, j3, x3, y3))
            if not L23:
                continue
            for i1, j1, x1, y1 in L12:
                h12 = i2 - i1
                v12 = j2 - j1
                for i3, j3, x3, y3 in L23:
                    if (h12, j3 - j2) not in pair_ok:
                        continue
                    dims = (h12, i3 - i2, v12, j3 - j2)
                    if dims not in class_set:
                        continue
                    key = (i1, j1, i3, j3)
                    ok = t31_memo.get(key)
                    if ok is None:
                        ok = (x1 - x3) * (qy - y3) - (qx - x3) * (y1 - y3) >= 0
                        t31_memo[key] = ok
                    if ok:
                        counts[dims] = counts.get(dims, 0) + 1
    return counts


def count_containing(q: Point, F: TriangleFamily) -> int:
    """How many family members contain q (closed triangles, exact)."""
    return sum(_probe_counts(q, F).values())


def class_count_bound(
    q: Point, F: TriangleFamily, dims: tuple[int, int, int, int]
) -> tuple[int, int]:
    """Exact count of one shape class's members containing q, and the class
    bound h12·v23 + 8m; the count is asserted to stay within the bound."""
    dims = tuple(dims)
    if not F.has_class(dims):
        raise ValueError(f"class {dims} not in the family")
    h12, h23, v12, v23 = dims
    bound = h12 * v23 + _BOUND_SLACK * F.spec.m
    sx, sy, qx, qy, i_le, i_ge, j_le, j_ge = _prepare(q, F)
    m = F.spec.m
    count = 0
    if i_le >= 0 and i_ge <= m and j_le >= 0 and j_ge <= m:
        for i2 in range(max(F.mid_lo, i_ge - h23, h12), min(F.mid_hi, i_le + h12, m - h23) + 1):
            for j2 in range(max(F.mid_lo, j_ge - v23, v12), min(F.mid_hi, j_le + v12, m - v23) + 1):
                x1, y1 = sx[i2 - h12], sy[j2 - v12]
                x2, y2 = sx[i2], sy[j2]
                x3, y3 = sx[i2 + h23], sy[j2 + v23]
                if (
                    (x2 - x1) * (qy - y1) - (qx - x1) * (y2 - y1) >= 0
                    and (x3 - x2) * (qy - y2) - (qx - x2) * (y3 - y2) >= 0
                    and (x1 - x3) * (qy - y3) - (qx - x3) * (y1 - y3) >= 0
                ):
                    count += 1
    assert count <= bound, f"class {dims} count {count} exceeds bound {bound}"
    return count, bound


@dataclass(frozen=True)
class ProbeReport:
    total: int
    per_class: dict[tuple[int, int, int, int], int]
    worst_class: Optional[tuple[int, int, int, int]]
    worst_count: int
    worst_bound: int


def probe_report(q: Point, F: TriangleFamily) -> ProbeReport:
    """Per-class counts for one probe, with every class checked against its
    h12·v23 + 8m bound (AssertionError on violation)."""
    counts = _probe_counts(q, F)
    slack = _BOUND_SLACK * F.spec.m
    worst = None
    for dims, c in counts.items():
        bound = dims[0] * dims[3] + slack
        assert c <= bound, f"class {dims} count {c} exceeds bound {bound}"
        if worst is None or c > worst[1]:
            worst = (dims, c, bound)
    if worst is None:
        return ProbeReport(0, {}, None, 0, slack)
    return ProbeReport(sum(counts.values()), counts, worst[0], worst[1], worst[2])


# ---------------------------------------------------------------------------
# type classes and simplex counting


def type_class_sizes(q: Point, X: PointSet) -> tuple[int, ...]:
    """Sizes of the coordinate-dominance classes of X relative to q (class
    j for j = 0..d).  When q shares a coordinate with some point, that
    point can land in several classes at once; the sizes are then reported
    with multiplicity and a warning is emitted."""
    if q.dim != X.dim:
        raise ValueError("dimension mismatch")
    d = X.dim
    if any(p[i] == q[i] for p in X for i in range(d)):
        warnings.warn(
            "probe shares a coordinate with the point set; "
            "class sizes counted with multiplicity",
            stacklevel=2,
        )
    sizes = [0] * (d + 1)
    for p in X:
        for t in point_types(p, q):
            sizes[t] += 1
    return tuple(sizes)


def _simplex_contains(q: Point, verts: Sequence[Point]) -> bool:
    """Containment in the hull of d+1 points: one barycentric solve when
    they are affinely independent, general hull membership otherwise."""
    d = q.dim
    rows = [[v[i] for v in verts] for i in range(d)]
    rows.append([Fraction(1)] * len(verts))
    rhs = [q[i] for i in range(d)] + [Fraction(1)]
    lam = solve_unique(rows, rhs)
    if lam is not None:
        return all(v >= 0 for v in lam)
    return conv_contains(PointSet.of(verts, dim=d), q)


def count_simplices_containing(
    q: Point,
    X: PointSet,
    only_far_apart: bool = False,
    spec: Optional[GridSpec] = None,
) -> int:
    """Exact number of (d+1)-vertex subsets of X whose hull contains q;
    optionally restricted to subsets every vertex of which is separated
    from q by the grid's per-axis factors."""
    d = X.dim
    if q.dim != d:
        raise ValueError("dimension mismatch")
    check_guard(
        "SIMPLEX_CAP", math.comb(len(X), d + 1), _SIMPLEX_CAP, "vertex subsets"
    )
    pts = list(X)
    if only_far_apart:
        if spec is None:
            raise ValueError("far-apart filtering needs the grid description")
        pts = [p for p in pts if far_apart(p, q, spec)]
    return sum(
        1 for sub in combinations(pts, d + 1) if _simplex_contains(q, sub)
    )
