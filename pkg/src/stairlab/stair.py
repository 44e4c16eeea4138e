"""Stair-convexity and ordinary-convexity primitives.

The staircase world replaces straight segments by monotone axis-parallel
paths.  Everything here is exact over Fractions: hull membership and hull
intersection are genuine decision procedures, not numerical approximations,
and the box-union operations (erosion, volume, grid counting, convexity
testing) work on the cell decomposition induced by box walls.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Optional, Sequence

from .errors import check_guard
from .geometry import AxisBox, BoxUnion, Point, PointSet, StairPath, stratum_reps
from .linalg import feasible_nonneg, solve_unique
from .rational import Scalar


# ---------------------------------------------------------------------------
# stair paths and type classification


def stair_path(a: Point, b: Point) -> StairPath:
    """Monotone staircase path from a to b with at most d axis-parallel
    segments: move along the last axis to b's level, then connect the
    remaining coordinates recursively at that level.
    """
    if a.dim != b.dim:
        raise ValueError("stair_path endpoints must share a dimension")

    def verts(u: tuple, v: tuple, k: int) -> list[tuple]:
        if k == 0 or u == v:
            return [u]
        if u[k - 1] == v[k - 1]:
            return verts(u, v, k - 1)
        if u[k - 1] < v[k - 1]:
            u2 = u[: k - 1] + (v[k - 1],) + u[k:]
            return [u] + verts(u2, v, k - 1)
        return list(reversed(verts(v, u, k)))

    vs = verts(a.coords, b.coords, a.dim)
    return StairPath(tuple(Point(v) for v in vs))


def point_types(b: Point, a: Point) -> set[int]:
    """All type indices of b with respect to a.

    Type 0: b is coordinatewise ≤ a.  Type j ≥ 1: b_j ≥ a_j while every
    later coordinate of b is ≤ the one of a.  Ties make several types apply
    at once; with no shared coordinate values the type is unique.
    """
    if a.dim != b.dim:
        raise ValueError("point_types arguments must share a dimension")
    d = a.dim
    out: set[int] = set()
    if all(b[i] <= a[i] for i in range(d)):
        out.add(0)
    suffix_ok = True
    for j in range(d, 0, -1):
        # suffix_ok: b_i <= a_i for all i in j+1..d (1-based)
        if suffix_ok and b[j - 1] >= a[j - 1]:
            out.add(j)
        suffix_ok = suffix_ok and b[j - 1] <= a[j - 1]
    return out


def sconv_contains(X: PointSet, x: Point) -> bool:
    """Stair-hull membership: x lies in the stair-convex hull of X exactly
    when X supplies a point of every type 0..d with respect to x."""
    if len(X) == 0:
        raise ValueError("sconv_contains needs a nonempty point set")
    if X.dim != x.dim:
        raise ValueError("dimension mismatch")
    needed = set(range(X.dim + 1))
    for p in X:
        needed -= point_types(p, x)
        if not needed:
            return True
    return False


def _assert_no_shared_coordinates(P: PointSet, Q: PointSet) -> None:
    d = P.dim
    for i in range(d):
        vals = [p[i] for p in P] + [q[i] for q in Q]
        if len(set(vals)) != len(vals):
            raise ValueError(
                f"shared coordinate on axis {i}: the hull-intersection "
                "procedure requires all points of both sets to have pairwise "
                "distinct values in every axis"
            )


def sconv_intersects(P: PointSet, Q: PointSet) -> bool:
    """Do the stair-convex hulls of P and Q meet?

    Requires all points of P ∪ Q pairwise distinct in every coordinate.
    Below total size d+2 the hulls are provably disjoint; at and above it,
    some sub-pair of total size exactly d+2 already realizes any
    intersection, and a witness point necessarily draws each coordinate from
    the sub-pair's own coordinate values, so a finite candidate sweep
    decides the question.
    """
    if len(P) == 0 or len(Q) == 0:
        raise ValueError("sconv_intersects needs nonempty point sets")
    if P.dim != Q.dim:
        raise ValueError("dimension mismatch")
    d = P.dim
    _assert_no_shared_coordinates(P, Q)
    if len(P) + len(Q) < d + 2:
        return False
    for s in range(1, min(len(P), d + 1) + 1):
        t = d + 2 - s
        if t < 1 or t > len(Q):
            continue
        for Psub in itertools.combinations(P, s):
            for Qsub in itertools.combinations(Q, t):
                ps = PointSet.of(Psub, dim=d)
                qs = PointSet.of(Qsub, dim=d)
                pool = list(Psub) + list(Qsub)
                axes = [[pt[i] for pt in pool] for i in range(d)]
                for cand in itertools.product(*axes):
                    c = Point(cand)
                    if sconv_contains(ps, c) and sconv_contains(qs, c):
                        return True
    return False


def sconv_intersection_witness(P: PointSet, Q: PointSet) -> Optional[Point]:
    """Like sconv_intersects, but returns a common point when one exists."""
    if len(P) == 0 or len(Q) == 0:
        raise ValueError("needs nonempty point sets")
    d = P.dim
    _assert_no_shared_coordinates(P, Q)
    if len(P) + len(Q) < d + 2:
        return None
    for s in range(1, min(len(P), d + 1) + 1):
        t = d + 2 - s
        if t < 1 or t > len(Q):
            continue
        for Psub in itertools.combinations(P, s):
            for Qsub in itertools.combinations(Q, t):
                ps = PointSet.of(Psub, dim=d)
                qs = PointSet.of(Qsub, dim=d)
                pool = list(Psub) + list(Qsub)
                axes = [[pt[i] for pt in pool] for i in range(d)]
                for cand in itertools.product(*axes):
                    c = Point(cand)
                    if sconv_contains(ps, c) and sconv_contains(qs, c):
                        return c
    return None


# ---------------------------------------------------------------------------
# ordinary convexity (exact, desk-scale)

_CONVEX_CAP = 24


def conv_contains(X: PointSet, x: Point) -> bool:
    """Exact convex-hull membership by Carathéodory enumeration: x is in
    conv(X) iff some subset of at most d+1 points contains it, and for the
    affinely independent subsets the barycentric coordinates are the unique
    solution of a linear system.
    """
    if len(X) == 0:
        raise ValueError("conv_contains needs a nonempty point set")
    if X.dim != x.dim:
        raise ValueError("dimension mismatch")
    check_guard("CONVEX_CAP", len(X), _CONVEX_CAP, "points in conv_contains")
    d = X.dim
    for i in range(d):
        lo = min(p[i] for p in X)
        hi = max(p[i] for p in X)
        if not (lo <= x[i] <= hi):
            return False
    pts = list(X)
    for size in range(1, min(len(pts), d + 1) + 1):
        for sub in itertools.combinations(pts, size):
            if size == 1:
                if sub[0].coords == x.coords:
                    return True
                continue
            rows = [[p[i] for p in sub] for i in range(d)]
            rows.append([Fraction(1)] * size)
            rhs = list(x.coords) + [Fraction(1)]
            lam = solve_unique(rows, rhs)
            if lam is not None and all(v >= 0 for v in lam):
                return True
    return False


def _conv_pair_feasible(Psub: Sequence[Point], Qsub: Sequence[Point], d: int) -> bool:
    # variables: coefficients on Psub then on Qsub
    np_, nq = len(Psub), len(Qsub)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for i in range(d):
        rows.append([p[i] for p in Psub] + [-q[i] for q in Qsub])
        rhs.append(Fraction(0))
    rows.append([Fraction(1)] * np_ + [Fraction(0)] * nq)
    rhs.append(Fraction(1))
    rows.append([Fraction(0)] * np_ + [Fraction(1)] * nq)
    rhs.append(Fraction(1))
    return feasible_nonneg(rows, rhs)


def conv_intersects(P: PointSet, Q: PointSet) -> bool:
    """Exact convex-hull intersection.

    Any intersection point is a convex combination on both sides; a basic
    feasible solution of the combined system keeps at most d+2 points in
    play, so when the input is larger it suffices to test every sub-pair of
    total size exactly d+2.
    """
    if len(P) == 0 or len(Q) == 0:
        raise ValueError("conv_intersects needs nonempty point sets")
    if P.dim != Q.dim:
        raise ValueError("dimension mismatch")
    check_guard("CONVEX_CAP", len(P) + len(Q), _CONVEX_CAP, "points in conv_intersects")
    d = P.dim
    if len(P) + len(Q) <= d + 2:
        return _conv_pair_feasible(list(P), list(Q), d)
    for s in range(1, min(len(P), d + 1) + 1):
        t = d + 2 - s
        if t < 1 or t > len(Q):
            continue
        for Psub in itertools.combinations(P, s):
            for Qsub in itertools.combinations(Q, t):
                if _conv_pair_feasible(Psub, Qsub, d):
                    return True
    return False


# ---------------------------------------------------------------------------
# box-union operations


def volume(S: BoxUnion) -> Fraction:
    """Exact volume of a union of boxes (cell decomposition, no
    inclusion–exclusion)."""
    return S.volume()


def _slice_last(S: BoxUnion, value: Fraction) -> BoxUnion:
    """Slice of S at last coordinate = value, as a (d−1)-dimensional union."""
    d = S.dim
    boxes = []
    for b in S.boxes:
        if b.lo[d - 1] <= value <= b.hi[d - 1]:
            boxes.append(AxisBox(Point(b.lo.coords[:-1]), Point(b.hi.coords[:-1])))
    return BoxUnion(tuple(boxes), d - 1)


def is_stair_convex(S: BoxUnion) -> bool:
    """Exact stair-convexity test for a closed union of boxes.

    In one dimension stair-convexity is plain connectivity.  In higher
    dimension, slice along the last axis: every slice must be stair-convex,
    the heights with nonempty slice must form one contiguous band, and going
    up through that band the slices must be nested (lower ⊆ upper).  Those
    three facts are exactly what a staircase between two member points
    needs: its vertical run stays inside, and its remainder lives in the top
    slice.
    """
    if S.is_empty():
        return True
    d = S.dim
    if d == 1:
        intervals = sorted((b.lo[0], b.hi[0]) for b in S.boxes)
        merged = 1
        cur_hi = intervals[0][1]
        for lo, hi in intervals[1:]:
            if lo > cur_hi:
                merged += 1
            cur_hi = max(cur_hi, hi)
        return merged == 1
    reps = stratum_reps(S.axis_breaks(d - 1))
    slices = [_slice_last(S, r) for r in reps]
    nonempty = [i for i, sl in enumerate(slices) if not sl.is_empty()]
    if not nonempty:
        return True
    if nonempty[-1] - nonempty[0] + 1 != len(nonempty):
        return False  # hole in the occupied band of heights
    for i, j in zip(nonempty, nonempty[1:]):
        if not slices[i].union_subset(slices[j]):
            return False
    return all(is_stair_convex(slices[i]) for i in nonempty)


def _closure_intervals(values: Sequence[Fraction]) -> list[tuple[Fraction, Fraction]]:
    """For a sorted break list, the closed hull of each stratum: [v,v] for a
    break value, [u,w] for the open gap between consecutive breaks."""
    out: list[tuple[Fraction, Fraction]] = []
    for i, v in enumerate(values):
        if i:
            u = values[i - 1]
            if v != u:
                out.append((u, v))
        out.append((v, v))
    return out


def _merge_closed(intervals: list[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    if not intervals:
        return []
    intervals.sort()
    merged = [intervals[0]]
    for lo, hi in intervals[1:]:
        mlo, mhi = merged[-1]
        if lo <= mhi:  # overlapping or touching closed intervals join
            merged[-1] = (mlo, max(mhi, hi))
        else:
            merged.append((lo, hi))
    return merged


def _erode_axis(S: BoxUnion, axis: int, delta: Fraction) -> BoxUnion:
    """Erode by the segment [0, delta] along one axis: keep p iff the whole
    segment p .. p+delta·e_axis lies in S."""
    d = S.dim
    others = [j for j in range(d) if j != axis]
    per_axis = [_closure_intervals(S.axis_breaks(j)) for j in others]
    out: list[AxisBox] = []
    for combo in itertools.product(*per_axis):
        reps = {}
        for j, (lo, hi) in zip(others, combo):
            reps[j] = (lo + hi) / 2
        fibers = []
        for b in S.boxes:
            if all(b.lo[j] <= reps[j] <= b.hi[j] for j in others):
                fibers.append((b.lo[axis], b.hi[axis]))
        for lo, hi in _merge_closed(fibers):
            if hi - lo >= delta:
                lo_c = [Fraction(0)] * d
                hi_c = [Fraction(0)] * d
                for j, (clo, chi) in zip(others, combo):
                    lo_c[j], hi_c[j] = clo, chi
                lo_c[axis], hi_c[axis] = lo, hi - delta
                out.append(AxisBox(Point(tuple(lo_c)), Point(tuple(hi_c))))
    return BoxUnion(tuple(out), d).simplify()


def erode(S: BoxUnion, delta: Scalar) -> BoxUnion:
    """Inner erosion {p : p + [0,δ]^d ⊆ S}, exact on box unions.

    Erosion by the cube factors into d erosions by axis segments, and each
    of those is computed column by column on the wall decomposition: a
    column's fiber is a union of closed intervals, and an interval [a,b]
    survives as [a, b−δ] when it is long enough.
    """
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("erode needs delta > 0")
    out = S
    for axis in range(S.dim):
        if out.is_empty():
            break
        out = _erode_axis(out, axis, delta)
    return out


def grid_count(S: BoxUnion, m: int) -> int:
    """Number of points of the uniform (m per axis) grid on the unit cube
    that lie in S (closed membership).  S must sit inside the unit cube."""
    if m < 2:
        raise ValueError("grid_count needs m >= 2")
    d = S.dim
    for b in S.boxes:
        if any(v < 0 or v > 1 for v in b.lo.coords + b.hi.coords):
            raise ValueError("grid_count expects S within the unit cube")
    hit: set[tuple[int, ...]] = set()
    for b in S.boxes:
        ranges = []
        for i in range(d):
            lo = math.ceil(b.lo[i] * (m - 1))
            hi = math.floor(b.hi[i] * (m - 1))
            ranges.append(range(lo, hi + 1))
        hit.update(itertools.product(*ranges))
    return len(hit)
