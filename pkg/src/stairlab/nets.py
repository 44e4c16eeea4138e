"""The ε-net workbench: fan-based refutation, Hammersley nets, exact
largest-empty-box search, a sound volume-bound certificate for stair-convex
ranges, transference to and from the stretched grid, and a brute-force weak
net oracle.

Two deliberate asymmetries keep both directions sound: the refuter treats
boxes as closed when testing emptiness against the net (its witness really
avoids the net), while the empty-box search treats interiors as open (its
maximum really upper-bounds every open empty box).
"""

from __future__ import annotations

import itertools
import math
import random
from bisect import bisect_left, bisect_right, insort
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from .errors import check_guard
from .geometry import AxisBox, BoxUnion, Point, PointSet
from .rational import (
    Scalar,
    certified_at_most_inverse_e,
    dyadic_in,
    e_bounds,
    ln_bounds,
    parse_scalar,
    round_up,
)
from .stair import conv_contains

_EMPTYBOX_CAP = 4096
_EMPTYBOX_WORK_CAP = 1 << 22
_WEAKNET_CAP = 20
_WEAKNET_ENUM_CAP = 200_000
_NETBUILD_CAP = 32

HALF = Fraction(1, 2)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# box types and fans


def choose_k(n: int, d: int) -> int:
    """The unique k with 2^{d+1}·n ≤ 2^k < 2^{d+2}·n."""
    if n < 1:
        raise ValueError("need n >= 1")
    return ((1 << (d + 1)) * n - 1).bit_length()


@dataclass(frozen=True)
class BoxType:
    """Composition of k into positive per-axis exponents."""

    t: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.t or any(v < 1 for v in self.t):
            raise ValueError("box type entries must be positive integers")

    @property
    def k(self) -> int:
        return sum(self.t)

    @property
    def dim(self) -> int:
        return len(self.t)


def box_types(k: int, d: int) -> list[BoxType]:
    """All compositions of k into d positive parts; there are C(k-1, d-1)."""
    if k < d:
        raise ValueError("need k >= d")
    out = []
    for cuts in itertools.combinations(range(1, k), d - 1):
        prev = 0
        parts = []
        for c in cuts:
            parts.append(c - prev)
            prev = c
        parts.append(k - prev)
        out.append(BoxType(tuple(parts)))
    return out


def _in_upper_cube(p: Point) -> bool:
    return all(HALF <= v <= 1 for v in p)


def normal_box(t: BoxType, p: Point) -> AxisBox:
    """The box [p_1 - 2^{-t_1}, p_1] × ... anchored at p; volume 2^{-k}."""
    if t.dim != p.dim:
        raise ValueError("dimension mismatch")
    if not _in_upper_cube(p):
        raise ValueError("anchor must lie in [1/2, 1]^d")
    lo = tuple(p[i] - Fraction(1, 1 << t.t[i]) for i in range(p.dim))
    return AxisBox(Point(lo), p)


@dataclass(frozen=True)
class Fan:
    """All normal boxes of a given total exponent k at one anchor."""

    anchor: Point
    k: int
    types: tuple[BoxType, ...]
    boxes: tuple[AxisBox, ...]


def make_fan(p: Point, k: int) -> Fan:
    ts = box_types(k, p.dim)
    return Fan(p, k, tuple(ts), tuple(normal_box(t, p) for t in ts))


def lower_subbox(t: BoxType, p: Point) -> AxisBox:
    """Lower half of the normal box in every axis; distinct types give
    interior-disjoint subboxes, which is what makes the refuter's volume
    lower bound a plain sum."""
    box = normal_box(t, p)
    hi = tuple(
        box.lo[i] + Fraction(1, 1 << (t.t[i] + 1)) for i in range(p.dim)
    )
    return AxisBox(box.lo, Point(hi))


# ---------------------------------------------------------------------------
# Hammersley points


def _first_primes(n: int) -> list[int]:
    primes: list[int] = []
    c = 2
    while len(primes) < n:
        if all(c % p for p in primes):
            primes.append(c)
        c += 1
    return primes


def radical_inverse(i: int, base: int) -> Fraction:
    num, den = 0, 1
    while i:
        num = num * base + i % base
        den *= base
        i //= base
    return Fraction(num, den)


def hammersley(s: int, d: int) -> PointSet:
    """The s-point Hammersley set: first coordinate i/s, the rest radical
    inverses of i in the first d-1 prime bases."""
    if s < 1:
        raise ValueError("need s >= 1")
    if d < 1:
        raise ValueError("need d >= 1")
    bases = _first_primes(d - 1)
    pts = []
    for i in range(s):
        coords = [Fraction(i, s)]
        coords.extend(radical_inverse(i, b) for b in bases)
        pts.append(Point(tuple(coords)))
    return PointSet(tuple(pts), d)


# ---------------------------------------------------------------------------
# refuter


@dataclass(frozen=True)
class RefuteResult:
    S: BoxUnion
    vol_lb: Fraction
    anchor: Point
    k: int
    T: int
    count: int

    def to_json(self) -> dict:
        from .rational import format_scalar

        return {
            "S": self.S.to_json(),
            "vol_lb": format_scalar(self.vol_lb),
            "anchor": self.anchor.to_json(),
            "k": self.k,
            "T": self.T,
            "count": self.count,
        }


def _validate_unit_cube(N: PointSet) -> None:
    for p in N:
        if any(v < 0 or v > 1 for v in p):
            raise ValueError("net points must lie in the unit cube")


class _BoxHitTester:
    """Closed-box emptiness against a fixed point set, with an axis-0
    presort so each query touches only candidates in the box's x-range."""

    def __init__(self, N: PointSet):
        self.pts = sorted(N, key=lambda p: p[0])
        self.xs = [p[0] for p in self.pts]

    def box_empty(self, box: AxisBox) -> bool:
        lo, hi = box.lo, box.hi
        a = bisect_left(self.xs, lo[0])
        b = bisect_right(self.xs, hi[0])
        d = len(lo)
        for p in self.pts[a:b]:
            if all(lo[i] <= p[i] <= hi[i] for i in range(1, d)):
                return False
        return True


def refute_net(
    N: PointSet, trials: int = 200, seed: int = 0
) -> Optional[RefuteResult]:
    """Search for a large empty stair-convex witness: sample anchors in the
    upper cube, count fan boxes missed by N (closed-box emptiness), and keep
    the best anchor.  Success when at least a quarter of the fan is empty;
    the union of empty boxes then has volume ≥ count·2^{-d-k} by the
    interior-disjoint lower subboxes."""
    if len(N) == 0:
        raise ValueError("refute_net needs a nonempty point set")
    _validate_unit_cube(N)
    if trials < 1:
        raise ValueError("need trials >= 1")
    d = N.dim
    k = choose_k(len(N), d)
    types = box_types(k, d)
    T = len(types)
    rng = random.Random(seed)
    anchors = [
        Point(tuple(dyadic_in(rng, HALF, ONE) for _ in range(d)))
        for _ in range(trials)
    ]
    tester = _BoxHitTester(N)

    best: Optional[tuple[int, Point, list[AxisBox]]] = None
    for p in anchors:
        empty = [box for t in types if tester.box_empty(box := normal_box(t, p))]
        n_empty = len(empty)
        if best is None or n_empty > best[0] or (
            n_empty == best[0] and p.coords < best[1].coords
        ):
            best = (n_empty, p, empty)
    count, anchor, empty_boxes = best
    if 4 * count < T:
        return None
    S = BoxUnion(tuple(empty_boxes), d)
    vol_lb = count * Fraction(1, 1 << (d + k))
    return RefuteResult(S, vol_lb, anchor, k, T, count)


# ---------------------------------------------------------------------------
# exact largest empty box


class EmptyBoxResult(NamedTuple):
    box: AxisBox
    v: Fraction


def _gaps_1d(values: Sequence[Fraction]) -> tuple[Fraction, Fraction, Fraction]:
    """Largest gap (length, lo, hi) of [0,1] split at the given values."""
    cuts = sorted({v for v in values if 0 < v < 1})
    edges = [Fraction(0)] + cuts + [Fraction(1)]
    best = None
    for a, b in zip(edges, edges[1:]):
        if best is None or b - a > best[0]:
            best = (b - a, a, b)
    return best


def _empty_rect_2d(points: list[tuple[Fraction, Fraction]]) -> tuple[Fraction, tuple]:
    """Maximum-area open axis rectangle in the unit square avoiding the
    points, by a left-wall sweep over supported walls."""
    xs_sorted = sorted({p[0] for p in points})
    pts = sorted(points)
    best_area = Fraction(-1)
    best_rect = None

    def consider(x0, x1, y0, y1):
        nonlocal best_area, best_rect
        area = (x1 - x0) * (y1 - y0)
        if area > best_area:
            best_area = area
            best_rect = (x0, x1, y0, y1)

    for left in [Fraction(0)] + xs_sorted:
        ys = [Fraction(0), Fraction(1)]
        i = bisect_right(pts, (left, Fraction(2)))  # first point with x > left
        while i < len(pts):
            j = i
            x = pts[i][0]
            while j < len(pts) and pts[j][0] == x:
                j += 1
            batch = pts[i:j]
            for _, y in batch:
                idx = bisect_left(ys, y)
                if idx < len(ys) and ys[idx] == y:
                    continue  # lands on an existing split line
                consider(left, x, ys[idx - 1], ys[idx])
            for _, y in batch:
                idx = bisect_left(ys, y)
                if idx >= len(ys) or ys[idx] != y:
                    insort(ys, y)
            i = j
        for lo, hi in zip(ys, ys[1:]):
            consider(left, Fraction(1), lo, hi)
    return best_area, best_rect


def largest_empty_box(N: PointSet) -> EmptyBoxResult:
    """Maximum-volume axis box in the unit cube whose open interior avoids
    N.  Exact: every maximal empty open box has each wall either on the
    domain boundary or exactly on a point coordinate, so a sweep over those
    candidate walls is complete."""
    d = N.dim
    _validate_unit_cube(N)
    check_guard("EMPTYBOX_CAP", len(N) * d, _EMPTYBOX_CAP, "points × dimension")
    if len(N) == 0:
        box = AxisBox(
            Point(tuple(Fraction(0) for _ in range(d))),
            Point(tuple(Fraction(1) for _ in range(d))),
        )
        return EmptyBoxResult(box, Fraction(1))
    if d == 1:
        length, lo, hi = _gaps_1d([p[0] for p in N])
        return EmptyBoxResult(AxisBox(Point((lo,)), Point((hi,))), length)
    if d == 2:
        area, rect = _empty_rect_2d([(p[0], p[1]) for p in N])
        x0, x1, y0, y1 = rect
        return EmptyBoxResult(AxisBox(Point((x0, y0)), Point((x1, y1))), area)

    n = len(N)
    check_guard(
        "EMPTYBOX_WORK_CAP",
        (n + 2) ** (2 * (d - 2)) * max(n, 1),
        _EMPTYBOX_WORK_CAP,
        "estimated candidate-wall workload",
    )

    def solve(pts: list[tuple[Fraction, ...]], dims: int) -> tuple[Fraction, list]:
        if dims == 2:
            area, rect = _empty_rect_2d([(p[0], p[1]) for p in pts]) if pts else (
                Fraction(1),
                (Fraction(0), Fraction(1), Fraction(0), Fraction(1)),
            )
            x0, x1, y0, y1 = rect
            return area, [(x0, x1), (y0, y1)]
        coords = sorted({p[0] for p in pts})
        los = [Fraction(0)] + coords
        his = coords + [Fraction(1)]
        best_v = Fraction(-1)
        best_sides = None
        for lo in los:
            for hi in his:
                if lo >= hi:
                    continue
                inside = [p[1:] for p in pts if lo < p[0] < hi]
                sub_v, sub_sides = solve(inside, dims - 1)
                v = (hi - lo) * sub_v
                if v > best_v:
                    best_v = v
                    best_sides = [(lo, hi)] + sub_sides
        return best_v, best_sides

    v, sides = solve([p.coords for p in N], d)
    box = AxisBox(
        Point(tuple(s[0] for s in sides)), Point(tuple(s[1] for s in sides))
    )
    return EmptyBoxResult(box, v)


# ---------------------------------------------------------------------------
# certified volume bound and net certificates


def stair_volume_bound(v: Scalar, d: int) -> Fraction:
    """Certified rational upper bound on e·v·ln^{d-1}(1/v) for 0 < v ≤ 1/e.

    All transcendental factors are replaced by outward-rounded rational
    enclosures, so the returned value really is an upper bound.
    """
    v = parse_scalar(v)
    if v <= 0:
        raise ValueError("need v > 0")
    if d < 1:
        raise ValueError("need d >= 1")
    ok = certified_at_most_inverse_e(v)
    if ok is False:
        raise ValueError("v > 1/e: the volume lemma does not apply")
    if ok is None:
        raise ValueError("cannot certify v <= 1/e at working precision")
    _, e_hi = e_bounds()
    bound = e_hi * v
    if d > 1:
        _, ln_hi = ln_bounds(1 / v)
        bound *= ln_hi ** (d - 1)
    return round_up(bound, 96)


@dataclass(frozen=True)
class NetCertificate:
    net: PointSet
    epsilon: Fraction
    v: Fraction
    bound: Fraction

    def __post_init__(self) -> None:
        if self.bound > self.epsilon:
            raise ValueError("certificate bound exceeds epsilon")
        if certified_at_most_inverse_e(self.v) is False:
            raise ValueError("certificate v exceeds 1/e")

    def to_json(self) -> dict:
        from .rational import format_scalar

        return {
            "net": self.net.to_json(),
            "epsilon": format_scalar(self.epsilon),
            "v": format_scalar(self.v),
            "bound": format_scalar(self.bound),
        }


def certify_stair_net(N: PointSet, eps: Scalar) -> Optional[NetCertificate]:
    """Sound certificate that N is an eps-net for stair-convex sets: any
    stair-convex set missing N contains no open empty box larger than the
    exact maximum v, so by the volume lemma its volume is below the
    certified bound; if that bound is below eps, done.  Failure is not a
    disproof."""
    eps = parse_scalar(eps)
    v = largest_empty_box(N).v
    if certified_at_most_inverse_e(v) is not True:
        return None
    bound = stair_volume_bound(v, N.dim)
    if bound < eps:
        return NetCertificate(N, eps, v, bound)
    return None


def build_stair_net(r: Scalar, d: int) -> PointSet:
    """Grow a Hammersley net, doubling its size from ⌈r⌉, until the
    certificate succeeds at eps = 1/r."""
    r = parse_scalar(r)
    if r < 1:
        raise ValueError("need r >= 1")
    eps = 1 / r
    s = math.ceil(r)
    for step in itertools.count():
        check_guard("NETBUILD_CAP", step + 1, _NETBUILD_CAP, "doubling steps")
        N = hammersley(s, d)
        if certify_stair_net(N, eps) is not None:
            return N
        s *= 2
    raise AssertionError("unreachable")


def build_stair_net_report(r: Scalar, d: int) -> tuple[PointSet, NetCertificate, int]:
    """build_stair_net plus the certificate and final size, for reporting."""
    N = build_stair_net(r, d)
    cert = certify_stair_net(N, 1 / parse_scalar(r))
    assert cert is not None
    return N, cert, len(N)


# ---------------------------------------------------------------------------
# transference


def _transfer_eps(eps: Fraction, d: int, n_net: int, m: int) -> Fraction:
    return eps + Fraction(2 * d * (n_net + 1), m)


def transfer_to_weak_net(N: PointSet, eps: Scalar, spec) -> tuple[PointSet, Fraction]:
    """Pull a stair net on the unit cube back to the stretched grid's box;
    the result is a weak net there at eps' = eps + 2d(|N|+1)/m."""
    from .grid import pi_inverse

    eps = parse_scalar(eps)
    _validate_unit_cube(N)
    pts = [pi_inverse(p, spec) for p in N]
    out = PointSet.of(pts, dim=spec.d) if pts else PointSet((), spec.d)
    return out, _transfer_eps(eps, spec.d, len(N), spec.m)


def transfer_from_weak_net(N: PointSet, eps: Scalar, spec) -> tuple[PointSet, Fraction]:
    """Push a weak net on the grid's box forward to the unit cube; same
    eps' formula (the backward constant is adopted symmetrically)."""
    from .grid import pi_map

    eps = parse_scalar(eps)
    pts = [pi_map(p, spec) for p in N]
    out = PointSet.of(pts, dim=spec.d) if pts else PointSet((), spec.d)
    return out, _transfer_eps(eps, spec.d, len(N), spec.m)


def brute_force_weak_net_check(X: PointSet, N: PointSet, r: Scalar) -> bool:
    """Exhaustive weak-net verdict: every ⌈|X|/r⌉-subset of X must have a
    net point inside its convex hull.  Checking exactly threshold-sized
    subsets suffices: any bigger convex position contains such a hull."""
    r = parse_scalar(r)
    if r < 1:
        raise ValueError("need r >= 1")
    check_guard("WEAKNET_CAP", len(X), _WEAKNET_CAP, "ground-set points")
    threshold = math.ceil(len(X) / r)
    if threshold > len(X):
        return True
    check_guard(
        "WEAKNET_ENUM_CAP",
        math.comb(len(X), threshold),
        _WEAKNET_ENUM_CAP,
        "subsets to enumerate",
    )
    for sub in itertools.combinations(X, threshold):
        S = PointSet.of(sub, dim=X.dim)
        if not any(conv_contains(S, q) for q in N):
            return False
    return True
