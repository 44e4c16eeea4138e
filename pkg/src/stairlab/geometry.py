"""Core geometric containers: exact points, point sets, axis boxes, finite
unions of axis boxes, and monotone staircase paths.

All coordinates are Fractions.  JSON codecs keep exactness by writing scalars
as "num/den" strings.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from .rational import Scalar, format_scalar, parse_scalar


@dataclass(frozen=True)
class Point:
    coords: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    @classmethod
    def of(cls, values: Iterable) -> "Point":
        return cls(tuple(parse_scalar(v) for v in values))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> Fraction:
        return self.coords[i]

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def replace(self, i: int, value: Scalar) -> "Point":
        c = list(self.coords)
        c[i] = Fraction(value)
        return Point(tuple(c))

    def to_json(self) -> list[str]:
        return [format_scalar(c) for c in self.coords]

    @classmethod
    def from_json(cls, data: Sequence) -> "Point":
        return cls.of(data)


@dataclass(frozen=True)
class PointSet:
    """Finite set of points of a common dimension.

    Construction deduplicates while preserving first-occurrence order, so a
    PointSet is also usable where a stable ordering matters (JSON round-trips,
    deterministic iteration in tests).
    """

    points: tuple[Point, ...]
    dim: int

    def __post_init__(self) -> None:
        seen: dict[tuple[Fraction, ...], None] = {}
        for p in self.points:
            if p.dim != self.dim:
                raise ValueError(f"point of dim {p.dim} in a PointSet of dim {self.dim}")
            seen.setdefault(p.coords, None)
        object.__setattr__(self, "points", tuple(Point(c) for c in seen))

    @classmethod
    def of(cls, points: Iterable, dim: Optional[int] = None) -> "PointSet":
        pts = [p if isinstance(p, Point) else Point.of(p) for p in points]
        if dim is None:
            if not pts:
                raise ValueError("cannot infer dimension of an empty PointSet")
            dim = pts[0].dim
        return cls(tuple(pts), dim)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __contains__(self, p: Point) -> bool:
        return any(q.coords == p.coords for q in self.points)

    def to_json(self) -> dict:
        return {"dim": self.dim, "points": [p.to_json() for p in self.points]}

    @classmethod
    def from_json(cls, data: dict) -> "PointSet":
        return cls.of([Point.from_json(p) for p in data["points"]], dim=data["dim"])


@dataclass(frozen=True)
class AxisBox:
    """Closed axis-parallel box [lo_1, hi_1] x ... x [lo_d, hi_d]."""

    lo: Point
    hi: Point

    def __post_init__(self) -> None:
        if self.lo.dim != self.hi.dim:
            raise ValueError("box corners of different dimension")
        for a, b in zip(self.lo, self.hi):
            if a > b:
                raise ValueError("box needs lo <= hi on every axis")

    @classmethod
    def of(cls, lo: Iterable, hi: Iterable) -> "AxisBox":
        return cls(Point.of(lo), Point.of(hi))

    @property
    def dim(self) -> int:
        return self.lo.dim

    def volume(self) -> Fraction:
        v = Fraction(1)
        for a, b in zip(self.lo, self.hi):
            v *= b - a
        return v

    def contains(self, p: Point, open_interior: bool = False) -> bool:
        if open_interior:
            return all(a < x < b for a, x, b in zip(self.lo, p, self.hi))
        return all(a <= x <= b for a, x, b in zip(self.lo, p, self.hi))

    def intersects(self, other: "AxisBox") -> bool:
        return all(
            max(a1, a2) <= min(b1, b2)
            for a1, b1, a2, b2 in zip(self.lo, self.hi, other.lo, other.hi)
        )

    def contains_box(self, other: "AxisBox") -> bool:
        return all(
            a1 <= a2 and b2 <= b1
            for a1, b1, a2, b2 in zip(self.lo, self.hi, other.lo, other.hi)
        )

    def to_json(self) -> dict:
        return {"lo": self.lo.to_json(), "hi": self.hi.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "AxisBox":
        return cls(Point.from_json(data["lo"]), Point.from_json(data["hi"]))


def stratum_reps(breaks: Sequence[Fraction]) -> list[Fraction]:
    """Representative values for every stratum a sorted break list induces:
    the break values themselves plus a midpoint of each gap between
    consecutive distinct breaks.

    Any function that is constant between breaks (e.g. membership in a union
    of boxes whose walls sit on these breaks) takes every value it ever takes
    at one of these representatives.
    """
    reps: list[Fraction] = []
    for i, b in enumerate(breaks):
        if i:
            prev = breaks[i - 1]
            if b != prev:
                reps.append((prev + b) / 2)
        reps.append(b)
    return reps


@dataclass(frozen=True)
class BoxUnion:
    """Finite union of closed axis boxes of a common dimension.

    Volume and set comparisons work on the cell decomposition induced by the
    boxes' wall coordinates, so all answers are exact.
    """

    boxes: tuple[AxisBox, ...]
    dim: int

    def __post_init__(self) -> None:
        for b in self.boxes:
            if b.dim != self.dim:
                raise ValueError("mixed dimensions in BoxUnion")

    @classmethod
    def of(cls, boxes: Iterable[AxisBox], dim: Optional[int] = None) -> "BoxUnion":
        bs = tuple(boxes)
        if dim is None:
            if not bs:
                raise ValueError("cannot infer dimension of an empty BoxUnion")
            dim = bs[0].dim
        return cls(bs, dim)

    def is_empty(self) -> bool:
        return not self.boxes

    def contains(self, p: Point) -> bool:
        return any(b.contains(p) for b in self.boxes)

    def axis_breaks(self, axis: int, extra: Iterable[Fraction] = ()) -> list[Fraction]:
        vals = {b.lo[axis] for b in self.boxes} | {b.hi[axis] for b in self.boxes}
        vals.update(Fraction(v) for v in extra)
        return sorted(vals)

    def volume(self) -> Fraction:
        if not self.boxes:
            return Fraction(0)
        d = self.dim
        ranges = [(b.lo.coords, b.hi.coords) for b in self.boxes]

        def rec(boxes: list[tuple], axis: int) -> Fraction:
            if axis == d - 1:
                total = Fraction(0)
                cur = None
                for lo, hi in sorted((b[0][axis], b[1][axis]) for b in boxes):
                    if cur is None or lo > cur[1]:
                        if cur is not None:
                            total += cur[1] - cur[0]
                        cur = (lo, hi)
                    elif hi > cur[1]:
                        cur = (cur[0], hi)
                if cur is not None:
                    total += cur[1] - cur[0]
                return total
            breaks = sorted({b[0][axis] for b in boxes} | {b[1][axis] for b in boxes})
            total = Fraction(0)
            for i in range(len(breaks) - 1):
                lo, hi = breaks[i], breaks[i + 1]
                mid = (lo + hi) / 2
                alive = [b for b in boxes if b[0][axis] <= mid <= b[1][axis]]
                if alive:
                    total += (hi - lo) * rec(alive, axis + 1)
            return total

        return rec(ranges, 0)

    def union_subset(self, other: "BoxUnion") -> bool:
        """Exact test of self ⊆ other as point sets."""
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        if not self.boxes:
            return True
        d = self.dim
        mine = [(b.lo.coords, b.hi.coords) for b in self.boxes]
        theirs = [(b.lo.coords, b.hi.coords) for b in other.boxes]

        def covered_1d(sub: list[tuple], sup: list[tuple], axis: int) -> bool:
            pieces: list[tuple[Fraction, Fraction]] = []
            for lo, hi in sorted((b[0][axis], b[1][axis]) for b in sup):
                if pieces and lo <= pieces[-1][1]:
                    if hi > pieces[-1][1]:
                        pieces[-1] = (pieces[-1][0], hi)
                else:
                    pieces.append((lo, hi))
            # a closed interval is covered iff it sits in one connected piece
            for lo, hi in ((b[0][axis], b[1][axis]) for b in sub):
                if not any(plo <= lo and hi <= phi for plo, phi in pieces):
                    return False
            return True

        def rec(sub: list[tuple], sup: list[tuple], axis: int) -> bool:
            if not sub:
                return True
            if axis == d - 1:
                return covered_1d(sub, sup, axis)
            breaks = sorted(
                {b[0][axis] for b in sub}
                | {b[1][axis] for b in sub}
                | {b[0][axis] for b in sup}
                | {b[1][axis] for b in sup}
            )
            for rep in stratum_reps(breaks):
                sub_alive = [b for b in sub if b[0][axis] <= rep <= b[1][axis]]
                if not sub_alive:
                    continue
                sup_alive = [b for b in sup if b[0][axis] <= rep <= b[1][axis]]
                if not rec(sub_alive, sup_alive, axis + 1):
                    return False
            return True

        return rec(mine, theirs, 0)

    def same_set(self, other: "BoxUnion") -> bool:
        return self.union_subset(other) and other.union_subset(self)

    def simplify(self) -> "BoxUnion":
        """Drop duplicate boxes and boxes contained in a single other box."""
        uniq: list[AxisBox] = []
        seen = set()
        for b in self.boxes:
            key = (b.lo.coords, b.hi.coords)
            if key not in seen:
                seen.add(key)
                uniq.append(b)
        keep = [
            b
            for i, b in enumerate(uniq)
            if not any(j != i and other.contains_box(b) for j, other in enumerate(uniq))
        ]
        return BoxUnion(tuple(keep), self.dim)

    def to_json(self) -> dict:
        return {"dim": self.dim, "boxes": [b.to_json() for b in self.boxes]}

    @classmethod
    def from_json(cls, data: dict) -> "BoxUnion":
        return cls(tuple(AxisBox.from_json(b) for b in data["boxes"]), data["dim"])


@dataclass(frozen=True)
class StairPath:
    """Axis-parallel polyline: consecutive vertices differ in exactly one
    coordinate.  Degenerate (zero-length) segments are removed on
    construction; the first and last vertex are kept as given.
    """

    vertices: tuple[Point, ...]

    def __post_init__(self) -> None:
        if not self.vertices:
            raise ValueError("StairPath needs at least one vertex")
        d = self.vertices[0].dim
        cleaned: list[Point] = [self.vertices[0]]
        for v in self.vertices[1:]:
            if v.dim != d:
                raise ValueError("mixed dimensions in StairPath")
            if v.coords != cleaned[-1].coords:
                cleaned.append(v)
        for a, b in zip(cleaned, cleaned[1:]):
            diff = [i for i in range(d) if a[i] != b[i]]
            if len(diff) != 1:
                raise ValueError("StairPath segments must be axis-parallel")
        object.__setattr__(self, "vertices", tuple(cleaned))

    @property
    def dim(self) -> int:
        return self.vertices[0].dim

    @property
    def start(self) -> Point:
        return self.vertices[0]

    @property
    def end(self) -> Point:
        return self.vertices[-1]

    def segments(self) -> list[tuple[Point, Point, int]]:
        out = []
        for a, b in zip(self.vertices, self.vertices[1:]):
            axis = next(i for i in range(self.dim) if a[i] != b[i])
            out.append((a, b, axis))
        return out

    def covers(self, p: Point) -> bool:
        """Does the point lie on the polyline?"""
        if p.dim != self.dim:
            return False
        if len(self.vertices) == 1:
            return p.coords == self.vertices[0].coords
        for a, b, axis in self.segments():
            if all(p[i] == a[i] for i in range(self.dim) if i != axis):
                lo, hi = min(a[axis], b[axis]), max(a[axis], b[axis])
                if lo <= p[axis] <= hi:
                    return True
        return False

    def to_json(self) -> dict:
        return {"vertices": [v.to_json() for v in self.vertices]}

    @classmethod
    def from_json(cls, data: dict) -> "StairPath":
        return cls(tuple(Point.from_json(v) for v in data["vertices"]))
