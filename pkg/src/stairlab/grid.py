"""Stretched grids: doubly-exponential coordinate columns, the per-axis
dominance scales K_i, the far-apart relation, the order-preserving bijection
onto the uniform grid, and the diagonal point family.

The canonical (minimal) grid has x_{ij} = K_i^{j-1} with K_1 = 2^d and
K_i = 2^d · x_{(i-1)m}; any user-supplied columns satisfying the chain
condition K_i · x_{ij} ≤ x_{i(j+1)} are accepted by the validating
constructor, since the family is a class, not a single object.
"""

from __future__ import annotations

import itertools
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import check_guard
from .geometry import AxisBox, Point, PointSet
from .linalg import det
from .rational import parse_scalar, format_scalar

_GRIDBITS_CAP = 1_000_000
_GRIDPOINTS_CAP = 1 << 16


@dataclass(frozen=True)
class GridSpec:
    d: int
    m: int
    K: tuple[Fraction, ...]
    X: tuple[tuple[Fraction, ...], ...]
    B: AxisBox

    def column(self, axis: int) -> tuple[Fraction, ...]:
        return self.X[axis]

    def contains(self, p: Point) -> bool:
        return self.B.contains(p)

    def all_points(self) -> PointSet:
        """Every grid point; guarded, m^d blows up fast."""
        check_guard("GRIDPOINTS_CAP", self.m**self.d, _GRIDPOINTS_CAP, "grid points")
        pts = [Point(c) for c in itertools.product(*self.X)]
        return PointSet.of(pts, dim=self.d)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "m": self.m,
            "K": [format_scalar(k) for k in self.K],
            "X": [[format_scalar(x) for x in col] for col in self.X],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GridSpec":
        cols = [[parse_scalar(x) for x in col] for col in data["X"]]
        return make_grid(data["d"], data["m"], cols)


def make_grid(d: int, m: int, X: Sequence[Sequence]) -> GridSpec:
    """Validating constructor: accepts any columns that satisfy the grid
    invariants (first value 1, strictly increasing, chain K_i·x_{ij} ≤
    x_{i(j+1)} with the derived scales K_i)."""
    if d < 1:
        raise ValueError("need d >= 1")
    if m < 2:
        raise ValueError("need m >= 2")
    if len(X) != d:
        raise ValueError(f"expected {d} coordinate columns, got {len(X)}")
    cols = [tuple(parse_scalar(v) for v in col) for col in X]
    for i, col in enumerate(cols):
        if len(col) != m:
            raise ValueError(f"column {i} has {len(col)} values, expected {m}")
        if col[0] != 1:
            raise ValueError(f"column {i} must start at 1")
        if any(a >= b for a, b in zip(col, col[1:])):
            raise ValueError(f"column {i} must be strictly increasing")
    K: list[Fraction] = []
    for i in range(d):
        K.append(Fraction(2**d) if i == 0 else Fraction(2**d) * cols[i - 1][m - 1])
    for i in range(d):
        for j in range(m - 1):
            if K[i] * cols[i][j] > cols[i][j + 1]:
                raise ValueError(
                    f"chain condition fails on axis {i} between positions {j} and {j + 1}"
                )
    B = AxisBox(
        Point(tuple(Fraction(1) for _ in range(d))),
        Point(tuple(col[m - 1] for col in cols)),
    )
    return GridSpec(d, m, tuple(K), tuple(cols), B)


def build_grid(d: int, m: int) -> GridSpec:
    """Minimal stretched grid, x_{ij} = K_i^{j-1}.

    Coordinates are powers of two, so the size guard runs on exponents
    before any huge integer is materialized.
    """
    if d < 1:
        raise ValueError("need d >= 1")
    if m < 2:
        raise ValueError("need m >= 2")
    exps = [d]
    for _ in range(1, d):
        exps.append(d + exps[-1] * (m - 1))
    check_guard(
        "GRIDBITS_CAP",
        exps[-1] * (m - 1) + 1,
        _GRIDBITS_CAP,
        "bit length of the largest grid coordinate",
    )
    cols = []
    for e in exps:
        k = 1 << e
        cols.append([Fraction(k) ** j for j in range(m)])
    return make_grid(d, m, cols)


def far_apart(p: Point, q: Point, spec: GridSpec) -> bool:
    """Are p and q separated by a factor K_i on every axis (in one direction
    or the other)?"""
    for pt in (p, q):
        if pt.dim != spec.d:
            raise ValueError("dimension mismatch")
        if not spec.contains(pt):
            raise ValueError("point outside the grid bounding box")
    return all(
        spec.K[i] * min(p[i], q[i]) <= max(p[i], q[i]) for i in range(spec.d)
    )


def far_apart_sets(P: PointSet, Q: PointSet, spec: GridSpec) -> bool:
    """Every cross pair (p in P, q in Q) far apart."""
    return all(far_apart(p, q, spec) for p in P for q in Q)


def pi_map(p: Point, spec: GridSpec) -> Point:
    """Order-preserving bijection B → unit cube: affine on each cell
    [x_{ij}, x_{i(j+1)}], sending grid values to uniform-grid values."""
    if p.dim != spec.d:
        raise ValueError("dimension mismatch")
    if not spec.contains(p):
        raise ValueError("point outside the grid bounding box")
    m = spec.m
    out = []
    for i in range(spec.d):
        col = spec.X[i]
        jj = min(bisect_right(col, p[i]) - 1, m - 2)
        t = (p[i] - col[jj]) / (col[jj + 1] - col[jj])
        out.append((jj + t) / (m - 1))
    return Point(tuple(out))


def pi_inverse(u: Point, spec: GridSpec) -> Point:
    """Inverse of pi_map; defined on the unit cube."""
    if u.dim != spec.d:
        raise ValueError("dimension mismatch")
    if any(v < 0 or v > 1 for v in u):
        raise ValueError("point outside the unit cube")
    m = spec.m
    out = []
    for i in range(spec.d):
        col = spec.X[i]
        s = u[i] * (m - 1)
        jj = min(int(s), m - 2)
        t = s - jj
        out.append(col[jj] + t * (col[jj + 1] - col[jj]))
    return Point(tuple(out))


@dataclass(frozen=True)
class Diagonal:
    spec: GridSpec
    points: PointSet

    def __post_init__(self) -> None:
        if len(self.points) > self.spec.m:
            raise ValueError("diagonal longer than the grid side")
        for i in range(self.spec.d):
            vals = [p[i] for p in self.points]
            if any(a >= b for a, b in zip(vals, vals[1:])):
                raise ValueError("diagonal points must increase in every coordinate")

    def to_json(self) -> dict:
        return {"points": self.points.to_json()}


def diagonal(spec: GridSpec, n: int) -> Diagonal:
    """The first n diagonal grid points (x_{1j}, ..., x_{dj})."""
    if n > spec.m:
        raise ValueError("diagonal length exceeds grid side")
    if n < 0:
        raise ValueError("need n >= 0")
    pts = [Point(tuple(spec.X[i][j] for i in range(spec.d))) for j in range(n)]
    return Diagonal(spec, PointSet(tuple(pts), spec.d))


def check_curve_position(D: Union[Diagonal, PointSet]) -> bool:
    """General-position check: no d+1 of the points lie on a common
    hyperplane, decided by exact (d+1)x(d+1) determinants."""
    pts = D.points if isinstance(D, Diagonal) else D
    d = pts.dim
    n = len(pts)
    if n < d + 1:
        raise ValueError(f"need at least {d + 1} points")
    for sub in itertools.combinations(pts, d + 1):
        rows = [list(p.coords) + [Fraction(1)] for p in sub]
        if det(rows) == 0:
            return False
    return True
