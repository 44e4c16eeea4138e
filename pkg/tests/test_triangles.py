import math
import random
from fractions import Fraction

import pytest

from stairlab.errors import GuardError
from stairlab.geometry import Point, PointSet
from stairlab.grid import build_grid
from stairlab.triangles import (
    IncreasingTriangle,
    TriangleFamily,
    class_count_bound,
    count_containing,
    count_simplices_containing,
    gen_thin_triangles,
    probe_report,
    rho_for,
    type_class_sizes,
)

import oracles as O


# ---------------------------------------------------------------------------
# thinness scale


def test_rho_for_boundary_rejections():
    n = 81
    with pytest.raises(ValueError):
        rho_for(n, n**3)  # past binomial(n,3); the log term would vanish
    with pytest.raises(ValueError):
        rho_for(n, n**2)  # below the accepted power range
    with pytest.raises(ValueError):
        rho_for(2, 4)


def test_rho_for_midrange_positive():
    rho = rho_for(81, 70000)
    assert isinstance(rho, Fraction)
    assert rho > 0


def test_rho_for_linear_in_C():
    r1 = rho_for(81, 70000, 1)
    r2 = rho_for(81, 70000, 2)
    # both values are outward-rounded at 96 bits, so doubling is exact up
    # to one rounding step on each side
    assert abs(r2 - 2 * r1) <= Fraction(1, 2**90)
    assert r2 > r1


def test_rho_for_acceptance_scale():
    # the m=30 planned family: 900 grid points, 2^26 target triangles
    rho = rho_for(900, 2**26)
    assert 0 < rho < 1


# ---------------------------------------------------------------------------
# family generation


def _allowed_pairs(side: int, cap) -> int:
    return sum(
        1 for a in range(1, side + 1) for b in range(1, side + 1) if a * b <= cap
    )


def test_gen_family_m9_exact_count():
    spec = build_grid(2, 9)
    F = gen_thin_triangles(spec, Fraction(1, 9))
    assert F.mid_lo == 3 and F.mid_hi == 6
    assert F.cell_count() == 16
    assert len(F.classes) == 81
    assert len(F) == 1296


def test_gen_family_empty_when_budget_below_one():
    spec = build_grid(2, 9)
    F = gen_thin_triangles(spec, Fraction(1, 100))
    assert len(F) == 0


def test_gen_family_count_follows_allowed_region():
    # count = (allowed h12,v23 pairs) x free offsets x middle cells
    spec = build_grid(2, 9)
    side = 3
    sizes = []
    for num in (1, 2, 3, 6, 9):
        rho = Fraction(num, 81)
        F = gen_thin_triangles(spec, rho)
        pairs = _allowed_pairs(side, rho * 81)
        assert len(F.classes) == pairs * side**2
        assert len(F) == len(F.classes) * F.cell_count()
        sizes.append(len(F))
    assert sizes == sorted(sizes)


def test_gen_family_members_satisfy_constraints():
    # re-validate every member against the three constraints without
    # trusting the generator's own bookkeeping
    spec = build_grid(2, 9)
    m = spec.m
    rho = Fraction(1, 27)
    F = gen_thin_triangles(spec, rho)
    n_members = 0
    for tri in F.triangles():
        n_members += 1
        assert math.ceil(m / 3) <= tri.i2 <= (2 * m) // 3
        assert math.ceil(m / 3) <= tri.j2 <= (2 * m) // 3
        assert max(tri.dims()) <= m // 3
        assert tri.h12 * tri.v23 <= rho * m**2
    assert n_members == len(F)


def test_family_rejects_fat_class():
    spec = build_grid(2, 9)
    with pytest.raises(ValueError):
        TriangleFamily(spec, Fraction(1, 81), ((1, 1, 1, 2),), 4, 5)


def test_family_json_round_trip():
    spec = build_grid(2, 9)
    F = gen_thin_triangles(spec, Fraction(1, 27))
    G = TriangleFamily.from_json(F.to_json())
    assert G.classes == F.classes
    assert (G.mid_lo, G.mid_hi) == (F.mid_lo, F.mid_hi)
    assert len(G) == len(F)


def test_increasing_triangle_validation():
    with pytest.raises(ValueError):
        IncreasingTriangle(1, 1, 2, 2, 2, 3)  # i2 = i3
    t = IncreasingTriangle(1, 2, 3, 5, 4, 9)
    assert t.dims() == (2, 1, 3, 4)


# ---------------------------------------------------------------------------
# exact probe counting


def _centroid(verts):
    return Point.of(
        (sum(v[0] for v in verts) / 3, sum(v[1] for v in verts) / 3)
    )


def test_count_far_outside_is_zero():
    spec = build_grid(2, 9)
    F = gen_thin_triangles(spec, Fraction(1, 9))
    assert count_containing(Point.of((-(10**9), -(10**9))), F) == 0
    assert count_containing(Point.of((10**60, 7)), F) == 0


def test_count_single_triangle_vertex_probe():
    # one class, one middle cell: probing at p2 hits the (closed) member
    spec = build_grid(2, 9)
    F = TriangleFamily(spec, Fraction(1, 9), ((1, 1, 1, 1),), 4, 4)
    assert len(F) == 1
    (tri,) = F.triangles()
    p2 = tri.vertices(spec)[1]
    assert count_containing(p2, F) == 1


def test_count_centroid_matches_per_triangle_oracle():
    spec = build_grid(2, 9)
    F = gen_thin_triangles(spec, Fraction(1, 9))
    member = list(F.triangles())[100]
    q = _centroid(member.vertices(spec))
    expected = 0
    for tri in F.triangles():
        verts = [tuple(v.coords) for v in tri.vertices(spec)]
        if O.triangle_contains(verts, tuple(q.coords)):
            expected += 1
    assert expected > 0
    assert count_containing(q, F) == expected


def test_count_invariant_under_class_permutation():
    spec = build_grid(2, 9)
    F = gen_thin_triangles(spec, Fraction(1, 9))
    member = list(F.triangles())[100]
    q = _centroid(member.vertices(spec))
    rng = random.Random(3)
    shuffled = list(F.classes)
    rng.shuffle(shuffled)
    G = TriangleFamily(spec, F.rho, tuple(shuffled), F.mid_lo, F.mid_hi)
    assert count_containing(q, G) == count_containing(q, F)


def test_count_translation_invariance_via_oracle():
    # exact counting agrees with the oracle applied to a jointly
    # translated copy of probe and vertices
    spec = build_grid(2, 9)
    F = gen_thin_triangles(spec, Fraction(1, 27))
    member = list(F.triangles())[37]
    q = _centroid(member.vertices(spec))
    shift = (Fraction(123, 7), Fraction(-991, 13))
    moved = 0
    for tri in F.triangles():
        verts = [
            (v[0] + shift[0], v[1] + shift[1]) for v in tri.vertices(spec)
        ]
        if O.triangle_contains(verts, (q[0] + shift[0], q[1] + shift[1])):
            moved += 1
    assert count_containing(q, F) == moved


def test_class_count_bound_examples():
    spec = build_grid(2, 9)
    F = gen_thin_triangles(spec, Fraction(1, 9))
    far = Point.of((-5, -5))
    count, bound = class_count_bound(far, F, (1, 1, 1, 1))
    assert (count, bound) == (0, 1 + 72)
    # the fattest admitted class: h12*v23 = 9 at m = 9
    member = IncreasingTriangle(1, 1, 4, 4, 5, 7)
    q = _centroid(member.vertices(spec))
    count9, bound9 = class_count_bound(q, F, (3, 1, 3, 3))
    assert bound9 == 9 + 72
    assert 0 <= count9 <= bound9
    # bound grows with the h12*v23 budget
    assert bound9 > bound
    with pytest.raises(ValueError):
        class_count_bound(q, F, (7, 1, 1, 7))


def test_probe_report_consistency():
    spec = build_grid(2, 9)
    F = gen_thin_triangles(spec, Fraction(1, 9))
    member = list(F.triangles())[500]
    q = _centroid(member.vertices(spec))
    rep = probe_report(q, F)
    assert rep.total == count_containing(q, F)
    assert rep.total == sum(rep.per_class.values())
    assert rep.worst_count == rep.per_class[rep.worst_class]
    assert rep.worst_count <= rep.worst_bound
    wc = rep.worst_class
    assert rep.worst_bound == wc[0] * wc[3] + 8 * spec.m


def test_probe_report_empty():
    spec = build_grid(2, 9)
    F = gen_thin_triangles(spec, Fraction(1, 9))
    rep = probe_report(Point.of((-1, -1)), F)
    assert rep.total == 0
    assert rep.worst_class is None
    assert rep.per_class == {}


# ---------------------------------------------------------------------------
# type classes and simplex counting


def test_type_class_sizes_small_grid():
    spec = build_grid(2, 3)
    X = spec.all_points()
    sizes = type_class_sizes(Point.of((5, 65)), X)
    assert sizes == (4, 2, 3)


def test_type_class_sizes_probe_below_everything():
    spec = build_grid(2, 3)
    X = spec.all_points()
    sizes = type_class_sizes(Point.of((Fraction(1, 2), Fraction(1, 2))), X)
    assert sizes[0] == 0
    assert math.prod(sizes) == 0


def test_type_class_sizes_shared_coordinate_warns():
    spec = build_grid(2, 3)
    X = spec.all_points()
    q = Point.of((spec.X[0][1], 17))
    with pytest.warns(UserWarning):
        type_class_sizes(q, X)


def test_type_class_sizes_am_gm():
    spec = build_grid(2, 4)
    X = spec.all_points()
    n = len(X)
    rng = random.Random(5)
    for _ in range(20):
        q = Point.of(
            (
                Fraction(rng.randint(1, 2**18) * 2 + 1, 2),
                Fraction(rng.randint(1, 2**40) * 2 + 1, 2),
            )
        )
        sizes = type_class_sizes(q, X)
        assert sum(sizes) >= n  # every point lands somewhere
        assert math.prod(sizes) <= Fraction(sum(sizes), 3) ** 3


def test_count_simplices_frozen_small_grid():
    spec = build_grid(2, 3)
    X = spec.all_points()
    q = Point.of((5, 65))
    total = count_simplices_containing(q, X)
    assert total == 24
    far = count_simplices_containing(q, X, only_far_apart=True, spec=spec)
    assert far <= math.prod(type_class_sizes(q, X))


def test_count_simplices_outside_hull_and_tiny():
    spec = build_grid(2, 3)
    X = spec.all_points()
    assert count_simplices_containing(Point.of((-1, -1)), X) == 0
    single = PointSet.of([(1, 1)])
    assert count_simplices_containing(Point.of((1, 1)), single) == 0


def test_count_simplices_needs_spec_for_far_filter():
    spec = build_grid(2, 3)
    X = spec.all_points()
    with pytest.raises(ValueError):
        count_simplices_containing(Point.of((5, 65)), X, only_far_apart=True)


def test_count_simplices_guard():
    spec = build_grid(2, 20)
    X = spec.all_points()
    with pytest.raises(GuardError):
        count_simplices_containing(Point.of((5, 65)), X)


def _far_apart_cap_holds(spec, rng, probes):
    X = spec.all_points()
    d = spec.d
    for _ in range(probes):
        coords = []
        for i in range(d):
            hi = int(spec.X[i][-1])
            # stay strictly inside the grid box; half-integers never
            # collide with the integer columns
            coords.append(rng.randint(1, hi - 1) + Fraction(1, 2))
        q = Point.of(coords)
        sizes = type_class_sizes(q, X)
        far = count_simplices_containing(q, X, only_far_apart=True, spec=spec)
        assert far <= math.prod(sizes)


def test_far_apart_count_capped_by_type_product_2d():
    rng = random.Random(11)
    for m in (3, 4, 5):
        _far_apart_cap_holds(build_grid(2, m), rng, 3)


def test_far_apart_count_capped_by_type_product_3d():
    rng = random.Random(13)
    _far_apart_cap_holds(build_grid(3, 3), rng, 3)
