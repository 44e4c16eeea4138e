import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from stairlab.geometry import AxisBox, BoxUnion, Point, PointSet
from stairlab.nets import make_fan
from stairlab.stair import (
    conv_contains,
    conv_intersects,
    erode,
    grid_count,
    is_stair_convex,
    point_types,
    sconv_contains,
    sconv_intersection_witness,
    sconv_intersects,
    stair_path,
    volume,
)

import oracles as O


def P(*coords):
    return Point.of(coords)


def PS(*pts):
    return PointSet.of([Point.of(p) for p in pts])


def BU(*boxes):
    return BoxUnion.of([AxisBox.of(lo, hi) for lo, hi in boxes])


def fan_union(anchor, k):
    return BoxUnion.of(make_fan(Point.of(anchor), k).boxes)


def as_tuples(S):
    return [(b.lo.coords, b.hi.coords) for b in S.boxes]


# ---------------------------------------------------------------------------
# point types


def test_point_types_examples():
    assert point_types(P(0, 0), P(1, 1)) == {0}
    assert point_types(P(2, 0), P(1, 1)) == {1}
    assert point_types(P(1, 1), P(1, 1)) == {0, 1, 2}


def test_point_types_dimension_mismatch():
    with pytest.raises(ValueError):
        point_types(P(1), P(1, 2))


def test_point_types_nonempty_iff_applicable():
    # q strictly above in the last axis, strictly below in the first:
    # type d applies, nothing else
    assert point_types(P(0, 5), P(1, 1)) == {2}


# ---------------------------------------------------------------------------
# sconv_contains (with the rasterized-closure oracle)


def test_sconv_contains_examples():
    X = PS((0, 0), (1, 0), (0, 1))
    assert sconv_contains(X, P("1/2", "1/2")) is True

    single = PS((0, 0))
    assert sconv_contains(single, P(0, 0)) is True
    assert sconv_contains(single, P(1, 0)) is False

    assert sconv_contains(PS((0, 0), (1, 0)), P("1/2", "1/2")) is False


def test_sconv_contains_members_and_monotone():
    rng = random.Random(3)
    for _ in range(20):
        pts = [(rng.randint(0, 8), rng.randint(0, 8)) for _ in range(4)]
        X = PointSet.of(pts)
        for x in X:
            assert sconv_contains(X, x)
        probe = P(rng.randint(0, 8), rng.randint(0, 8))
        bigger = PointSet.of(list(pts) + [(rng.randint(0, 8), rng.randint(0, 8))])
        if sconv_contains(X, probe):
            assert sconv_contains(bigger, probe)


@pytest.mark.parametrize("d,side,npts", [(2, 9, 4), (2, 16, 3), (3, 5, 4)])
def test_sconv_agrees_with_lattice_closure(d, side, npts):
    rng = random.Random(d * 100 + side)
    for _ in range(3):
        seeds = {
            tuple(rng.randint(0, side - 1) for _ in range(d)) for _ in range(npts)
        }
        closure = O.stair_closure(seeds)
        X = PointSet.of([tuple(map(Fraction, s)) for s in seeds])
        for lattice_pt in itertools.product(range(side), repeat=d):
            got = sconv_contains(X, Point.of(tuple(map(Fraction, lattice_pt))))
            assert got == (lattice_pt in closure), (seeds, lattice_pt)


def test_lemma3_coordinate_sharing():
    # rasterized hull members share >= d-k+1 coordinate values with the set
    rng = random.Random(17)
    d = 3
    for _ in range(10):
        k = rng.randint(1, d + 1)
        pts = [tuple(rng.randint(0, 4) for _ in range(d)) for _ in range(k)]
        X = PointSet.of([tuple(map(Fraction, p)) for p in pts])
        for lattice_pt in itertools.product(range(5), repeat=d):
            if not sconv_contains(X, Point.of(tuple(map(Fraction, lattice_pt)))):
                continue
            shared = sum(
                1
                for i in range(d)
                if any(Fraction(lattice_pt[i]) == Fraction(p[i]) for p in pts)
            )
            assert shared >= d - k + 1


# ---------------------------------------------------------------------------
# stair paths


def test_stair_path_shape():
    sp = stair_path(P(0, 0), P(1, 1))
    assert [v.coords for v in sp.vertices] == [
        (Fraction(0), Fraction(0)),
        (Fraction(0), Fraction(1)),
        (Fraction(1), Fraction(1)),
    ]


@given(
    st.lists(st.integers(-6, 6), min_size=3, max_size=3),
    st.lists(st.integers(-6, 6), min_size=3, max_size=3),
    st.lists(st.integers(-3, 3), min_size=3, max_size=3),
)
def test_stair_path_properties(a, b, shift):
    pa, pb = Point.of(map(Fraction, a)), Point.of(map(Fraction, b))
    sp = stair_path(pa, pb)
    verts = [v.coords for v in sp.vertices]
    assert verts[0] == pa.coords and verts[-1] == pb.coords
    assert len(verts) - 1 <= 3
    # each coordinate monotone along the path, and each segment axis-parallel
    for u, v in zip(verts, verts[1:]):
        assert sum(1 for i in range(3) if u[i] != v[i]) == 1
    for i in range(3):
        seq = [v[i] for v in verts]
        assert seq == sorted(seq) or seq == sorted(seq, reverse=True)
    # translation invariance
    t = tuple(map(Fraction, shift))
    shifted = stair_path(
        Point.of(x + y for x, y in zip(pa.coords, t)),
        Point.of(x + y for x, y in zip(pb.coords, t)),
    )
    assert [v.coords for v in shifted.vertices] == [
        tuple(x + y for x, y in zip(v, t)) for v in verts
    ]


# ---------------------------------------------------------------------------
# sconv_intersects


def test_sconv_intersects_examples():
    assert sconv_intersects(PS((0, 0), (3, 3)), PS((1, 2))) is False
    assert sconv_intersects(PS((0, 0), (3, 3)), PS((2, -1), (1, 4))) is True
    w = sconv_intersection_witness(PS((0, 0), (3, 3)), PS((2, -1), (1, 4)))
    assert w is not None and w.coords == (Fraction(2), Fraction(3))
    # singletons: total size 2 < d+2
    assert sconv_intersects(PS((0, 0)), PS((1, 1))) is False


def test_sconv_intersects_shared_coordinate_rejected():
    with pytest.raises(ValueError):
        sconv_intersects(PS((0, 0), (3, 3)), PS((0, 5)))


def test_lemma7a_small_sizes_false():
    rng = random.Random(23)
    d = 3
    for _ in range(30):
        # choose coordinate pools so no value repeats across the two sets
        vals = rng.sample(range(40), 12)
        p1 = tuple(map(Fraction, vals[0:3]))
        p2 = tuple(map(Fraction, vals[3:6]))
        q1 = tuple(map(Fraction, vals[6:9]))
        total_sets = [PS(p1, p2), PS(q1)]  # |P|+|Q| = 3 < d+2 = 5
        assert sconv_intersects(total_sets[0], total_sets[1]) is False


# ---------------------------------------------------------------------------
# conv_contains / conv_intersects (exact 2D polygon oracle)


def test_conv_contains_examples():
    X = PS((0, 0), (1, 0), (0, 1))
    assert conv_contains(X, P("1/2", "1/2")) is True
    assert conv_contains(X, P(2, 2)) is False
    assert conv_contains(PS((0, 0), (2, 2)), P(1, 1)) is True


def test_conv_intersects_examples():
    assert conv_intersects(PS((0, 0), (2, 0)), PS((1, -1), (1, 1))) is True
    assert conv_intersects(PS((0, 0)), PS((1, 1))) is False


def test_conv_ops_agree_with_polygon_oracle():
    rng = random.Random(41)
    for trial in range(250):
        P_pts = [
            (Fraction(rng.randint(-6, 6)), Fraction(rng.randint(-6, 6)))
            for _ in range(rng.randint(1, 4))
        ]
        Q_pts = [
            (Fraction(rng.randint(-6, 6)), Fraction(rng.randint(-6, 6)))
            for _ in range(rng.randint(1, 4))
        ]
        got = conv_intersects(PointSet.of(P_pts), PointSet.of(Q_pts))
        want = O.hulls_intersect_2d(P_pts, Q_pts)
        assert got == want, (P_pts, Q_pts)

        q = (Fraction(rng.randint(-6, 6)), Fraction(rng.randint(-6, 6)))
        got_c = conv_contains(PointSet.of(P_pts), Point.of(q))
        assert got_c == O.point_in_hull_2d(P_pts, q), (P_pts, q)


def test_conv_intersects_dense_combination_3d():
    # one-sided cross-check in dimension 3
    rng = random.Random(43)
    for _ in range(40):
        P_pts = [
            tuple(Fraction(rng.randint(0, 4)) for _ in range(3)) for _ in range(3)
        ]
        Q_pts = [
            tuple(Fraction(rng.randint(0, 4)) for _ in range(3)) for _ in range(3)
        ]
        got = conv_intersects(PointSet.of(P_pts), PointSet.of(Q_pts))
        if O.dense_combination_hits(P_pts, Q_pts, grain=4):
            assert got is True


# ---------------------------------------------------------------------------
# erode


def test_erode_single_box():
    S = BU((("0", "0"), ("1", "1")))
    out = erode(S, Fraction(1, 4))
    assert volume(out) == Fraction(9, 16)
    expect = BU((("0", "0"), ("3/4", "3/4")))
    assert volume(out) == volume(expect)
    assert O.union_volume_incl_excl(as_tuples(out)) == Fraction(9, 16)


def test_erode_l_shape_example():
    S = BU((("0", "0"), ("1/2", "1")), (("0", "0"), ("1", "1/2")))
    out = erode(S, Fraction(1, 4))
    expect = [
        ((Fraction(0), Fraction(0)), (Fraction(1, 4), Fraction(3, 4))),
        ((Fraction(0), Fraction(0)), (Fraction(3, 4), Fraction(1, 4))),
    ]
    # same set: identical volume and identical membership over a fine lattice
    assert volume(out) == O.union_volume_incl_excl(expect)
    got = as_tuples(out)
    for i in range(0, 17):
        for j in range(0, 17):
            p = (Fraction(i, 16), Fraction(j, 16))
            assert O.in_union(got, p) == O.in_union(expect, p), p


def test_erode_delta_exceeding_sides():
    S = BU((("0", "0"), ("1/4", "1/4")))
    assert erode(S, Fraction(1, 2)).is_empty()


def test_erode_matches_pointwise_cube_oracle():
    rng = random.Random(7)
    for _ in range(12):
        anchor = (Fraction(rng.randint(2, 4), 4), Fraction(rng.randint(2, 4), 4))
        k = rng.randint(2, 4)
        S = fan_union(anchor, k)
        delta = Fraction(1, rng.choice([8, 16]))
        out = erode(S, delta)
        got = as_tuples(out)
        src = as_tuples(S)
        for _ in range(40):
            p = (Fraction(rng.randint(0, 32), 32), Fraction(rng.randint(0, 32), 32))
            assert O.in_union(got, p) == O.cube_inside_union(src, p, delta), (
                anchor,
                k,
                delta,
                p,
            )


def test_erode_preserves_stair_convexity_and_inequalities():
    rng = random.Random(9)
    for _ in range(10):
        anchor = (Fraction(rng.randint(2, 4), 4), Fraction(rng.randint(2, 4), 4))
        S = fan_union(anchor, rng.randint(2, 4))
        assert is_stair_convex(S)
        delta = Fraction(1, 16)
        out = erode(S, delta)
        assert is_stair_convex(out)
        assert volume(out) >= volume(S) - 2 * delta


# ---------------------------------------------------------------------------
# volume / grid_count


def test_volume_and_grid_count_examples():
    S = BU((("0", "0"), ("1", "1")))
    assert volume(S) == 1
    assert grid_count(S, 3) == 9
    assert abs(grid_count(S, 3) - 4 * 1) <= 2 * 3

    two = BU((("0", "0"), ("1/4", "1/4")), (("1/2", "1/2"), ("3/4", "3/4")))
    assert volume(two) == Fraction(1, 16) + Fraction(1, 16)


def test_volume_matches_inclusion_exclusion():
    rng = random.Random(13)
    for _ in range(25):
        boxes = []
        for _ in range(rng.randint(1, 5)):
            lo = tuple(Fraction(rng.randint(0, 6), 8) for _ in range(2))
            hi = tuple(v + Fraction(rng.randint(1, 3), 8) for v in lo)
            boxes.append((lo, hi))
        S = BoxUnion.of([AxisBox.of(lo, hi) for lo, hi in boxes])
        assert volume(S) == O.union_volume_incl_excl(boxes)


def test_grid_count_matches_naive_loop():
    rng = random.Random(19)
    for _ in range(10):
        anchor = (Fraction(rng.randint(2, 4), 4), Fraction(rng.randint(2, 4), 4))
        S = fan_union(anchor, rng.randint(2, 4))
        m = rng.choice([3, 5, 9])
        assert grid_count(S, m) == O.grid_count_naive(as_tuples(S), m, 2)


def test_grid_corollary_for_stair_convex_unions():
    rng = random.Random(29)
    d = 2
    for _ in range(10):
        anchor = (Fraction(rng.randint(2, 4), 4), Fraction(rng.randint(2, 4), 4))
        S = fan_union(anchor, rng.randint(2, 5))
        assert is_stair_convex(S)
        for m in (3, 5, 8):
            g = grid_count(S, m)
            assert abs(g - (m - 1) ** d * volume(S)) <= d * m ** (d - 1)


# ---------------------------------------------------------------------------
# is_stair_convex


def test_is_stair_convex_examples():
    assert is_stair_convex(BU((("0", "0"), ("1", "1")))) is True
    fan = fan_union(("3/4", "3/4"), 3)
    assert is_stair_convex(fan) is True
    split = BU((("0", "0"), ("1/4", "1/4")), (("3/4", "3/4"), ("1", "1")))
    assert is_stair_convex(split) is False
