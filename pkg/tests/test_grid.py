import random
from fractions import Fraction

import pytest

from stairlab.errors import GuardError
from stairlab.geometry import Point, PointSet
from stairlab.grid import (
    build_grid,
    check_curve_position,
    diagonal,
    far_apart,
    far_apart_sets,
    make_grid,
    pi_inverse,
    pi_map,
)


def test_build_grid_2_3():
    spec = build_grid(2, 3)
    assert spec.K == (4, 64)
    assert spec.X[0] == (1, 4, 16)
    assert spec.X[1] == (1, 64, 4096)


def test_build_grid_1_2():
    spec = build_grid(1, 2)
    assert spec.K == (2,)
    assert spec.X[0] == (1, 2)


def test_build_grid_3_2():
    spec = build_grid(3, 2)
    assert spec.K == (8, 64, 512)
    assert spec.X == ((1, 8), (1, 64), (1, 512))


def test_grid_invariants_minimal():
    for d, m in ((2, 4), (3, 3)):
        spec = build_grid(d, m)
        assert spec.K[0] == 2**d
        for i in range(1, d):
            assert spec.K[i] == 2**d * spec.X[i - 1][-1]
        for i in range(d):
            for j in range(m - 1):
                # chain condition with equality for the minimal grid
                assert spec.K[i] * spec.X[i][j] == spec.X[i][j + 1]
            assert spec.X[i][0] == 1


def test_build_grid_guard():
    with pytest.raises(GuardError):
        build_grid(6, 40)


def test_make_grid_validates_chain():
    make_grid(2, 3, [[1, 4, 16], [1, 64, 4096]])
    # K_1 = 4, so the first axis must grow at least 4x per step
    with pytest.raises(ValueError):
        make_grid(2, 3, [[1, 3, 16], [1, 64, 4096]])
    with pytest.raises(ValueError):
        make_grid(2, 3, [[1, 4, 15], [1, 64, 4096]])


def test_far_apart_examples():
    spec = build_grid(2, 3)
    assert far_apart(Point.of((1, 1)), Point.of((16, 4096)), spec) is True
    assert far_apart(Point.of((4, 64)), Point.of((16, 64)), spec) is False
    assert far_apart(Point.of((4, 64)), Point.of((4, 64)), spec) is False


def test_far_apart_out_of_box():
    spec = build_grid(2, 3)
    with pytest.raises(ValueError):
        far_apart(Point.of((0, 1)), Point.of((4, 64)), spec)


def test_grid_points_differing_everywhere_are_far_apart():
    spec = build_grid(2, 4)
    pts = [(i, j) for i in range(4) for j in range(4)]
    for (i1, j1) in pts:
        for (i2, j2) in pts:
            if i1 != i2 and j1 != j2:
                p = Point.of((spec.X[0][i1], spec.X[1][j1]))
                q = Point.of((spec.X[0][i2], spec.X[1][j2]))
                assert far_apart(p, q, spec)


def test_far_apart_sets_cross_pairs():
    spec = build_grid(2, 3)
    P = PointSet.of([(1, 1)])
    Q = PointSet.of([(16, 4096)])
    assert far_apart_sets(P, Q, spec) is True
    Q2 = PointSet.of([(16, 4096), (1, 4096)])
    assert far_apart_sets(P, Q2, spec) is False  # first coords equal


def test_pi_map_examples():
    spec = build_grid(2, 3)
    assert pi_map(Point.of((4, 64)), spec).coords == (Fraction(1, 2), Fraction(1, 2))
    assert pi_map(Point.of((1, 1)), spec).coords == (Fraction(0), Fraction(0))
    assert pi_map(Point.of((16, 4096)), spec).coords == (Fraction(1), Fraction(1))
    assert pi_map(Point.of((2, 1)), spec).coords == (Fraction(1, 6), Fraction(0))


def test_pi_round_trip_and_order():
    spec = build_grid(2, 3)
    rng = random.Random(31)
    samples = []
    for _ in range(30):
        x = 1 + Fraction(rng.randint(0, 15 * 4), 4)
        y = 1 + Fraction(rng.randint(0, 4095 * 2), 2)
        p = Point.of((x, y))
        u = pi_map(p, spec)
        assert all(Fraction(0) <= c <= Fraction(1) for c in u.coords)
        back = pi_inverse(u, spec)
        assert back.coords == p.coords
        samples.append(p)
    for p in samples:
        for q in samples:
            u, v = pi_map(p, spec), pi_map(q, spec)
            for i in range(2):
                assert (p[i] < q[i]) == (u[i] < v[i])


def test_pi_domain_errors():
    spec = build_grid(2, 3)
    with pytest.raises(ValueError):
        pi_map(Point.of((17, 1)), spec)
    with pytest.raises(ValueError):
        pi_inverse(Point.of((2, 0)), spec)


def test_diagonal_examples():
    spec = build_grid(2, 3)
    D = diagonal(spec, 3)
    assert [p.coords for p in D.points] == [
        (Fraction(1), Fraction(1)),
        (Fraction(4), Fraction(64)),
        (Fraction(16), Fraction(4096)),
    ]
    assert len(diagonal(spec, 1).points) == 1
    assert len(diagonal(spec, 0).points) == 0
    with pytest.raises(ValueError):
        diagonal(spec, 4)


def test_curve_position_examples():
    spec = build_grid(2, 3)
    assert check_curve_position(diagonal(spec, 3)) is True
    collinear = PointSet.of([(1, 1), (2, 2), (3, 3)])
    assert check_curve_position(collinear) is False
    spec34 = build_grid(3, 4)
    assert check_curve_position(diagonal(spec34, 4)) is True


def test_curve_position_needs_enough_points():
    spec = build_grid(2, 3)
    with pytest.raises(ValueError):
        check_curve_position(diagonal(spec, 2))
