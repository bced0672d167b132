import math
from fractions import Fraction

import pytest

import diffbody as db

CUBE = [[x, y, z] for x in (0, 1) for y in (0, 1) for z in (0, 1)]
CENTERED_CUBE = [[2 * c - 1 for c in v] for v in CUBE]
TRIANGLE = [[0, 0], [1, 0], [0, 1]]


def test_exact_values():
    assert db.volume(CUBE) == 1
    assert db.schneider_functional(TRIANGLE, 2) == 15
    assert db.schneider_functional(CUBE, 2) == 27
    assert db.schneider_functional([[0], [1]], 3) == 4
    assert db.polar_volume(CENTERED_CUBE) == Fraction(4, 3)


def test_mdiff_of_intervals():
    verts = db.mdiff([[[0], [1]]] * 3)
    assert len(verts) == 6
    assert db.volume(verts) == 3


def test_steiner_counterexample_body():
    c3 = db.steiner_symmetral(CENTERED_CUBE, [1, 1, 1])
    assert len(c3) == 8
    assert db.volume(c3) == 8
    assert db.schneider_functional(c3, 2) - db.schneider_functional(CENTERED_CUBE, 2) == Fraction(3, 4)
    e = db.eli_identity(c3)
    assert e["equal"] and e["lhs"] == 111


def test_polar_ratio_and_ball():
    r, err = db.polar_schneider_ratio(CUBE, 2, samples=20000, seed=3)
    assert r < 1 - 3 * err
    b, _ = db.polar_schneider_ratio({"ball": {"dim": 3, "radius": "1"}}, 2, samples=1000, seed=3)
    assert b == pytest.approx(1, abs=1e-12)


def test_gaussian_side():
    assert db.schneider_constant(1, 1) == pytest.approx(math.pi, rel=1e-14)
    A = [[[2.0, 0.3], [0.3, 1.0]], [[1.0, 0.0], [0.0, 1.5]], [[0.7, -0.1], [-0.1, 0.9]]]
    direct, via, rel = db.det_identity(A)
    assert rel <= 1e-9
    assert db.f_objective(A) <= db.f_bound(2, 2) * (1 + 1e-9)
    eye = {"amplitude": 1.0, "matrix": [[1.0]]}
    r = db.functional_lhs([eye, eye], samples=50000, seed=2)
    value, err = r["lhs"]
    assert abs(value - math.pi) <= 3 * err
    p = db.poincare({"family": "squared_norm"}, 2, 2, samples=20000, seed=4)
    assert p["holds"]


def test_errors_surface_as_exceptions():
    with pytest.raises(db.DiffbodyError, match="BudgetExceeded"):
        db.schneider_functional(CUBE, 3)
    with pytest.raises(db.DiffbodyError):
        db.polar_volume(CUBE)


def test_suite_report():
    rep = db.run_suite("kernel", samples=20000, timing=False)
    assert rep["suite"] == "kernel"
    assert all(c["status"] == "pass" for c in rep["checks"])
    assert rep == db.run_suite("kernel", samples=20000, timing=False)
