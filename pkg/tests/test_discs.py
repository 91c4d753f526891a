import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from szdisc.boundary import AtomicMeasure, BlaschkeData, RationalOuter, grid_angles
from szdisc.discs import (
    Ball,
    Box,
    ClosedPolyDisc,
    FactoredComponent,
    FactoredDisc,
    LiftedDisc,
    SetGeometry,
    Shell,
    check_boundary_in,
    factor_polynomial,
    lift,
    lifted_from_polynomials,
    polynomial_sup_inflation,
    projective_ratio,
)
from szdisc.acceptance import random_factored_disc


def test_factor_polynomial_splits_inner_zeros():
    # (z - 0.5)(z - 3)
    c = np.polynomial.polynomial.polyfromroots([0.5, 3.0])
    B, h = factor_polynomial(c)
    assert B.degree == 1 and B.multiplicity(0.5) == 1
    z = np.array([0.1, -0.7j, 0.3 + 0.3j])
    assert np.allclose(B(z) * h(z), np.polynomial.polynomial.polyval(z, c))


def test_factor_polynomial_boundary_roots():
    c = np.polynomial.polynomial.polyfromroots([1j])
    with pytest.raises(ValueError):
        factor_polynomial(c)
    B, h = factor_polynomial(c, boundary_roots="outer")
    assert B.is_trivial
    assert h(0.2) == pytest.approx(0.2 - 1j)


@given(st.lists(st.tuples(st.floats(0.05, 3.0), st.floats(0, 6.28)), min_size=1, max_size=4))
def test_factor_polynomial_reproduces_polynomial(roots):
    r = [a * np.exp(1j * t) for a, t in roots if abs(a - 1) > 1e-3]
    if not r:
        return
    c = np.polynomial.polynomial.polyfromroots(r)
    B, h = factor_polynomial(c)
    z = 0.6 * np.exp(1j * grid_angles(16))
    assert np.allclose(B(z) * h(z), np.polynomial.polynomial.polyval(z, c), rtol=1e-8, atol=1e-10)


def test_closed_poly_disc_lifting():
    d = ClosedPolyDisc(([2.0, 1.5],))
    L = d.to_lifted()
    z = np.array([0.0, 0.5j, np.exp(0.3j)])
    assert np.allclose(L.project(z)[:, 0], d(z)[:, 0])
    assert np.allclose(d.lifted(z)[:, 0], 1.0)
    assert d == ClosedPolyDisc(([2.0, 1.5],))


def test_projective_ratio_marks_infinity():
    v = np.array([[0.0, 1.0], [2.0, 1.0]])
    out = projective_ratio(v)
    assert np.isinf(out[0, 0]) and out[1, 0] == 0.5


def test_component_rejects_shared_atoms():
    with pytest.raises(ValueError):
        FactoredComponent(sing_num=AtomicMeasure.point(1.0), sing_den=AtomicMeasure.point(1.0, 2.0))


def test_lifted_disc_needs_zeroth_component():
    with pytest.raises(ValueError):
        LiftedDisc((FactoredComponent.constant(1.0),))


@given(st.integers(0, 10**6))
def test_lift_projects_back(seed):
    f = random_factored_disc(np.random.default_rng(seed), 2)
    F = lift(f)
    z = np.array([0.0, 0.3 + 0.1j, -0.5j])
    assert np.allclose(F.project(z), f(z), rtol=1e-9, atol=1e-12)
    assert F.is_bounded()


def test_lift_of_counterexample_has_unit_denominator_join():
    comp = FactoredComponent(sing_den=AtomicMeasure.point(0.0, 1.0))
    F = lift(FactoredDisc((comp,)))
    assert F.zeroth.sing_num.total == 1.0
    assert F.components[1].sing_num.is_empty


# ---------------------------------------------------------------------------
# geometry


def test_ball_signed_distance():
    X = SetGeometry((Ball([0.0], 1.0),))
    assert X.signed_distance(np.array([[0.5]]))[0] == pytest.approx(0.5)
    assert X.signed_distance(np.array([[3.0]]))[0] == pytest.approx(-2.0)
    assert X.contains(np.array([[0.0]]))[0] and not X.contains(np.array([[1.0]]))[0]


def test_box_and_shell_distances():
    b = Box([0.0 + 0.0j], [2.0 + 2.0j])
    assert b.signed_distance(np.array([[1 + 1j]]))[0] == pytest.approx(1.0)
    assert b.signed_distance(np.array([[3 + 1j]]))[0] == pytest.approx(-1.0)
    s = Shell([0.0], 1.0)
    assert s.signed_distance(np.array([[1.0]]))[0] == pytest.approx(0.0)
    assert s.offset(0.1).signed_distance(np.array([[1.05]]))[0] == pytest.approx(0.05)


@pytest.mark.parametrize(
    "prims,want",
    [
        ((Ball([0.0], 1.0),), 2.0),
        ((Ball([0.0], 1.0), Ball([4.0], 1.0)), 6.0),
        ((Box([0.0], [3 + 4j]),), 5.0),
        ((Shell([1j], 2.0, 0.5),), 5.0),
        ((Ball([0.0, 0.0], 1.0),), 2.0),
    ],
)
def test_diameter(prims, want):
    assert SetGeometry(prims).diameter == pytest.approx(want)


def test_mixed_dimensions_rejected():
    with pytest.raises(ValueError):
        SetGeometry((Ball([0.0], 1.0), Ball([0.0, 0.0], 1.0)))


def test_offset_grows_set():
    X = SetGeometry((Ball([0.0], 1.0), Box([3.0], [4 + 1j])))
    p = np.array([[1.1], [2.95 + 0.5j]])
    assert not X.contains(p).any()
    assert X.offset(0.2).contains(p).all()


def test_compact_samples_lie_on_boundary():
    X = SetGeometry((Ball([0.0], 1.0), Box([3.0], [4 + 1j])))
    pts, pieces = X.compact_samples(256)
    assert np.allclose(X.signed_distance(pts[:, None]), 0.0, atol=1e-12)
    assert [k for k, _ in pieces] == ["circle"] + ["segment"] * 4


def test_sup_inflation():
    assert polynomial_sup_inflation([("circle", 1024)], 4) == pytest.approx(1 / (1 - 4 * np.pi / 1024))
    assert polynomial_sup_inflation([("segment", 16)], 4) == np.inf


def test_boundary_check_of_polynomial_disc():
    X = SetGeometry((Ball([0.0], 1.0),))
    inside = ClosedPolyDisc(([0.0, 0.5],))
    outside = ClosedPolyDisc(([0.0, 1.5],))
    assert check_boundary_in(inside, X, 256).accepted
    r = check_boundary_in(outside, X, 256)
    assert not r.accepted and r.worst_margin == pytest.approx(-0.5)


def test_boundary_check_skips_atoms():
    X = SetGeometry((Ball([0.0], 2.0),))
    # (1, s) with s a singular inner function: boundary values unimodular off the atom
    F = LiftedDisc((FactoredComponent.constant(1.0), FactoredComponent(sing_num=AtomicMeasure.point(0.0))))
    r = check_boundary_in(F, X, 1024)
    assert r.accepted and r.skipped_fraction == pytest.approx(1 / 1024)


def test_lifted_from_polynomials_matches_polynomials():
    polys = [[1.0, 0.2], [0.0, 1.0, 0.5]]
    L = lifted_from_polynomials(polys, den=(2.0, 0.3))
    z = np.array([0.2, 0.5j])
    want = np.polynomial.polynomial.polyval(z, polys[1]) / np.polynomial.polynomial.polyval(z, polys[0])
    assert np.allclose(L.project(z)[:, 0], want)
