import numpy as np
import pytest

from szdisc.acceptance import two_discs, unit_disc
from szdisc.discs import Ball, Box, SetGeometry, check_boundary_in
from szdisc.envelope import (
    best_ball,
    best_envelope,
    envelope_ball,
    envelope_glued,
    envelope_rational,
    monotonicity_violations,
    reevaluate,
    v_grid,
)
from szdisc.functionals import I_of
from szdisc.oracle import closed_form


@pytest.mark.parametrize("z", [1.5, 2j, -4.0, 3 + 3j])
def test_ball_envelope_on_unit_disc(z):
    X = unit_disc()
    res = envelope_ball(X, z)
    assert res.found and res.family == "ball"
    assert res.value == pytest.approx(closed_form(X, z).value, abs=1e-3)
    assert res.value >= closed_form(X, z).value
    assert check_boundary_in(res.certificate, X, 4096).accepted


def test_ball_envelope_inside_is_constant():
    res = envelope_ball(unit_disc(), 0.3j)
    assert res.value == 0.0 and res.validity["kind"] == "constant"


def test_ball_envelope_in_two_dimensions():
    X = SetGeometry((Ball([0.0, 0.0], 1.0),))
    res = envelope_ball(X, [2.0, 0.0])
    assert res.value == pytest.approx(np.log(2), abs=1e-3)


def test_best_ball_refines_center_in_box():
    # the inscribed ball of a long box is not the best one for a point off its end
    X = SetGeometry((Box([0.0], [10 + 1j]),))
    val, c, r = best_ball(X, 11 + 0.5j)
    assert r == pytest.approx(0.5, rel=1e-3)
    assert val < np.log(np.abs(11 + 0.5j - (5 + 0.5j)) / 0.5)


def test_two_disc_ball_value_is_log_two():
    res = envelope_ball(two_discs(), 2.0)
    assert res.value == pytest.approx(np.log(2), abs=1e-3)


def test_point_dimension_mismatch():
    with pytest.raises(ValueError):
        envelope_ball(unit_disc(), [1.0, 2.0])


def test_rational_envelope_is_certified_upper_bound():
    X = unit_disc()
    res = envelope_rational(X, 2.0, degree=2, budget=4, seed=3)
    assert res.found
    assert res.value >= np.log(2) - 1e-9
    assert res.value <= envelope_ball(X, 2.0).value + 1e-12
    assert reevaluate(res, X) == pytest.approx(res.value, abs=1e-12)
    assert check_boundary_in(res.certificate, X, 4096).accepted


def test_rational_envelope_is_deterministic():
    X = SetGeometry((Ball([0.0], 1.0), Box([2.0 - 0.5j], [3.0 + 0.5j])))
    a = envelope_rational(X, 1.5 + 1j, degree=2, budget=3, seed=7)
    b = envelope_rational(X, 1.5 + 1j, degree=2, budget=3, seed=7)
    assert a.value == b.value


def test_rational_bad_arguments():
    with pytest.raises(ValueError):
        envelope_rational(unit_disc(), 2.0, degree=0)


@pytest.fixture(scope="module")
def glued_two_discs():
    return envelope_glued(two_discs(), 2.0, budget=8, seed=0)


def test_glued_beats_single_component(glued_two_discs):
    res = glued_two_discs
    assert res.validity["kind"] == "glued" and res.validity["valid"]
    assert res.value <= np.log(2) - 0.02
    # frozen: the PDE oracle gives g(2) = 0.1005 with error estimate 0.0148
    assert res.value >= 0.1005 - 0.0148


def test_glued_certificate_reevaluates(glued_two_discs):
    assert reevaluate(glued_two_discs, two_discs()) == pytest.approx(glued_two_discs.value, abs=1e-6)


def test_glued_falls_back_to_ball_for_connected_set():
    res = envelope_glued(unit_disc(), 2.0, budget=2, seed=0, N=2**12)
    assert res.value <= np.log(2) + 1e-3
    assert res.value >= np.log(2) - 1e-9


def test_best_envelope_rejects_unknown_family():
    with pytest.raises(ValueError):
        best_envelope(unit_disc(), 2.0, families=("spline",))


def test_grid_monotone_under_enlargement():
    X = two_discs()
    pts = [x + 1j * y for x in (-2.0, 1.5, 2.0, 5.5) for y in (0.0, 1.5)]
    small = v_grid(X, pts)
    large = v_grid(X.offset(0.5), pts)
    assert monotonicity_violations(small, large) == []
    assert all(r.family == "ball" for r in small)


def test_monotonicity_violations_reports_indices():
    from szdisc.envelope import GridRow

    a = [GridRow(np.zeros(1), 1.0, "ball"), GridRow(np.zeros(1), 1.0, "ball")]
    b = [GridRow(np.zeros(1), 0.5, "ball"), GridRow(np.zeros(1), 1.5, "ball")]
    assert monotonicity_violations(a, b) == [1]
