import numpy as np
import pytest

from szdisc.discs import Ball, SetGeometry, Shell
from szdisc.hull import ContradictoryCertificates, hull_test, separating_polynomial

CIRCLE = SetGeometry((Shell([0.0], 1.0, 0.0),))
TINY = SetGeometry((Ball([0.0], 1e-3), Ball([4.0], 1e-3)))


@pytest.fixture(scope="module")
def circle_center():
    return hull_test(CIRCLE, 0.0)


def test_center_of_circle_is_in_hull(circle_center):
    v = circle_center
    assert v.status == "in_hull_evidence"
    assert all(lv["accepted"] and lv["nu"] == 0.0 for lv in v.certificates)
    assert [d for d, _ in v.schedule] == pytest.approx([0.2, 0.1, 0.04, 0.02])


def test_hull_values_grow_as_neighbourhood_shrinks(circle_center):
    vals = [lv["value"] for lv in circle_center.certificates]
    assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))


def test_outside_point_is_separated():
    v = hull_test(CIRCLE, 2.0, schedule=(0.1,))
    assert v.status == "not_in_hull"
    p = v.polynomial
    assert p["separates"] and p["value_at_a"] > p["sup_K"]
    assert p["log_ratio"] == pytest.approx(np.log(2), abs=1e-2)


def test_two_tiny_balls():
    v = hull_test(TINY, 2.0, schedule=(0.1,))
    assert v.status == "not_in_hull"
    assert v.polynomial["value_at_a"] / v.polynomial["sup_K"] > 100


def test_separating_polynomial_for_point_inside_disc_fails():
    X = SetGeometry((Ball([0.0], 1.0),))
    p = separating_polynomial(X, np.array([0.5 + 0j]), max_degree=2, budget=2)
    assert p is None or not p["separates"]


def test_deterministic():
    a = hull_test(CIRCLE, 2.0, schedule=(0.1,), seed=5)
    b = hull_test(CIRCLE, 2.0, schedule=(0.1,), seed=5)
    assert a.status == b.status and np.array_equal(a.polynomial["coefficients"], b.polynomial["coefficients"])


def test_timeout_gives_inconclusive_evidence():
    v = hull_test(CIRCLE, 0.0, timeout=0.0)
    assert v.status == "inconclusive"


def test_contradiction_is_raised(monkeypatch):
    import szdisc.hull as hull

    monkeypatch.setattr(
        hull, "separating_polynomial", lambda *a, **k: {"separates": True, "coefficients": np.array([0, 1])}
    )
    with pytest.raises(ContradictoryCertificates):
        hull.hull_test(CIRCLE, 0.0, schedule=(0.1,))


def test_empty_schedule_rejected():
    with pytest.raises(ValueError):
        hull_test(CIRCLE, 0.0, schedule=())
