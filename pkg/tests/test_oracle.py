import numpy as np
import pytest

from szdisc.acceptance import two_discs, unit_disc
from szdisc.discs import Ball, SetGeometry
from szdisc.envelope import envelope_ball, envelope_glued
from szdisc.oracle import closed_form, green_solve, leja_points, pde_green, poly_log_ratio, poly_lower


def test_closed_form():
    assert closed_form(unit_disc(), 4.0).value == pytest.approx(np.log(4))
    assert closed_form(unit_disc(), 0.5j).value == 0.0
    X = SetGeometry((Ball([0.0], 2.0),))
    assert closed_form(X, np.e / 0.5).value == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        closed_form(two_discs(), 2.0)


def test_pde_unit_disc():
    o = pde_green(unit_disc(), 2.0, n=1000)
    assert o.error_estimate <= 0.02
    assert abs(o.value - np.log(2)) <= o.error_estimate
    assert o.detail["converged"]


def test_pde_inside_is_zero():
    assert pde_green(unit_disc(), 0.2, n=100).value == 0.0


def test_pde_rejects_small_box():
    with pytest.raises(ValueError):
        pde_green(unit_disc(), 2.0, n=100, R=3.0)


def test_pde_two_discs():
    o = pde_green(two_discs(), 2.0, n=1000)
    assert 0 < o.value < np.log(2)
    assert o.error_estimate <= 0.02
    # frozen at n = 1000, R = 24
    assert o.value == pytest.approx(0.100456, abs=1e-5)


def test_sor_agrees_with_amg():
    a = green_solve(unit_disc(), 2.0, 120, 8.0, "amg")
    b = green_solve(unit_disc(), 2.0, 120, 8.0, "sor")
    assert b.converged and a.value == pytest.approx(b.value, abs=1e-6)


@pytest.mark.slow
def test_pde_error_halves_when_grid_doubles():
    rng = np.random.default_rng(0)
    r = rng.uniform(1.2, 3.5, 20)
    z = r * np.exp(1j * rng.uniform(0, 2 * np.pi, 20))
    errs = []
    for n in (2000, 4000):
        g = green_solve(unit_disc(), z, n, 8.0)
        errs.append(np.max(np.abs(np.asarray(g.value) - np.log(r))))
    assert errs[0] <= 0.02
    assert 0.35 <= errs[1] / errs[0] <= 0.65


def test_leja_points_are_spread():
    K = np.exp(1j * np.linspace(0, 2 * np.pi, 512, endpoint=False))
    pts = leja_points(K, 4)
    assert len(set(np.round(pts, 12))) == 4
    assert abs(pts[0] + pts[1]) < 1e-12


def test_poly_log_ratio_identity():
    K = np.exp(1j * np.linspace(0, 2 * np.pi, 256, endpoint=False))
    assert poly_log_ratio(np.array([0.0]), K, 2.0) == pytest.approx(np.log(2))


def test_poly_lower_unit_circle():
    X = unit_disc()
    K, pieces = X.compact_samples(2048)
    o = poly_lower(K, 2.0, 2, budget=2, pieces=pieces)
    assert o.value <= np.log(2) + 1e-12
    assert o.value == pytest.approx(np.log(2), abs=5e-3)


def test_poly_lower_separation_flag():
    o = poly_lower(np.array([0.0, 4.0]), 2.0, 2, budget=2)
    assert o.value == np.inf


def test_sandwich_on_two_discs():
    X = two_discs()
    K, pieces = X.compact_samples(2048)
    low = poly_lower(K, 2.0, 6, budget=4, pieces=pieces)
    pde = pde_green(X, 2.0, n=1000)
    up = envelope_ball(X, 2.0)
    assert low.value <= up.value
    assert abs(low.value - pde.value) <= 0.1
    assert low.value <= pde.value + pde.error_estimate
