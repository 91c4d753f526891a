import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from szdisc.boundary import (
    Arc,
    AtomicMeasure,
    BlaschkeData,
    BoundaryGrid,
    GridOuter,
    RationalOuter,
    analytic_coefficients,
    blaschke_eval,
    blaschke_gcd,
    conjugate_grid,
    grid_angles,
    harmonic_measure_arc,
    measure_join,
    measure_meet,
    outer_from_log_modulus,
    poisson_value,
    singular_eval,
)

from strategies import blaschke_data, disc_points, lattice_measures, rational_outers


# ---------------------------------------------------------------------------
# grids


def test_grid_sizes_must_be_powers_of_two():
    with pytest.raises(ValueError):
        BoundaryGrid(np.zeros(100))


@pytest.mark.parametrize("N", [2**8, 2**12])
def test_conjugate_of_cos_is_sin(N):
    th = grid_angles(N)
    for k in (1, 5, N // 4):
        got = conjugate_grid(BoundaryGrid(np.cos(k * th))).samples
        assert np.max(np.abs(got - np.sin(k * th))) < 1e-11


def test_conjugate_kills_constants_and_nyquist():
    N = 64
    th = grid_angles(N)
    u = 3.0 + np.cos(N // 2 * th)
    assert np.max(np.abs(conjugate_grid(BoundaryGrid(u)).samples)) < 1e-13


@given(st.lists(st.floats(-1, 1), min_size=3, max_size=3))
def test_poisson_reproduces_harmonic_polynomial(c):
    # u = Re(c0 + c1 z + c2 z^2)
    th = grid_angles(256)
    z0 = np.exp(1j * th)
    u = np.real(c[0] + c[1] * z0 + 1j * c[2] * z0**2)
    w = 0.3 - 0.4j
    want = np.real(c[0] + c[1] * w + 1j * c[2] * w**2)
    assert poisson_value(BoundaryGrid(u), w) == pytest.approx(want, abs=1e-12)


def test_analytic_coefficients_rejects_complex_grid():
    with pytest.raises(TypeError):
        analytic_coefficients(BoundaryGrid(np.ones(8) * 1j))


def test_poisson_needs_interior_point():
    with pytest.raises(ValueError):
        poisson_value(BoundaryGrid(np.ones(8)), 1.0)


# ---------------------------------------------------------------------------
# measures: lattice laws


def test_measure_validation():
    with pytest.raises(ValueError):
        AtomicMeasure(((7.0, 1.0),))
    with pytest.raises(ValueError):
        AtomicMeasure(((1.0, -1.0),))
    with pytest.raises(ValueError):
        AtomicMeasure(((2.0, 1.0), (1.0, 1.0)))


def test_from_pairs_merges_coincident_atoms():
    m = AtomicMeasure.from_pairs([(1.0, 0.5), (1.0, 0.25), (2 * np.pi + 1.0, 0.25)])
    assert m.atoms == ((1.0, 1.0),)


@given(lattice_measures(), lattice_measures())
def test_join_and_meet_commute(a, b):
    assert measure_join([a, b]).same_as(measure_join([b, a]))
    assert measure_meet([a, b]).same_as(measure_meet([b, a]))


@given(lattice_measures(), lattice_measures(), lattice_measures())
def test_join_and_meet_associate(a, b, c):
    assert measure_join([measure_join([a, b]), c]).same_as(measure_join([a, measure_join([b, c])]))
    assert measure_meet([measure_meet([a, b]), c]).same_as(measure_meet([a, measure_meet([b, c])]))


@given(lattice_measures(), lattice_measures())
def test_absorption(a, b):
    assert measure_join([a, measure_meet([a, b])]).same_as(a)
    assert measure_meet([a, measure_join([a, b])]).same_as(a)


@given(lattice_measures(), lattice_measures())
def test_join_plus_meet_is_sum(a, b):
    assert (measure_join([a, b]) + measure_meet([a, b])).same_as(a + b)


@given(lattice_measures(), lattice_measures())
def test_meet_below_join(a, b):
    lo, hi = measure_meet([a, b]), measure_join([a, b])
    assert lo <= a and lo <= b and a <= hi and b <= hi


@given(lattice_measures())
def test_singular_inner_value_at_zero(mu):
    assert abs(singular_eval(mu, 0.0)) == pytest.approx(np.exp(-mu.total), rel=1e-12)


@given(lattice_measures(), disc_points())
def test_singular_inner_is_bounded_by_one(mu, z):
    assert abs(singular_eval(mu, z)) <= 1.0 + 1e-12


def test_singular_inner_is_unimodular_off_atoms():
    mu = AtomicMeasure(((0.0, 1.0), (np.pi, 2.0)))
    th = np.array([0.3, 1.2, 2.0, 4.0, 5.5])
    assert np.allclose(np.abs(singular_eval(mu, np.exp(1j * th))), 1.0, atol=1e-12)
    with pytest.raises(ValueError):
        singular_eval(mu, 1.0)


# ---------------------------------------------------------------------------
# Blaschke products


@given(blaschke_data())
def test_blaschke_unimodular_on_circle(B):
    th = grid_angles(64)
    assert np.allclose(np.abs(blaschke_eval(B, np.exp(1j * th))), 1.0, atol=1e-12)


@given(blaschke_data())
def test_blaschke_value_at_zero_is_positive_product(B):
    v = blaschke_eval(B, 0.0)
    assert v.real == pytest.approx(B.value_at_zero(), abs=1e-12)
    assert abs(v.imag) < 1e-12


@given(blaschke_data(), blaschke_data())
def test_gcd_divides_both(A, B):
    g = blaschke_gcd([A, B])
    assert (A.divide(g) * g).degree == A.degree
    assert B.divide(g).degree == B.degree - g.degree


def test_blaschke_rejects_zero_outside_disc():
    with pytest.raises(ValueError):
        BlaschkeData(((1.0, 1),))
    with pytest.raises(ValueError):
        BlaschkeData(((0.5, 1),)).divide(BlaschkeData(((0.2, 1),)))


def test_blaschke_zero_at_origin():
    B = BlaschkeData(((0.0, 2),))
    assert blaschke_eval(B, 0.5) == pytest.approx(0.25)
    assert B.log_abs_at_zero() == -np.inf


# ---------------------------------------------------------------------------
# outer functions


@given(rational_outers())
def test_rational_outer_log_mean_value(h):
    th = grid_angles(1024)
    mean = np.mean(np.log(np.abs(h.boundary_values(th))))
    assert mean == pytest.approx(h.log_abs_at_zero(), abs=1e-9)


def test_rational_outer_rejects_interior_zero():
    with pytest.raises(ValueError):
        RationalOuter((-0.5, 1.0))
    with pytest.raises(ValueError):
        RationalOuter((1.0,), (0.0,))


def test_outer_from_log_modulus_recovers_modulus():
    th = grid_angles(512)
    h = RationalOuter((2.0, 1.0))
    w = BoundaryGrid(np.log(np.abs(h.boundary_values(th))))
    g = outer_from_log_modulus(w)
    assert isinstance(g, GridOuter)
    assert np.allclose(np.abs(g(0.3 + 0.2j)), np.abs(h(0.3 + 0.2j)), rtol=1e-8)


# ---------------------------------------------------------------------------
# harmonic measure of arcs


def test_arc_validation():
    with pytest.raises(ValueError):
        Arc(1.0, 1.0)
    with pytest.raises(ValueError):
        Arc(0.0, 7.0)
    assert Arc.full().is_full and Arc.full().endpoints() == ()


@pytest.mark.parametrize("start,end", [(0.0, np.pi), (0.3, 1.1), (5.0, 7.5)])
def test_harmonic_measure_at_zero_is_length_fraction(start, end):
    A = Arc(start, end)
    om, W = harmonic_measure_arc(A, 0.0)
    assert om == pytest.approx(A.fraction, abs=1e-14)
    assert W == pytest.approx(A.fraction, abs=1e-14)


@pytest.mark.parametrize("z", [0.5, -0.3 + 0.6j, 0.95j])
def test_harmonic_measure_matches_poisson_integral(z):
    # independent oracle: adaptive quadrature of the Poisson kernel over the arc
    A = Arc(0.3, 2.0)
    kernel = lambda t: (1 - abs(z) ** 2) / abs(np.exp(1j * t) - z) ** 2 / (2 * np.pi)
    want, _ = quad(kernel, A.start, A.end, epsabs=1e-13)
    om, _ = harmonic_measure_arc(A, z)
    assert om == pytest.approx(want, abs=1e-11)


def test_harmonic_measure_completion_is_holomorphic():
    # Cauchy-Riemann through a complex-step difference quotient
    A = Arc(0.3, 2.0)
    z, h = 0.2 + 0.1j, 1e-6
    _, W = harmonic_measure_arc(A, np.array([z + h, z - h, z + 1j * h, z - 1j * h]))
    dx = (W[0] - W[1]) / (2 * h)
    dy = (W[2] - W[3]) / (2 * h)
    assert abs(dy - 1j * dx) < 1e-6


def test_harmonic_measure_boundary_values():
    A = Arc(0.0, np.pi)
    th = np.array([0.5, 2.0, 4.0, 5.0])
    om, _ = harmonic_measure_arc(A, np.exp(1j * th))
    assert np.allclose(om, [1, 1, 0, 0], atol=1e-12)
