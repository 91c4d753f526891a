import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from szdisc.acceptance import counterexample_disc, random_factored_disc, random_lifted_disc
from szdisc.boundary import AtomicMeasure, BlaschkeData, RationalOuter
from szdisc.discs import ClosedPolyDisc, FactoredComponent, LiftedDisc, lift
from szdisc.functionals import I_of, J_of, J_via_riesz, count_zeros_inside, nu_of, nu_of_lifted, reduced_zeroth

seeds = st.integers(0, 2**32 - 1)


# frozen values of the counterexample disc with a = 0.5, atom of unit mass
def test_counterexample_values():
    d = counterexample_disc(0.5)
    assert J_of(d).value == pytest.approx(np.log(2), abs=1e-12)
    assert I_of(d).value == pytest.approx(1 + np.log(2), abs=1e-12)
    assert I_of(d, "quadrature", N=2**16).value == pytest.approx(1 + np.log(2), abs=5e-6)
    assert nu_of_lifted(d).value == 1.0


def test_counterexample_projection():
    # f = 1/(g s) with g(0) = -a and s(0) = 1/e
    d = counterexample_disc(0.5)
    assert d.project(np.zeros(1))[0, 0] == pytest.approx(-2 * np.e)


def test_unknown_method():
    with pytest.raises(ValueError):
        I_of(counterexample_disc(), "bogus")


def test_vanishing_zeroth_component():
    d = LiftedDisc((FactoredComponent.constant(0.0), FactoredComponent.constant(1.0)))
    assert J_of(d).value == np.inf and I_of(d).value == np.inf


def test_common_factors_are_divided_out():
    B = BlaschkeData(((0.3, 2),))
    s = AtomicMeasure.point(1.0, 0.7)
    d = LiftedDisc((FactoredComponent(B, sing_num=s), FactoredComponent(BlaschkeData(((0.3, 1),)), sing_num=s)))
    assert J_of(d).value == pytest.approx(-np.log(0.3))
    assert I_of(d).value == pytest.approx(-np.log(0.3))
    assert reduced_zeroth(d).sing_num.is_empty


def test_polynomial_disc_has_zero_functionals():
    d = ClosedPolyDisc(([1.0, 2.0, 3.0],)).to_lifted()
    assert J_of(d).value == 0.0 and I_of(d).value == 0.0


@given(seeds)
def test_nu_equals_I_of_lift(seed):
    f = random_factored_disc(np.random.default_rng(seed), 3)
    assert nu_of(f).value == pytest.approx(I_of(lift(f)).value, abs=1e-12)
    assert nu_of_lifted(lift(f)).value == pytest.approx(nu_of(f).value, abs=1e-12)


@given(seeds)
def test_J_below_I(seed):
    d = random_lifted_disc(np.random.default_rng(seed), 2)
    assert J_of(d).value <= I_of(d).value + 1e-12


@given(seeds)
def test_I_equals_J_without_singular_part(seed):
    d = random_lifted_disc(np.random.default_rng(seed), 2, singular=False)
    assert I_of(d).value == pytest.approx(J_of(d).value, abs=1e-12)


@given(seeds)
def test_quadrature_agrees_with_exact(seed):
    d = random_lifted_disc(np.random.default_rng(seed), 1)
    exact = I_of(d).value
    quad = I_of(d, "quadrature", N=2**14).value
    assert quad == pytest.approx(exact, abs=1e-6)


def test_J_via_jensen_formula():
    zeros = BlaschkeData(((0.5, 1), (0.2j, 2)))
    d = LiftedDisc((FactoredComponent(zeros), FactoredComponent.constant(1.0)))
    radii = [0.1, 0.3, 0.9, 0.999]
    got = J_via_riesz(d, radii)
    # Jensen: sum over zeros inside |z| < r of m log(r/|a|)
    want = [sum(m * np.log(r / abs(a)) for a, m in zeros.zeros if abs(a) < r) for r in radii]
    assert np.allclose(got, want, atol=1e-9)
    assert got[-1] == pytest.approx(J_of(d).value, abs=5e-3)
    with pytest.raises(ValueError):
        J_via_riesz(d, [1.0])


def test_count_zeros_inside():
    p = lambda z: (z - 0.5) * (z + 0.2j) ** 2 * (z - 3)
    assert count_zeros_inside(p) == 3
    assert count_zeros_inside(p, radius=0.3) == 2
