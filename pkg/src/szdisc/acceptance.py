"""The acceptance criteria as runnable checks, shared by ``verify`` and the tests."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence

import numpy as np

from .boundary import (
    Arc,
    AtomicMeasure,
    BlaschkeData,
    BoundaryGrid,
    RationalOuter,
    conjugate_grid,
    grid_angles,
)
from .discs import Ball, FactoredComponent, FactoredDisc, LiftedDisc, SetGeometry, Shell, lift
from .envelope import EnvelopeResult, envelope_ball, envelope_glued, envelope_rational, reevaluate, v_grid, monotonicity_violations
from .functionals import I_of, J_of, nu_of
from .glue import alpha, alpha_moments
from .hull import ContradictoryCertificates, hull_test
from .oracle import closed_form, pde_green

LATTICE = 16


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    runtime: float
    limit: float
    checks: Dict[str, bool] = field(default_factory=dict)
    detail: Dict[str, object] = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        failed = [k for k, ok in self.checks.items() if not ok]
        extra = f" failed: {', '.join(failed)}" if failed else ""
        limit = f"{self.limit:g}s" if np.isfinite(self.limit) else "no limit"
        return f"criterion {self.number} [{status}] {self.title} ({self.runtime:.1f}s / {limit}){extra}"


def _finish(number, title, limit, t0, checks, detail) -> CriterionResult:
    runtime = time.monotonic() - t0
    checks = dict(checks)
    checks["runtime"] = runtime < limit
    return CriterionResult(number, title, all(checks.values()), runtime, limit, checks, detail)


# ---------------------------------------------------------------------------
# fixtures


def counterexample_disc(a: float = 0.5) -> LiftedDisc:
    """Lifting (g s, 1) with g(z) = (z - a)/(1 - a z) and s the unit atom at angle 0."""
    # the Blaschke factor convention is (|a|/a)(a - z)/(1 - a z) = -g
    zeroth = FactoredComponent(
        blaschke=BlaschkeData(((a, 1),)),
        outer=RationalOuter((-1.0,), (1.0,)),
        sing_num=AtomicMeasure.point(0.0, 1.0),
    )
    return LiftedDisc((zeroth, FactoredComponent.constant(1.0)))


def _lattice_measure(rng, max_atoms: int = 3) -> AtomicMeasure:
    k = int(rng.integers(0, max_atoms + 1))
    idx = np.sort(rng.choice(LATTICE, size=k, replace=False))
    return AtomicMeasure(tuple((2 * np.pi * i / LATTICE, float(rng.uniform(0.1, 2.0))) for i in idx))


def _zero_free_poly(rng, degree: int):
    """Polynomial with roots outside the closed disc of radius 1.2, value 1 at 0 up to scale."""
    roots = (1.2 + 2.0 * rng.random(degree)) * np.exp(2j * np.pi * rng.random(degree))
    return tuple(np.polynomial.polynomial.polyfromroots(roots) * rng.uniform(0.5, 2.0))


def _blaschke(rng, max_zeros: int = 3) -> BlaschkeData:
    k = int(rng.integers(0, max_zeros + 1))
    pts = 0.95 * np.sqrt(rng.random(k)) * np.exp(2j * np.pi * rng.random(k))
    return BlaschkeData.from_points(pts)


def random_factored_disc(rng, dimension: int = 2) -> FactoredDisc:
    """Nevanlinna disc with singular atoms on the 16-angle lattice."""
    comps = []
    for _ in range(dimension):
        num = _lattice_measure(rng)
        den = _lattice_measure(rng)
        # numerator and denominator must not share atoms
        den = AtomicMeasure(tuple(at for at in den.atoms if at[0] not in set(num.angles)))
        outer = RationalOuter(_zero_free_poly(rng, int(rng.integers(0, 3))), _zero_free_poly(rng, int(rng.integers(0, 3))))
        comps.append(FactoredComponent(_blaschke(rng), outer, num, den))
    return FactoredDisc(tuple(comps))


def random_lifted_disc(rng, dimension: int = 2, singular: bool = True) -> LiftedDisc:
    """Bounded lifting with random inner parts; common zeros and atoms are frequent."""
    shared = _blaschke(rng, 2)
    shared_s = _lattice_measure(rng, 2) if singular else AtomicMeasure()
    comps = []
    for _ in range(dimension + 1):
        B = shared * _blaschke(rng, 2)
        s = (shared_s + _lattice_measure(rng, 2)) if singular else AtomicMeasure()
        comps.append(FactoredComponent(B, RationalOuter(_zero_free_poly(rng, int(rng.integers(0, 3)))), s))
    return LiftedDisc(tuple(comps))


def unit_disc() -> SetGeometry:
    return SetGeometry((Ball([0.0], 1.0),))


def two_discs() -> SetGeometry:
    return SetGeometry((Ball([0.0], 1.0), Ball([4.0], 1.0)))


# ---------------------------------------------------------------------------
# criteria


def criterion_1() -> CriterionResult:
    t0 = time.monotonic()
    a, r = 0.5, 2.0
    d = counterexample_disc(a)
    J = J_of(d).value
    I_exact = I_of(d).value
    I_quad = I_of(d, "quadrature", N=2**16).value
    f0 = complex(d.project(np.zeros(1))[0, 0])
    V = closed_form(SetGeometry((Ball([0.0], r),)), f0).value
    checks = {
        "J = log 2": abs(J - np.log(2)) <= 1e-12,
        "I exact = 1 + log 2": abs(I_exact - (1 + np.log(2))) <= 1e-12,
        "I quadrature within 5e-6": abs(I_quad - (1 + np.log(2))) <= 5e-6,
        "closed form = 1": abs(V - 1.0) <= 1e-12,
        "V <= I": V <= I_exact,
        "V > J": V > J,
    }
    detail = {"J": J, "I_exact": I_exact, "I_quadrature": I_quad, "V": V, "f0": f0}
    return _finish(1, "counterexample fixture", 5.0, t0, checks, detail)


def criterion_2(N: int = 2**12, seed: int = 0) -> CriterionResult:
    t0 = time.monotonic()
    rng = np.random.default_rng(seed)
    th = grid_angles(N)
    worst = 0.0
    for deg in (1, 7, N // 16, N // 4):
        k = np.arange(1, deg + 1)
        a, b = rng.normal(size=deg), rng.normal(size=deg)
        c0 = rng.normal()
        u = c0 + np.cos(np.outer(th, k)) @ a + np.sin(np.outer(th, k)) @ b
        want = np.sin(np.outer(th, k)) @ a - np.cos(np.outer(th, k)) @ b
        got = conjugate_grid(BoundaryGrid(u)).samples
        worst = max(worst, float(np.max(np.abs(got - want))))
    checks = {"max error <= 1e-10": worst <= 1e-10}
    return _finish(2, "conjugate-function exactness", 1.0, t0, checks, {"max_error": worst})


def alpha_radius_deviation(A: Arc, m: float, radius: float, N: int = 2**12):
    """Max deviation of |alpha| from 1 on A and from e^-m off A at the given radius."""
    th = grid_angles(N)
    ends = np.zeros(N, dtype=bool)
    for e in A.endpoints():
        ends |= np.abs(np.angle(np.exp(1j * (th - e)))) <= 1e-12
    th = th[~ends]
    on = A.contains(th)
    mod = np.abs(alpha(A, m, radius * np.exp(1j * th)))
    return float(np.max(np.abs(mod[on] - 1.0))), float(np.max(np.abs(mod[~on] - np.exp(-m))))


def criterion_3() -> CriterionResult:
    t0 = time.monotonic()
    A = Arc(0.0, np.pi)
    checks, detail = {}, {}
    a0 = [abs(float(alpha(A, m, 0.0).real) - np.exp(-m * 0.5)) for m in (1, 10, 100)]
    checks["alpha(0)"] = max(a0) <= 1e-12
    detail["alpha0_error"] = max(a0)
    dev = {m: alpha_radius_deviation(A, m, 1 - 1e-6) for m in (1, 10, 100)}
    detail["radius_deviation"] = dev
    checks["moduli at radius 1-1e-6"] = all(max(v) <= 1e-6 for v in dev.values())
    exact = {m: alpha_radius_deviation(A, m, 1.0) for m in (1, 10, 100)}
    detail["boundary_deviation"] = exact
    checks["moduli of boundary values"] = all(max(v) <= 1e-6 for v in exact.values())
    mom = {m: np.abs(alpha_moments(A, m, 5, method="exact")[1:]) for m in (10, 50, 200)}
    quad = {m: np.abs(alpha_moments(A, m, 5)[1:]) for m in (10, 50, 200)}
    detail["moments"] = mom
    detail["quadrature_gap"] = max(float(np.max(np.abs(mom[m] - quad[m]))) for m in mom)
    checks["moments < 0.05 at m = 200"] = bool(np.all(mom[200] < 0.05))
    checks["moments decrease in m"] = bool(np.all(mom[10] > mom[50]) and np.all(mom[50] > mom[200]))
    checks["quadrature agrees with closed form"] = detail["quadrature_gap"] <= 1e-10
    return _finish(3, "alpha certificate", 10.0, t0, checks, detail)


def criterion_4(budget: int = 50, seed: int = 0) -> CriterionResult:
    t0 = time.monotonic()
    X = unit_disc()
    checks, detail = {}, {}
    for z in (1.5, 2.0, 4.0):
        b = envelope_ball(X, z)
        r = envelope_rational(X, z, degree=3, budget=budget, seed=seed)
        detail[z] = {"ball": b.value, "rational": r.value}
        checks[f"ball |z|={z}"] = abs(b.value - np.log(z)) <= 1e-3
        checks[f"rational |z|={z}"] = abs(r.value - np.log(z)) <= 5e-3
    return _finish(4, "connected-set envelope", 60.0, t0, checks, detail)


def criterion_5(n: int = 1000, budget: int = 8, seed: int = 0) -> CriterionResult:
    t0 = time.monotonic()
    X = two_discs()
    g = pde_green(X, 2.0, n=n)
    v = envelope_glued(X, 2.0, budget=budget, seed=seed)
    checks = {
        "pde error <= 0.02": g.error_estimate <= 0.02,
        "v >= g - 0.05": v.value >= g.value - 0.05,
        "v <= log 2 - 0.02": v.value <= np.log(2) - 0.02,
        "glued certificate valid": v.found and v.validity.get("kind") == "glued",
    }
    detail = {"g": g.value, "g_error": g.error_estimate, "v": v.value, "arcs": v.validity.get("arcs"), "m": v.validity.get("m")}
    return _finish(5, "disconnected-set envelope", 300.0, t0, checks, detail)


def criterion_6(count: int = 100, seed: int = 0) -> CriterionResult:
    t0 = time.monotonic()
    rng = np.random.default_rng(seed)
    worst_nu, worst_order, worst_eq = 0.0, -np.inf, 0.0
    for _ in range(count):
        f = random_factored_disc(rng, int(rng.integers(1, 4)))
        worst_nu = max(worst_nu, abs(nu_of(f).value - I_of(lift(f)).value))
    for _ in range(count):
        d = random_lifted_disc(rng, int(rng.integers(1, 4)))
        worst_order = max(worst_order, J_of(d).value - I_of(d).value)
    for _ in range(count):
        d = random_lifted_disc(rng, int(rng.integers(1, 4)), singular=False)
        worst_eq = max(worst_eq, abs(J_of(d).value - I_of(d).value))
    checks = {
        "nu(f) = I(lift f)": worst_nu <= 1e-12,
        "J <= I": worst_order <= 1e-12,
        "I = J without singular numerators": worst_eq <= 1e-12,
    }
    detail = {"nu_gap": worst_nu, "J_minus_I": worst_order, "I_J_gap": worst_eq}
    return _finish(6, "nu = I suite", 30.0, t0, checks, detail)


def criterion_7() -> CriterionResult:
    t0 = time.monotonic()
    circle = SetGeometry((Shell([0.0], 1.0, 0.0),))
    tiny = SetGeometry((Ball([0.0], 1e-3), Ball([4.0], 1e-3)))
    checks, detail = {}, {}
    try:
        v0 = hull_test(circle, 0.0)
        v2 = hull_test(circle, 2.0)
        vt = hull_test(tiny, 2.0)
    except ContradictoryCertificates as exc:
        checks["no contradictory certificates"] = False
        detail["error"] = str(exc)
        return _finish(7, "hull fixtures", 60.0, t0, checks, detail)
    checks["no contradictory certificates"] = True
    checks["circle, a = 0: in hull with nu = 0"] = v0.status == "in_hull_evidence" and all(
        lv.get("nu") == 0.0 for lv in v0.certificates
    )
    p = v2.polynomial
    # the identity polynomial: |p(2)| = 2 against its sup over samples of K
    sup_w = float(np.max(np.abs(circle.compact_samples(4096)[0])))
    checks["circle, a = 2: not in hull"] = v2.status == "not_in_hull" and p is not None and p["separates"]
    checks["circle, a = 2: p(w) = w separates"] = 2.0 > (1 + 1e-9) * sup_w
    checks["two tiny balls, a = 2: separated"] = vt.status == "not_in_hull"
    detail = {
        "circle_0": v0.status,
        "circle_2": v2.status,
        "circle_2_poly": None if p is None else p["coefficients"],
        "sup_K_abs_w": sup_w,
        "tiny_2": vt.status,
        "tiny_2_ratio": None if vt.polynomial is None else vt.polynomial["value_at_a"] / vt.polynomial["sup_K"],
    }
    return _finish(7, "hull fixtures", 60.0, t0, checks, detail)


def criterion_8(budget: int = 8, seed: int = 0) -> CriterionResult:
    t0 = time.monotonic()
    X = unit_disc()
    checks, detail = {}, {}
    growth = {}
    for r in (2.0, 4.0, 8.0, 16.0):
        z = r * np.exp(0.7j)
        res = envelope_ball(X, z)
        growth[r] = res.value - np.log(r)
        checks[f"growth |z|={r:g}"] = abs(growth[r]) <= 0.01
    detail["growth"] = growth

    pts = [x + 1j * y for x in np.linspace(-3, 3, 7) for y in np.linspace(-3, 3, 7)]
    two = two_discs()
    pairs = (
        (X, X.offset(0.25)),
        (two, two.offset(0.25)),
        (two, SetGeometry(two.primitives + (Ball([2.0], 0.5),))),
    )
    bad, rows = [], []
    for small_X, large_X in pairs:
        small = v_grid(small_X, pts, ("ball",), budget, seed)
        large = v_grid(large_X, pts, ("ball",), budget, seed)
        bad += monotonicity_violations(small, large)
        rows += [(small_X, r) for r in small] + [(large_X, r) for r in large]
    checks["enlarging X never increases a grid value"] = not bad
    detail["monotonicity_violations"] = bad

    results = [(geom, EnvelopeResult(r.value, r.family, r.certificate, r.validity)) for geom, r in rows]
    for z in (1.5, 3.0j):
        results.append((X, envelope_rational(X, z, degree=3, budget=budget, seed=seed)))
    results.append((two, envelope_glued(two, 2.0, budget=budget, seed=seed)))
    worst = max(abs(reevaluate(res, geom) - res.value) for geom, res in results if res.found)
    detail["certificates_checked"] = sum(res.found for _, res in results)
    checks["certificates re-evaluate within 1e-6"] = worst <= 1e-6
    detail["reevaluation_gap"] = worst
    return _finish(8, "growth and monotonicity", np.inf, t0, checks, detail)


CRITERIA: Dict[int, Callable[[], CriterionResult]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
}

SUITES = {
    # criteria built on exactly computable fixture values (disc functionals, hull)
    "paper-fixtures": (1, 6, 7),
    "full": tuple(CRITERIA),
}


def run_suite(name: str) -> List[CriterionResult]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    return [CRITERIA[k]() for k in SUITES[name]]


def format_table(results: Sequence[CriterionResult]) -> str:
    return "\n".join(r.line() for r in results)
