"""The disc functionals J, I and the negative mass nu on factored discs."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .boundary import (
    TWO_PI,
    AtomicMeasure,
    BlaschkeData,
    blaschke_gcd,
    grid_angles,
    measure_join,
    measure_meet,
)
from .discs import FactoredComponent, FactoredDisc, LiftedDisc


@dataclass
class FunctionalValue:
    value: float
    method: str
    detail: dict = field(default_factory=dict)

    @property
    def is_finite(self) -> bool:
        return bool(np.isfinite(self.value))

    def __float__(self) -> float:
        return float(self.value)


def _common_inner(d: LiftedDisc):
    gcd = blaschke_gcd([c.blaschke for c in d.components])
    meet = measure_meet([c.sing_num for c in d.components])
    return gcd, meet


def reduced_zeroth(d: LiftedDisc) -> FactoredComponent:
    """Zeroth component after dividing the lifting by its common inner factor."""
    gcd, meet = _common_inner(d)
    f0 = d.zeroth
    return FactoredComponent(blaschke=f0.blaschke.divide(gcd), outer=f0.outer, sing_num=f0.sing_num - meet)


def _blaschke_part(B: BlaschkeData) -> float:
    return -B.log_abs_at_zero()


def J_of(d: LiftedDisc) -> FunctionalValue:
    """Weighted count -sum m log|a| of the intersections with the hyperplane at infinity."""
    if d.zeroth.is_zero:
        return FunctionalValue(np.inf, "exact", {"reason": "zeroth component vanishes identically"})
    gcd, _ = _common_inner(d)
    B0 = d.zeroth.blaschke.divide(gcd)
    value = _blaschke_part(B0)
    return FunctionalValue(
        value, "exact", {"blaschke": value, "singular": 0.0, "common_zeros": gcd.degree}
    )


def I_of(d: LiftedDisc, method: str = "exact", N: int = 2**16) -> FunctionalValue:
    """-log|(B s)(0)| for the zeroth inner factor of the canonical lifting.

    ``exact`` divides out the greatest common Blaschke divisor and the meet of
    the singular numerators; ``quadrature`` integrates the boundary log-modulus
    of the reduced zeroth component and subtracts its log-modulus at 0.
    """
    if d.zeroth.is_zero:
        return FunctionalValue(np.inf, method, {"reason": "zeroth component vanishes identically"})
    gcd, meet = _common_inner(d)
    f0 = reduced_zeroth(d)
    if method == "exact":
        b = _blaschke_part(f0.blaschke)
        s = f0.sing_num.total
        return FunctionalValue(
            b + s,
            "exact",
            {
                "blaschke": b,
                "singular": s,
                "common_zeros": gcd.degree,
                "common_singular_mass": meet.total,
            },
        )
    if method == "quadrature":
        th = grid_angles(N)
        # singular inner factors have modulus 1 a.e. on the circle, so the boundary
        # log-modulus is that of B h; evaluating it at the atoms too avoids a 1/N bias
        zeta = np.exp(1j * th)
        vals = f0.blaschke(zeta) * f0.outer.boundary_values(th)
        boundary_mean = float(np.mean(np.log(np.abs(vals))))
        at0 = float(np.log(abs(f0.value_at_zero())))
        return FunctionalValue(boundary_mean - at0, "quadrature", {"grid": N})
    raise ValueError(f"unknown method {method!r}")


def nu_of(f: FactoredDisc) -> FunctionalValue:
    """Total mass of the join of the singular denominators."""
    t = measure_join([c.sing_den for c in f.components])
    return FunctionalValue(t.total, "exact", {"atoms": len(t.atoms)})


def J_via_riesz(d: LiftedDisc, radii, N: int = 2**14) -> np.ndarray:
    """Circle averages of log|B_0| minus log|B_0(0)|, one per radius."""
    gcd, _ = _common_inner(d)
    B0 = d.zeroth.blaschke.divide(gcd)
    if d.zeroth.is_zero:
        return np.full(len(radii), np.inf)
    at0 = B0.log_abs_at_zero()
    th = grid_angles(N)
    out = []
    for r in radii:
        if not 0 < r < 1:
            raise ValueError("radii must lie in (0, 1)")
        out.append(float(np.mean(np.log(np.abs(B0(r * np.exp(1j * th)))))) - at0)
    return np.array(out)


def count_zeros_inside(fn, radius: float = 1.0, N: int = 2**12) -> int:
    """Zeros of a holomorphic function inside |z| < radius by the argument principle."""
    z = radius * np.exp(1j * grid_angles(N))
    v = fn(z)
    steps = np.angle(np.roll(v, -1) / v)
    return int(round(float(np.sum(steps)) / TWO_PI))


def nu_of_lifted(d: LiftedDisc) -> FunctionalValue:
    """Negative mass of the projected disc f_j = F_j / F_0 of a lifting.

    The singular denominator of f_j is the part of the zeroth singular numerator
    not cancelled by that of F_j.
    """
    s0 = d.zeroth.sing_num
    dens = [s0 - measure_meet([s0, c.sing_num]) for c in d.components[1:]]
    t = measure_join(dens) if dens else AtomicMeasure()
    return FunctionalValue(t.total, "exact", {"atoms": len(t.atoms)})
