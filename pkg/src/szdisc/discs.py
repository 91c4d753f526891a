"""Analytic discs in factored Nevanlinna form, their bounded liftings, and target sets.

A component is ``B * h * s / t`` with ``B`` a finite Blaschke product, ``h`` an outer
function and ``s``, ``t`` atomic singular inner functions.  A lifted disc is a tuple
of ``n + 1`` bounded components ``(f_0, ..., f_n)`` representing the disc
``[f_0 : ... : f_n]`` in projective space; ``f_0`` is the coordinate whose zeros
are the intersections with the hyperplane at infinity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from numpy.polynomial import polynomial as P

from .boundary import (
    ONE,
    TWO_PI,
    AtomicMeasure,
    BlaschkeData,
    RationalOuter,
    blaschke_eval,
    circular_distance,
    grid_angles,
    measure_join,
    multiply_outer,
    singular_eval,
)

BOUNDARY_ROOT_TOL = 1e-10


@dataclass(frozen=True)
class FactoredComponent:
    blaschke: BlaschkeData = field(default_factory=BlaschkeData)
    outer: object = ONE
    sing_num: AtomicMeasure = field(default_factory=AtomicMeasure)
    sing_den: AtomicMeasure = field(default_factory=AtomicMeasure)

    def __post_init__(self):
        if self.sing_num.shares_atoms_with(self.sing_den):
            raise ValueError("singular numerator and denominator share an atom")

    @classmethod
    def constant(cls, c: complex) -> "FactoredComponent":
        return cls(outer=RationalOuter((complex(c),), (1.0,)))

    @property
    def is_zero(self) -> bool:
        return self.outer.is_zero

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return (
            blaschke_eval(self.blaschke, z)
            * self.outer(z)
            * singular_eval(self.sing_num, z)
            / singular_eval(self.sing_den, z)
        )

    def boundary_values(self, theta):
        return self(np.exp(1j * np.asarray(theta, dtype=float)))

    def singular_angles(self) -> np.ndarray:
        return np.concatenate([self.sing_num.angles, self.sing_den.angles])

    def value_at_zero(self) -> complex:
        return complex(self(0.0))


@dataclass(frozen=True)
class FactoredDisc:
    """Nevanlinna disc (f_1, ..., f_n) into affine space."""

    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValueError("a disc needs at least one component")
        object.__setattr__(self, "components", comps)

    @property
    def dimension(self) -> int:
        return len(self.components)

    @property
    def is_lifted(self) -> bool:
        return False

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.stack([c(z) for c in self.components], axis=-1)

    def boundary_values(self, theta):
        return self(np.exp(1j * np.asarray(theta, dtype=float)))

    def singular_angles(self) -> np.ndarray:
        return np.concatenate([c.singular_angles() for c in self.components])


@dataclass(frozen=True)
class LiftedDisc:
    """Bounded lifting (f_0, ..., f_n) of a disc in projective n-space."""

    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if len(comps) < 2:
            raise ValueError("a lifted disc needs n + 1 >= 2 components")
        for j, c in enumerate(comps):
            if not c.sing_den.is_empty:
                raise ValueError(f"lifted component {j} has a singular denominator")
        object.__setattr__(self, "components", comps)

    @property
    def dimension(self) -> int:
        return len(self.components) - 1

    @property
    def is_lifted(self) -> bool:
        return True

    @property
    def zeroth(self) -> FactoredComponent:
        return self.components[0]

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.stack([c(z) for c in self.components], axis=-1)

    def boundary_values(self, theta):
        return self(np.exp(1j * np.asarray(theta, dtype=float)))

    def singular_angles(self) -> np.ndarray:
        return np.concatenate([c.singular_angles() for c in self.components])

    def project(self, z):
        return projective_ratio(self(z))

    def is_bounded(self) -> bool:
        return all(c.outer.is_bounded for c in self.components)

    def check_nonvanishing(self, size: int = 4096, radii=(0.0, 0.5, 0.9, 0.99, 1.0)) -> float:
        """Smallest lifting norm over a polar sample; positive means no common zero seen."""
        th = grid_angles(size)
        best = np.inf
        for r in radii:
            pts = r * np.exp(1j * th) if r > 0 else np.zeros(1)
            if r == 1.0:
                keep = _away_from(th, self.singular_angles(), TWO_PI / (8 * size))
                pts = pts[keep]
            best = min(best, float(np.min(np.linalg.norm(self(pts), axis=-1))))
        return best


def projective_ratio(values: np.ndarray) -> np.ndarray:
    """Affine coordinates z_j / z_0 of lifted points; infinite where z_0 = 0."""
    values = np.asarray(values)
    z0 = values[..., :1]
    with np.errstate(divide="ignore", invalid="ignore"):
        out = values[..., 1:] / z0
    out[np.broadcast_to(z0 == 0, out.shape)] = np.inf
    return out


# ---------------------------------------------------------------------------
# polynomial and rational discs


def factor_polynomial(coefs, boundary_roots: str = "reject"):
    """Split a polynomial into a Blaschke product and an outer polynomial.

    Roots within ``BOUNDARY_ROOT_TOL`` of the circle are rejected by default or,
    with ``boundary_roots="outer"``, kept in the outer part.
    """
    c = np.trim_zeros(np.asarray(coefs, dtype=complex), "b")
    if c.size == 0:
        return BlaschkeData(), RationalOuter((0.0,), (1.0,))
    if c.size == 1:
        return BlaschkeData(), RationalOuter((c[0],), (1.0,))
    roots = P.polyroots(c)
    mods = np.abs(roots)
    if boundary_roots == "reject" and np.any(np.abs(mods - 1.0) <= BOUNDARY_ROOT_TOL):
        raise ValueError("polynomial has a root on the unit circle")
    inner = roots[mods < 1.0 - BOUNDARY_ROOT_TOL]
    outer_roots = [r for r in roots if abs(r) >= 1.0 - BOUNDARY_ROOT_TOL]
    scale = c[-1]
    for a in inner:
        if a != 0:
            outer_roots.append(1.0 / np.conj(a))
            scale = scale * abs(a)
    num = scale * P.polyfromroots(outer_roots) if outer_roots else np.array([scale])
    return BlaschkeData.from_points(inner), RationalOuter(tuple(num), (1.0,))


def rational_component(num, den=(1.0,)) -> FactoredComponent:
    """Component ``num/den`` with ``den`` zero-free on the closed disc."""
    B, outer = factor_polynomial(num, boundary_roots="outer")
    return FactoredComponent(blaschke=B, outer=RationalOuter(outer.num, tuple(np.asarray(den, dtype=complex))))


def lifted_from_polynomials(polys: Sequence, den=(1.0,)) -> LiftedDisc:
    """Lifted disc (p_0/q, ..., p_n/q) from ascending coefficient lists."""
    return LiftedDisc(tuple(rational_component(p, den) for p in polys))


@dataclass(frozen=True, eq=False)
class ClosedPolyDisc:
    """Polynomial disc z -> (h_1(z), ..., h_n(z)) in affine space."""

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(np.asarray(c, dtype=complex) for c in self.coeffs)
        if not cs or any(c.size == 0 for c in cs):
            raise ValueError("each coordinate needs at least one coefficient")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def constant(cls, point) -> "ClosedPolyDisc":
        return cls(tuple([complex(p)] for p in np.atleast_1d(point)))

    @property
    def dimension(self) -> int:
        return len(self.coeffs)

    @property
    def is_lifted(self) -> bool:
        return False

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.stack([P.polyval(z, c) for c in self.coeffs], axis=-1)

    def lifted(self, z):
        """Values of the lifting (1, h)."""
        v = self(z)
        return np.concatenate([np.ones(v.shape[:-1] + (1,), dtype=complex), v], axis=-1)

    def boundary_values(self, theta):
        return self(np.exp(1j * np.asarray(theta, dtype=float)))

    def singular_angles(self) -> np.ndarray:
        return np.zeros(0)

    def to_factored(self) -> FactoredDisc:
        return FactoredDisc(tuple(rational_component(c) for c in self.coeffs))

    def to_lifted(self) -> LiftedDisc:
        return lifted_from_polynomials([[1.0]] + [c for c in self.coeffs])

    def __eq__(self, other):
        return isinstance(other, ClosedPolyDisc) and len(self.coeffs) == len(other.coeffs) and all(
            np.array_equal(a, b) for a, b in zip(self.coeffs, other.coeffs)
        )


# ---------------------------------------------------------------------------
# lifting of Nevanlinna discs


def lift(f: FactoredDisc) -> LiftedDisc:
    """Bounded lifting (t v_1..v_n, B_1 u_1 prod_{i!=1} v_i r_1 s_1, ...).

    ``h_j = u_j / v_j`` with ``u_j``, ``v_j`` bounded outer, ``t`` the join of the
    singular denominators and ``t = r_j t_j``.
    """
    splits = []
    for j, c in enumerate(f.components):
        u, v = c.outer.split()
        if not (u.is_bounded and v.is_bounded):
            raise ValueError(f"outer part of component {j + 1} cannot be split into bounded factors")
        splits.append((u, v))
    t = measure_join([c.sing_den for c in f.components])
    zeroth = FactoredComponent(outer=multiply_outer(*[v for _, v in splits]), sing_num=t)
    comps = [zeroth]
    for j, c in enumerate(f.components):
        others = [v for i, (_, v) in enumerate(splits) if i != j]
        r_j = t - c.sing_den
        comps.append(
            FactoredComponent(
                blaschke=c.blaschke,
                outer=multiply_outer(splits[j][0], *others),
                sing_num=r_j + c.sing_num,
            )
        )
    return LiftedDisc(tuple(comps))


# ---------------------------------------------------------------------------
# target sets


@dataclass(frozen=True, eq=False)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.atleast_1d(np.asarray(self.center, dtype=complex)))
        if not self.radius > 0:
            raise ValueError("ball radius must be positive")

    def signed_distance(self, p):
        return self.radius - np.linalg.norm(p - self.center, axis=-1)

    def offset(self, d: float) -> "Ball":
        return Ball(self.center, self.radius + d)

    def inscribed_balls(self):
        return [(self.center, self.radius)]

    def bounds(self):
        r = self.radius * (1 + 1j)
        return self.center - r, self.center + r

    def __eq__(self, other):
        return isinstance(other, Ball) and np.array_equal(self.center, other.center) and self.radius == other.radius


@dataclass(frozen=True, eq=False)
class Box:
    """Product of rectangles [Re lo, Re hi] x [Im lo, Im hi] per coordinate."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lo, dtype=complex))
        hi = np.atleast_1d(np.asarray(self.hi, dtype=complex))
        if lo.shape != hi.shape:
            raise ValueError("box corners have different dimensions")
        if np.any(hi.real <= lo.real) or np.any(hi.imag <= lo.imag):
            raise ValueError("box widths must be positive")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def center(self):
        return 0.5 * (self.lo + self.hi)

    def signed_distance(self, p):
        p = np.asarray(p)
        x = np.concatenate([p.real, p.imag], axis=-1)
        lo = np.concatenate([self.lo.real, self.lo.imag])
        hi = np.concatenate([self.hi.real, self.hi.imag])
        below, above = lo - x, x - hi
        outside = np.linalg.norm(np.maximum(np.maximum(below, above), 0.0), axis=-1)
        inside = np.min(np.minimum(-below, -above), axis=-1)
        return np.where(outside > 0, -outside, inside)

    def offset(self, d: float) -> "Box":
        return Box(self.lo - d * (1 + 1j), self.hi + d * (1 + 1j))

    def inscribed_balls(self):
        w = np.concatenate([(self.hi - self.lo).real, (self.hi - self.lo).imag])
        return [(self.center, 0.5 * float(np.min(w)))]

    def bounds(self):
        return self.lo, self.hi

    def __eq__(self, other):
        return isinstance(other, Box) and np.array_equal(self.lo, other.lo) and np.array_equal(self.hi, other.hi)


@dataclass(frozen=True, eq=False)
class Shell:
    """Points within ``width`` of the sphere ``|p - center| = radius``; width 0 is the sphere."""

    center: np.ndarray
    radius: float
    width: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "center", np.atleast_1d(np.asarray(self.center, dtype=complex)))
        if not self.radius > 0 or self.width < 0:
            raise ValueError("shell needs positive radius and nonnegative width")

    def signed_distance(self, p):
        return self.width - np.abs(np.linalg.norm(p - self.center, axis=-1) - self.radius)

    def offset(self, d: float) -> "Shell":
        return Shell(self.center, self.radius, self.width + d)

    def inscribed_balls(self, count: int = 64):
        if self.width <= 0:
            return []
        n = self.center.size
        if n == 1:
            dirs = np.exp(1j * grid_angles(count))[:, None]
        else:
            rng = np.random.default_rng(0)
            g = rng.normal(size=(count, n)) + 1j * rng.normal(size=(count, n))
            dirs = g / np.linalg.norm(g, axis=1, keepdims=True)
        return [(self.center + self.radius * d, self.width) for d in dirs]

    def bounds(self):
        r = (self.radius + self.width) * (1 + 1j)
        return self.center - r, self.center + r

    def __eq__(self, other):
        return (
            isinstance(other, Shell)
            and np.array_equal(self.center, other.center)
            and (self.radius, self.width) == (other.radius, other.width)
        )


Primitive = Union[Ball, Box, Shell]


def _extreme_points(p):
    """Points and a radius whose Minkowski sum has the same farthest-point distances as p."""
    if isinstance(p, Ball):
        return p.center[None, :], p.radius
    if isinstance(p, Shell):
        return p.center[None, :], p.radius + p.width
    n = p.lo.size
    if n > 3:
        lo, hi = p.bounds()
        return np.stack([lo, hi]), 0.0
    corners = [[]]
    for k in range(n):
        opts = [complex(a, b) for a in (p.lo[k].real, p.hi[k].real) for b in (p.lo[k].imag, p.hi[k].imag)]
        corners = [c + [o] for c in corners for o in opts]
    return np.array(corners, dtype=complex), 0.0


@dataclass(frozen=True, eq=False)
class SetGeometry:
    """Finite union of primitives; membership means signed distance > tolerance."""

    primitives: tuple
    tolerance: float = 0.0

    def __post_init__(self):
        prims = tuple(self.primitives)
        if self.tolerance < 0:
            raise ValueError("tolerance must be nonnegative")
        dims = {np.size(p.center) for p in prims}
        if len(dims) > 1:
            raise ValueError("primitives of different dimensions")
        object.__setattr__(self, "primitives", prims)

    @property
    def dimension(self) -> int:
        return int(np.size(self.primitives[0].center)) if self.primitives else 0

    @property
    def is_empty(self) -> bool:
        return not self.primitives

    def signed_distance(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=complex)
        if p.shape[-1] != self.dimension:
            p = p.reshape(p.shape + (1,)) if self.dimension == 1 else p
        if not self.primitives:
            return np.full(p.shape[:-1], -np.inf)
        with np.errstate(invalid="ignore"):
            d = np.max([prim.signed_distance(p) for prim in self.primitives], axis=0)
        return np.where(np.isfinite(d), d, -np.inf)

    def contains(self, p) -> np.ndarray:
        return self.signed_distance(p) > self.tolerance

    def with_tolerance(self, tol: float) -> "SetGeometry":
        return SetGeometry(self.primitives, tol)

    def offset(self, d: float) -> "SetGeometry":
        """Grow (d > 0) or shrink (d < 0) every primitive."""
        return SetGeometry(tuple(p.offset(d) for p in self.primitives), self.tolerance)

    def inscribed_balls(self):
        out = []
        for p in self.primitives:
            out.extend(p.inscribed_balls())
        return out

    def bounds(self):
        lo = np.min([p.bounds()[0] for p in self.primitives], axis=0)
        hi = np.max([p.bounds()[1] for p in self.primitives], axis=0)
        return lo, hi

    @property
    def diameter(self) -> float:
        """Exact for unions of balls, shells and boxes (boxes through their vertices)."""
        reps = [_extreme_points(p) for p in self.primitives]
        best = 0.0
        for pa, ra in reps:
            for pb, rb in reps:
                d = np.linalg.norm(pa[:, None, :] - pb[None, :, :], axis=-1)
                best = max(best, float(np.max(d)) + ra + rb)
        return best

    @property
    def center(self) -> np.ndarray:
        lo, hi = self.bounds()
        return 0.5 * (lo + hi)

    def __eq__(self, other):
        return (
            isinstance(other, SetGeometry)
            and self.tolerance == other.tolerance
            and len(self.primitives) == len(other.primitives)
            and all(a == b for a, b in zip(self.primitives, other.primitives))
        )

    def compact_samples(self, count: int = 1024):
        """Points on the boundary of each primitive (where polynomial moduli peak).

        Returns ``(points, spacing)`` where ``spacing`` lists, per primitive, the
        arc-length data used by :func:`polynomial_sup_inflation`.
        """
        if self.dimension != 1:
            raise NotImplementedError("compact sampling is implemented for planar sets")
        pts, pieces = [], []
        th = grid_angles(count)
        for p in self.primitives:
            if isinstance(p, Ball):
                pts.append(p.center[0] + p.radius * np.exp(1j * th))
                pieces.append(("circle", count))
            elif isinstance(p, Shell):
                for r in {p.radius - p.width, p.radius + p.width}:
                    if r > 0:
                        pts.append(p.center[0] + r * np.exp(1j * th))
                        pieces.append(("circle", count))
            else:
                lo, hi = p.lo[0], p.hi[0]
                corners = [lo, complex(hi.real, lo.imag), hi, complex(lo.real, hi.imag), lo]
                per = count // 4
                for a, b in zip(corners, corners[1:]):
                    s = np.arange(per) / per
                    pts.append(a + (b - a) * s)
                    pieces.append(("segment", per))
        return np.concatenate(pts), pieces


def polynomial_sup_inflation(pieces, degree: int) -> float:
    """Factor bounding sup_K |p| by the sampled maximum for polynomials of a given degree.

    Circles: Bernstein's inequality for trigonometric polynomials; segments:
    Markov's inequality.  Returns ``inf`` when the sampling is too coarse.
    """
    worst = 1.0
    for kind, count in pieces:
        if kind == "circle":
            slack = np.pi * degree / count
        else:
            slack = degree**2 / count
        worst = max(worst, np.inf if slack >= 1 else 1.0 / (1.0 - slack))
    return worst


# ---------------------------------------------------------------------------
# boundary sampling


def _away_from(theta, bad, gap):
    if len(bad) == 0:
        return np.ones(np.shape(theta), dtype=bool)
    d = circular_distance(np.asarray(theta)[:, None], np.asarray(bad)[None, :])
    return np.all(d > gap, axis=1)


@dataclass
class BoundarySamples:
    angles: np.ndarray
    points: np.ndarray
    skipped: np.ndarray
    size: int

    @property
    def skipped_fraction(self) -> float:
        return len(self.skipped) / self.size


def boundary_samples(d, N: int) -> BoundarySamples:
    """Boundary values at N uniform angles, skipping angles near singular points.

    Values come from the exact boundary formulas of the factors, which are the
    nontangential limits away from the atoms.  Angles within 2pi/(8N) of an atom
    (or another singular point the disc reports) are skipped and listed.
    """
    if N < 8 or N & (N - 1):
        raise ValueError("N must be a power of two")
    th = grid_angles(N)
    keep = _away_from(th, d.singular_angles(), TWO_PI / (8 * N))
    pts = d.boundary_values(th[keep])
    return BoundarySamples(th[keep], pts, th[~keep], N)


@dataclass
class BoundaryReport:
    fraction_inside: float
    worst_margin: float
    size: int
    skipped_fraction: float

    @property
    def accepted(self) -> bool:
        return self.fraction_inside == 1.0

    def as_dict(self) -> dict:
        return {
            "fraction_inside": self.fraction_inside,
            "worst_margin": self.worst_margin,
            "grid": self.size,
            "skipped_fraction": self.skipped_fraction,
        }


def affine_points(d, values) -> np.ndarray:
    return projective_ratio(values) if d.is_lifted else np.asarray(values)


def check_boundary_in(d, X: SetGeometry, N: int) -> BoundaryReport:
    s = boundary_samples(d, N)
    pts = affine_points(d, s.points)
    sd = X.signed_distance(pts)
    inside = sd > X.tolerance
    return BoundaryReport(
        fraction_inside=float(np.mean(inside)) if inside.size else 0.0,
        worst_margin=float(np.min(sd)) if sd.size else -np.inf,
        size=N,
        skipped_fraction=s.skipped_fraction,
    )


def check_bounded_quotient(d: Union[FactoredDisc, LiftedDisc]) -> bool:
    """Every component's outer part is bounded (inner parts are unimodular)."""
    if isinstance(d, LiftedDisc):
        return d.is_bounded()
    return all(c.outer.is_bounded for c in d.components)


def blaschke_normalized_bounded(d: LiftedDisc) -> bool:
    """Whether the lifting with zeroth component a Blaschke product has bounded entries.

    Dividing by the zeroth component's singular and outer parts keeps the others
    bounded only if the zeroth singular measure is dominated by each of theirs and
    the outer quotients stay bounded.
    """
    f0 = d.zeroth
    for c in d.components[1:]:
        if not f0.sing_num <= c.sing_num:
            return False
        if isinstance(f0.outer, RationalOuter) and isinstance(c.outer, RationalOuter):
            q = RationalOuter(
                tuple(P.polymul(c.outer.num, f0.outer.den)), tuple(P.polymul(c.outer.den, f0.outer.num))
            )
            if not q.is_bounded:
                return False
        elif not (f0.outer.is_bounded and c.outer.is_bounded):
            return False
    return True
