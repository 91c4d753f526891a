"""Disc gluing along arcs, ball discs and the G-class ratio test.

Given a closed polynomial disc ``h`` and, for each arc ``A_j`` of a partition of
the circle, a closed lifted disc ``f_j`` centered at ``(1, h(eta_j))``, the glued
map is

    g(z) = (1, h(z)) + sum_j [ f_j(alpha_j(z)) - f_j(alpha_j(0)) ]

where ``alpha_j = exp(-m (1 - W_j))`` and ``W_j`` is the holomorphic completion
of the harmonic measure of ``A_j``.  On ``A_j`` the boundary values of ``g`` stay
close to ``f_j(T)`` once ``m`` is large, so the boundary integral of
``log |g_0|`` bounds the extremal function at ``h(0)`` from above.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .boundary import TWO_PI, Arc, circular_distance, grid_angles, harmonic_measure_arc
from .discs import (
    BoundaryReport,
    ClosedPolyDisc,
    FactoredComponent,
    LiftedDisc,
    SetGeometry,
    boundary_samples,
    lifted_from_polynomials,
    projective_ratio,
)
from .functionals import J_of

# off-arc terms below this size are dropped from the sum
NEGLIGIBLE = 1e-17


def alpha(A: Arc, m: float, z):
    """Outer function with modulus 1 on ``A``, ``e^-m`` off ``A`` and ``alpha(0) > 0``."""
    if m == 0:
        return np.ones(np.shape(z), dtype=complex)
    _, W = harmonic_measure_arc(A, z)
    W = np.minimum(W.real, 1.0) + 1j * W.imag
    return np.exp(-m * (1.0 - W))


def arc_cells(A: Arc, N: int):
    """Midpoints and sigma-weights of the grid cells of size 2pi/N clipped to ``A``."""
    if A.is_full:
        return grid_angles(N), np.full(N, 1.0 / N)
    h = TWO_PI / N
    k0 = int(np.floor(A.start / h + 0.5))
    k1 = int(np.ceil(A.end / h + 0.5))
    k = np.arange(k0, k1 + 1)
    lo = np.maximum((k - 0.5) * h, A.start)
    hi = np.minimum((k + 0.5) * h, A.end)
    keep = hi > lo
    return 0.5 * (lo + hi)[keep], (hi - lo)[keep] / TWO_PI


def alpha_moments(A: Arc, m: float, k_max: int, N: int = 2**16, method: str = "conjugate") -> np.ndarray:
    """Moments int_A (alpha*)^k dsigma, k = 0..k_max.

    On ``A`` the boundary value is ``exp(i m t)`` with ``t = Im W``.  The default
    method integrates in ``t``: the push-forward of sigma|A has density
    ``sin(L/2) / (2 cosh(pi t) + 2 cos(L/2))`` (``L`` the arc length), smooth and
    exponentially decaying, so a trapezoid rule with at least N nodes and eight
    per oscillation period is accurate to rounding.  ``method="exact"`` is the
    Fourier transform of that density in closed form, ``sinh(k m a)/sinh(k m)``,
    which stays meaningful where the moments fall below rounding level.
    ``method="grid"`` uses the uniform circle grid of size N clipped to the arc,
    whose error near the endpoints is about 1/N.
    """
    if method not in ("conjugate", "grid", "exact"):
        raise ValueError(f"unknown method {method!r}")
    if method == "exact" and not A.is_full:
        a = A.fraction
        out = [complex(a)]
        for k in range(1, k_max + 1):
            w = k * m
            # sinh(w a) / sinh(w), written to stay accurate when both overflow
            out.append(complex(np.exp(-w * (1.0 - a)) * np.expm1(-2.0 * w * a) / np.expm1(-2.0 * w)))
        return np.array(out)
    if method in ("grid", "exact") or A.is_full:
        theta, w = arc_cells(A, N)
        vals = alpha(A, m, np.exp(1j * theta))
        return np.array([np.sum(w * vals**k) for k in range(k_max + 1)])
    half = 0.5 * A.length
    s, c = np.sin(half), np.cos(half)
    # the density decays like exp(-pi |t|); past 40/pi the tail mass is below 1e-17
    T = 40.0 / np.pi + np.log(1.0 + 1.0 / max(s, 1e-300)) / np.pi
    step = min(1.0 / (8.0 * max(1.0, m * k_max)), 2.0 * T / N)
    t = np.arange(-T, T + step / 2, step)
    dens = s / (2.0 * np.cosh(np.pi * t) + 2.0 * c)
    return np.array([np.sum(dens * np.exp(1j * k * m * t)) * step for k in range(k_max + 1)])


# ---------------------------------------------------------------------------
# ball discs and the G-class test


@dataclass
class GClassReport:
    max_ratio: float
    passes: bool
    radius_condition: Optional[float] = None


def g_class_check(d, N: int = 2**12) -> GClassReport:
    """max |lifting| / min |lifting| over the circle; passes when below 2."""
    norms = np.linalg.norm(d.boundary_values(grid_angles(N)), axis=-1)
    ratio = float(np.max(norms) / np.min(norms))
    return GClassReport(ratio, ratio < 2.0)


def ball_disc(z, c, r: float):
    """Closed disc centered at ``z`` with boundary on the sphere of the ball B(c, r).

    The lifting is ``(phi/rho, (z - c) + c phi/rho)`` where ``rho = r/|z - c|`` and
    ``phi`` is the disc automorphism exchanging 0 and ``rho``; its zeroth component
    has a single zero at ``rho``, so J equals ``log|z - c| - log r``.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    dist = float(np.linalg.norm(z - c))
    if not dist > r:
        raise ValueError("ball_disc needs the center point outside the closed ball")
    rho = r / dist
    polys = [[1.0, -1.0 / rho]] + [[z[i], -rho * (z[i] - c[i]) - c[i] / rho] for i in range(z.size)]
    disc = lifted_from_polynomials(polys, den=[1.0, -rho])
    report = g_class_check(disc)
    nc = float(np.linalg.norm(c))
    report.radius_condition = (1 + (nc + r) ** 2) / (1 + (nc - r) ** 2)
    return disc, report


def constant_lifted(point) -> LiftedDisc:
    p = np.atleast_1d(np.asarray(point, dtype=complex))
    return LiftedDisc((FactoredComponent.constant(1.0),) + tuple(FactoredComponent.constant(x) for x in p))


# ---------------------------------------------------------------------------
# gluing


@dataclass(frozen=True, eq=False)
class Attachment:
    """A closed lifted disc attached at an anchor, with the data that made it."""

    disc: object
    kind: str  # "ball" or "constant"
    params: dict = field(default_factory=dict)

    @classmethod
    def ball(cls, z, c, r) -> "Attachment":
        d, _ = ball_disc(z, c, r)
        return cls(d, "ball", {"z": np.atleast_1d(z), "c": np.atleast_1d(c), "r": float(r)})

    @classmethod
    def constant(cls, z) -> "Attachment":
        return cls(constant_lifted(z), "constant", {"z": np.atleast_1d(z)})

    def J(self) -> float:
        return 0.0 if self.kind == "constant" else J_of(self.disc).value

    def __eq__(self, other):
        if not isinstance(other, Attachment) or self.kind != other.kind:
            return False
        if self.params.keys() != other.params.keys():
            return False
        return all(np.array_equal(self.params[k], other.params[k]) for k in self.params)

    __hash__ = None


@dataclass(frozen=True)
class GluingSpec:
    base: ClosedPolyDisc
    arcs: tuple
    anchors: tuple
    attached: tuple
    m: float

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(self.arcs))
        object.__setattr__(self, "anchors", tuple(float(a) for a in self.anchors))
        object.__setattr__(self, "attached", tuple(self.attached))
        k = len(self.arcs)
        if k == 0 or len(self.anchors) != k or len(self.attached) != k:
            raise ValueError("arcs, anchors and attached discs must have equal nonzero length")
        if self.m < 0:
            raise ValueError("m must be nonnegative")
        total = sum(a.length for a in self.arcs)
        if abs(total - TWO_PI) > 1e-9:
            raise ValueError("arcs must cover the circle")
        order = sorted(self.arcs, key=lambda a: a.start % TWO_PI)
        for a, b in zip(order, order[1:] + order[:1]):
            if k > 1 and circular_distance(a.end, b.start) > 1e-9:
                raise ValueError("arcs must be adjacent and interior-disjoint")
        for A, eta, att in zip(self.arcs, self.anchors, self.attached):
            if not A.contains(eta):
                raise ValueError("anchor outside its arc")
            want = self.base.lifted(np.exp(1j * eta))
            got = att.disc(0.0)
            if np.max(np.abs(got - want)) > 1e-10 * max(1.0, np.max(np.abs(want))):
                raise ValueError("attached disc is not centered at the base boundary point")

    @property
    def fractions(self) -> np.ndarray:
        return np.array([a.fraction for a in self.arcs])

    def with_m(self, m: float) -> "GluingSpec":
        return GluingSpec(self.base, self.arcs, self.anchors, self.attached, m)

    def comparison_value(self) -> float:
        """sum_j a_j J(f_j), the value the glued integral approaches."""
        return float(sum(a.fraction * att.J() for a, att in zip(self.arcs, self.attached)))


def _lipschitz_near_zero(disc, radius: float) -> float:
    pts = radius * np.exp(1j * grid_angles(16))
    v0 = disc(0.0)
    return float(np.max(np.linalg.norm(disc(pts) - v0, axis=-1)) / radius)


class GluedDisc:
    """Bounded holomorphic map into C^{n+1} built from a gluing spec."""

    is_lifted = True

    def __init__(self, spec: GluingSpec):
        self.spec = spec
        self.alpha0 = np.array([float(alpha(A, spec.m, 0.0).real) for A in spec.arcs])
        self.center_values = [att.disc(a0) for att, a0 in zip(spec.attached, self.alpha0)]
        # crude bound on |f_j(alpha) - f_j(alpha(0))| for |alpha| <= max(alpha0, e^-m)
        self.off_arc_bound = []
        for att, a0 in zip(spec.attached, self.alpha0):
            rad = max(a0, np.exp(-spec.m))
            if att.kind == "constant" or rad == 0:
                self.off_arc_bound.append(0.0)
            else:
                self.off_arc_bound.append(4.0 * rad * _lipschitz_near_zero(att.disc, min(0.5, 4 * rad)))

    @property
    def dimension(self) -> int:
        return self.spec.base.dimension

    def _sum(self, z, on_circle: bool):
        z = np.asarray(z, dtype=complex)
        out = self.spec.base.lifted(z)
        theta = np.angle(z) if on_circle else None
        for A, att, cv, bound in zip(self.spec.arcs, self.spec.attached, self.center_values, self.off_arc_bound):
            if att.kind == "constant":
                continue
            if on_circle and bound < NEGLIGIBLE:
                mask = A.contains(np.mod(theta, TWO_PI))
                if np.any(mask):
                    out[mask] += att.disc(alpha(A, self.spec.m, z[mask])) - cv
            else:
                out = out + att.disc(alpha(A, self.spec.m, z)) - cv
        return out

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) >= 1.0):
            raise ValueError("interior evaluation needs |z| < 1; use boundary_values")
        return self._sum(z, on_circle=False)

    def boundary_values(self, theta):
        return self._sum(np.exp(1j * np.asarray(theta, dtype=float)), on_circle=True)

    def singular_angles(self) -> np.ndarray:
        return np.array([e for A in self.spec.arcs for e in A.endpoints()])

    def project(self, z):
        return projective_ratio(self(z))


def glue(spec: GluingSpec) -> GluedDisc:
    g = GluedDisc(spec)
    v0 = g(np.zeros(1))[0]
    if not np.all(np.isfinite(v0)):
        raise OverflowError("glued disc is not finite at the origin")
    return g


@dataclass
class GluingBound:
    bound: float
    report: BoundaryReport
    comparison: float
    m: float
    arcs: int
    max_distance: Optional[float] = None

    @property
    def valid(self) -> bool:
        return self.report.accepted

    def as_dict(self) -> dict:
        return {
            "bound": self.bound,
            "valid": self.valid,
            "comparison": self.comparison,
            "m": self.m,
            "arcs": self.arcs,
            "max_distance": self.max_distance,
            "boundary": self.report.as_dict(),
        }


def _max_distance_to_attached(g: GluedDisc, s) -> float:
    """Largest distance from a boundary sample on A_j to the curve f_j(T).

    On A_j the boundary value of alpha_j is unimodular, so f_j(alpha_j*) lies on
    f_j(T) and |g* - f_j(alpha_j*)| bounds the distance from above.
    """
    worst = 0.0
    for A, att in zip(g.spec.arcs, g.spec.attached):
        mask = A.contains(s.angles)
        if not np.any(mask) or att.kind == "constant":
            continue
        a = alpha(A, g.spec.m, np.exp(1j * s.angles[mask]))
        on_curve = att.disc.boundary_values(np.mod(np.angle(a), TWO_PI))
        worst = max(worst, float(np.max(np.linalg.norm(s.points[mask] - on_curve, axis=-1))))
    return worst


def gluing_upper_bound(spec: GluingSpec, X: SetGeometry, N: int = 2**14, distances: bool = False) -> GluingBound:
    """Boundary integral of log|g_0| minus log|g_0(0)| with a membership report."""
    g = glue(spec)
    s = boundary_samples(g, N)
    pts = projective_ratio(s.points)
    sd = X.signed_distance(pts)
    inside = sd > X.tolerance
    report = BoundaryReport(float(np.mean(inside)), float(np.min(sd)), N, s.skipped_fraction)
    at0 = float(np.log(abs(g(np.zeros(1))[0, 0])))
    bound = float(np.mean(np.log(np.abs(s.points[:, 0])))) - at0
    return GluingBound(
        bound,
        report,
        spec.comparison_value(),
        spec.m,
        len(spec.arcs),
        _max_distance_to_attached(g, s) if distances else None,
    )


# ---------------------------------------------------------------------------
# spec construction from a base disc


@dataclass
class Candidate:
    """An attachable ball: center, attached radius, and the radius of the ball in X."""

    center: np.ndarray
    radius: float
    outer_radius: float


def candidate_balls(X: SetGeometry, shrink: float) -> list:
    out = []
    for c, R in X.inscribed_balls():
        out.append(Candidate(np.atleast_1d(c), R * (1.0 - shrink), R))
    return out


def ball_value(points, balls: Sequence[Candidate]) -> np.ndarray:
    """min over candidate balls of log(|w - c| / r), clipped at 0 (single-ball envelope surrogate)."""
    pts = np.asarray(points)
    vals = np.full(pts.shape[:-1], np.inf)
    for b in balls:
        vals = np.minimum(vals, np.log(np.linalg.norm(pts - b.center, axis=-1) / b.radius))
    return np.maximum(vals, 0.0)


def spec_from_base(
    base: ClosedPolyDisc,
    X: SetGeometry,
    m: float = 32.0,
    shrink: float = 0.04,
    initial_arcs: int = 8,
    max_depth: int = 10,
    samples_per_arc: int = 33,
) -> GluingSpec:
    """Partition the circle adaptively and attach ball or constant discs.

    An arc whose base image lies in X gets a constant disc.  Otherwise the anchor
    (arc midpoint) gets the ball disc of the cheapest candidate ball; the arc is
    bisected while the base variation over it, scaled by the ball disc's
    contraction ``r/|h(eta) - c|``, exceeds half the margin between the attached
    and the enclosing ball.  At the last level the cheapest fitting ball is used.
    """
    balls = candidate_balls(X, shrink)
    if not balls:
        raise ValueError("no balls to attach")
    arcs, anchors, attached = [], [], []

    def visit(s, e, depth):
        th = np.linspace(s, e, samples_per_arc)
        eta = 0.5 * (s + e)
        pts = base(np.exp(1j * th))
        h_eta = base(np.exp(1j * np.array([eta])))[0]
        last = depth >= max_depth
        if np.min(X.signed_distance(pts)) > X.tolerance:
            arcs.append(Arc(s, e)), anchors.append(eta), attached.append(Attachment.constant(h_eta))
            return
        spread = float(np.max(np.linalg.norm(pts - h_eta, axis=-1)))
        # (cost, fits) per ball; the cheapest ball is used when it fits, otherwise split
        options = []
        for b in balls:
            dist = float(np.linalg.norm(h_eta - b.center))
            if dist <= b.radius:
                continue
            slack = (b.outer_radius - b.radius) - X.tolerance
            options.append((np.log(dist / b.radius), spread * b.radius / dist < 0.5 * slack, b))
        options.sort(key=lambda o: o[0])
        if options and (options[0][1] or last):
            fitting = [o for o in options if o[1]]
            best = (fitting or options)[0][2]
            arcs.append(Arc(s, e)), anchors.append(eta), attached.append(Attachment.ball(h_eta, best.center, best.radius))
            return
        if not last:
            visit(s, eta, depth + 1)
            visit(eta, e, depth + 1)
            return
        arcs.append(Arc(s, e)), anchors.append(eta), attached.append(Attachment.constant(h_eta))

    step = TWO_PI / initial_arcs
    for i in range(initial_arcs):
        visit(i * step, (i + 1) * step, 0)
    return GluingSpec(base, arcs, anchors, attached, m)
