"""Certified upper bounds for the extremal function from three disc families.

Every returned value is witnessed by a disc (or gluing spec) whose boundary was
checked to lie in X at a stated sampling resolution; re-evaluating the
certificate reproduces the value.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import minimize

from .boundary import grid_angles
from .discs import BOUNDARY_ROOT_TOL, ClosedPolyDisc, SetGeometry, check_boundary_in, lifted_from_polynomials
from .functionals import I_of, J_of
from .glue import (
    GluingSpec,
    ball_disc,
    ball_value,
    candidate_balls,
    constant_lifted,
    gluing_upper_bound,
    spec_from_base,
)
from .parallel import child_seeds, pmap

FAMILIES = ("ball", "rational", "glued")
# multiplicative shrink of attached balls; keeps the certificate strictly inside X
BALL_SHRINK = 1e-4


@dataclass
class EnvelopeResult:
    value: float
    family: str
    certificate: object = None
    validity: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.certificate is not None and bool(np.isfinite(self.value))


def as_point(z, dimension: int) -> np.ndarray:
    p = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
    if p.size != dimension:
        raise ValueError(f"point has {p.size} coordinates, set has dimension {dimension}")
    return p


def _constant_result(z, family: str) -> EnvelopeResult:
    return EnvelopeResult(0.0, family, constant_lifted(z), {"kind": "constant", "fraction_inside": 1.0})


def _require(X: SetGeometry):
    if X.is_empty:
        raise ValueError("X is empty")


# ---------------------------------------------------------------------------
# ball discs


def _ball_objective(x, z, X: SetGeometry, shrink: float):
    n = z.size
    c = x[:n] + 1j * x[n:]
    r = (1.0 - shrink) * float(X.signed_distance(c[None, :])[0])
    if r <= 0:
        return np.inf
    d = np.linalg.norm(z - c)
    return np.log(d / r) if d > r else 0.0


def ranked_balls(X: SetGeometry, z, shrink: float = BALL_SHRINK):
    """Inscribed balls (value, center, radius), cheapest first."""
    out = []
    for c, R in X.inscribed_balls():
        c = np.atleast_1d(c)
        r = (1.0 - shrink) * R
        out.append((float(np.log(max(np.linalg.norm(z - c), r) / r)), c, r))
    out.sort(key=lambda t: t[0])
    return out


def best_ball(X: SetGeometry, z, shrink: float = BALL_SHRINK, refine: int = 3):
    """(value, center, radius) minimizing log|z - c| - log r over balls in X.

    The ``refine`` cheapest inscribed balls are improved by a simplex search over
    the center, with the radius set by the distance to the boundary of X.
    """
    z = as_point(z, X.dimension)
    ranked = ranked_balls(X, z, shrink)
    if not ranked:
        return (np.inf, None, None)
    best = ranked[0]
    for val, c, r in ranked[:refine]:
        x0 = np.concatenate([c.real, c.imag])
        res = minimize(
            _ball_objective,
            x0,
            args=(z, X, shrink),
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 400 * x0.size},
        )
        if np.isfinite(res.fun) and res.fun < best[0]:
            n = z.size
            c = res.x[:n] + 1j * res.x[n:]
            best = (float(res.fun), c, (1.0 - shrink) * float(X.signed_distance(c[None, :])[0]))
    return best


def envelope_ball(X: SetGeometry, z, shrink: float = BALL_SHRINK, N: int = 4096) -> EnvelopeResult:
    """Envelope over ball discs and constant discs."""
    _require(X)
    z = as_point(z, X.dimension)
    if X.contains(z[None, :])[0]:
        return _constant_result(z, "ball")
    val, c, r = best_ball(X, z, shrink)
    if c is None:
        return EnvelopeResult(np.inf, "ball", None, {"reason": "no inscribed balls"})
    disc, g = ball_disc(z, c, r)
    report = check_boundary_in(disc, X, N)
    value = J_of(disc).value
    validity = {
        "kind": "ball",
        "center": c,
        "radius": r,
        "g_class_ratio": g.max_ratio,
        **report.as_dict(),
    }
    if not report.accepted:
        return EnvelopeResult(np.inf, "ball", None, {"reason": "ball disc left X", **validity})
    return EnvelopeResult(value, "ball", disc, validity)


# ---------------------------------------------------------------------------
# rational (polynomial lifting) discs


def ball_seed_polys(z, c, r, degree: int):
    """The ball disc as a degree-1 polynomial lifting, padded to ``degree``."""
    rho = r / np.linalg.norm(z - c)
    polys = [[1.0, -1.0 / rho]] + [[z[i], -rho * (z[i] - c[i]) - c[i] / rho] for i in range(z.size)]
    return [np.pad(np.asarray(p, dtype=complex), (0, degree - 1)) for p in polys]


def affine_seed_polys(z, c, degree: int):
    """The complex line z + (c - z) zeta, whose boundary circle passes through c."""
    polys = [[1.0, 0.0]] + [[z[i], c[i] - z[i]] for i in range(z.size)]
    return [np.pad(np.asarray(p, dtype=complex), (0, degree - 1)) for p in polys]


def _pack(polys) -> np.ndarray:
    tail = np.concatenate([p[1:] for p in polys])
    return np.concatenate([tail.real, tail.imag])


def _unpack(x, z, degree: int):
    half = x.size // 2
    tail = x[:half] + 1j * x[half:]
    heads = np.concatenate([[1.0], z])
    return [np.concatenate([[heads[j]], tail[j * degree : (j + 1) * degree]]) for j in range(z.size + 1)]


def inside_zero_cost(p0) -> float:
    """-sum log|a| over roots of p0 in the open disc; inf when a root is on the circle."""
    c = np.trim_zeros(np.asarray(p0, dtype=complex), "b")
    if c.size <= 1:
        return 0.0 if c.size == 1 else np.inf
    mods = np.abs(P.polyroots(c))
    if np.any(np.abs(mods - 1.0) <= BOUNDARY_ROOT_TOL):
        return np.inf
    inside = mods[mods < 1.0]
    if np.any(inside == 0):
        return np.inf
    return float(-np.sum(np.log(inside)))


class _RationalObjective:
    def __init__(self, X: SetGeometry, z, degree: int, samples: int = 256, weight: float = 100.0):
        self.X, self.z, self.degree, self.weight = X, z, degree, weight
        self.vander = np.vander(np.exp(1j * grid_angles(samples)), degree + 1, increasing=True)

    def margin(self, polys) -> float:
        vals = self.vander @ np.stack(polys, axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            pts = vals[:, 1:] / vals[:, :1]
        if not np.all(np.isfinite(pts)):
            return -np.inf
        return float(np.min(self.X.signed_distance(pts))) - self.X.tolerance

    def __call__(self, x) -> float:
        polys = _unpack(x, self.z, self.degree)
        cost = inside_zero_cost(polys[0])
        if not np.isfinite(cost):
            return 1e6
        m = self.margin(polys)
        if not np.isfinite(m):
            return 1e6
        return cost + self.weight * max(0.0, -m)


def _rational_restart(args):
    X, z, degree, x0, seed, maxfev = args
    rng = np.random.default_rng(seed)
    f = _RationalObjective(X, z, degree)
    start = x0 + rng.normal(scale=0.1, size=x0.size) * (1.0 + np.abs(x0))
    res = minimize(f, start, method="Nelder-Mead", options={"maxfev": maxfev, "xatol": 1e-9, "fatol": 1e-12})
    return res.x, float(res.fun)


def _certify_polys(polys, X: SetGeometry, N: int):
    """Exact post-check of a polynomial lifting; returns (value, disc, report) or None."""
    try:
        disc = lifted_from_polynomials(polys)
    except ValueError:
        return None
    report = check_boundary_in(disc, X, N)
    if not report.accepted:
        return None
    return I_of(disc).value, disc, report


def envelope_rational(
    X: SetGeometry,
    z,
    degree: int = 3,
    budget: int = 20,
    seed: int = 0,
    N: int = 4096,
    shrink: float = BALL_SHRINK,
    maxfev: int = 800,
    max_seed_balls: int = 8,
) -> EnvelopeResult:
    """Simplex search over polynomial liftings (p_0, ..., p_n) with p_0(0) = 1, p(0) = z.

    Seeds are the ball discs of the cheapest inscribed balls and the complex lines
    through their centers; ``budget`` perturbed restarts run from the seeds in turn.  The
    penalized search proposes and the exact boundary check at resolution N decides.
    """
    if degree < 1 or budget < 1:
        raise ValueError("need degree >= 1 and budget >= 1")
    _require(X)
    z = as_point(z, X.dimension)
    if X.contains(z[None, :])[0]:
        return _constant_result(z, "rational")
    seeds = []
    for _, c, r in ranked_balls(X, z, shrink)[:max_seed_balls]:
        if np.linalg.norm(z - c) > r:
            seeds.append(ball_seed_polys(z, c, r, degree))
        seeds.append(affine_seed_polys(z, c, degree))
    _, c, r = best_ball(X, z, shrink)
    if c is not None:
        seeds.insert(0, ball_seed_polys(z, c, r, degree))
    x_seeds = [_pack(s) for s in seeds]

    candidates = list(seeds)
    jobs = [(X, z, degree, x_seeds[i % len(x_seeds)], s, maxfev) for i, s in enumerate(child_seeds(seed, budget))]
    for x, _ in pmap(_rational_restart, jobs):
        candidates.append(_unpack(x, z, degree))

    best = None
    for polys in candidates:
        out = _certify_polys(polys, X, N)
        if out is not None and (best is None or out[0] < best[0]):
            best = out + (polys,)
    if best is None:
        return EnvelopeResult(np.inf, "rational", None, {"reason": "no feasible disc", "budget": budget})
    value, disc, report, polys = best
    validity = {"kind": "rational", "degree": degree, "budget": budget, "seed": seed, "polys": polys, **report.as_dict()}
    return EnvelopeResult(value, "rational", disc, validity)


# ---------------------------------------------------------------------------
# glued discs


def _surrogate(x, z, balls, zeta):
    c = np.concatenate([[z], x[: x.size // 2] + 1j * x[x.size // 2 :]])
    return float(np.mean(ball_value(P.polyval(zeta, c)[:, None], balls)))


def _base_restart(args):
    z, balls, degree, seed, maxfev = args
    rng = np.random.default_rng(seed)
    zeta = np.exp(1j * grid_angles(512))
    scale = max(np.linalg.norm(b.center - z) for b in balls)
    x0 = rng.normal(scale=0.5 * scale, size=2 * degree) / np.sqrt(degree)
    res = minimize(_surrogate, x0, args=(z, balls, zeta), method="Nelder-Mead", options={"maxfev": maxfev})
    return res.x, float(res.fun)


def search_bases(X: SetGeometry, z: complex, degree: int, budget: int, seed: int, shrink: float, keep: int = 3):
    """Planar polynomial bases h with h(0) = z minimizing the ball-envelope average over h(T)."""
    balls = candidate_balls(X, shrink)
    jobs = [(z, balls, degree, s, 800 * degree) for s in child_seeds(seed, budget)]
    found = sorted(pmap(_base_restart, jobs), key=lambda t: t[1])
    out = [ClosedPolyDisc(([z],))]
    for x, _ in found[:keep]:
        out.append(ClosedPolyDisc((np.concatenate([[z], x[: degree] + 1j * x[degree:]]),)))
    return out


def escalate_m(spec: GluingSpec, X: SetGeometry, N: int, m_max: float = 512.0, tol: float = 1e-3):
    """Double m until the bound is valid and changes by less than ``tol``."""
    prev = None
    while True:
        gb = gluing_upper_bound(spec, X, N)
        if gb.valid and prev is not None and prev.valid and abs(gb.bound - prev.bound) < tol:
            return spec, gb
        if spec.m * 2 > m_max:
            return spec, gb
        prev = gb
        spec = spec.with_m(spec.m * 2)


def envelope_glued(
    X: SetGeometry,
    z,
    budget: int = 8,
    seed: int = 0,
    N: int = 2**14,
    degree: int = 3,
    shrink: float = 0.04,
    m0: float = 16.0,
) -> EnvelopeResult:
    """Glue ball discs along arcs of optimized polynomial bases; fall back to the ball family.

    Planar sets only for the base search; in higher dimension the result is the
    ball envelope.
    """
    _require(X)
    zp = as_point(z, X.dimension)
    if X.contains(zp[None, :])[0]:
        return _constant_result(zp, "glued")
    ball = envelope_ball(X, zp)
    best = None
    tried = 0
    if X.dimension == 1:
        for base in search_bases(X, complex(zp[0]), degree, budget, seed, shrink):
            try:
                spec = spec_from_base(base, X, m=m0, shrink=shrink)
            except ValueError:
                continue
            spec, gb = escalate_m(spec, X, N)
            tried += 1
            if gb.valid and (best is None or gb.bound < best[1].bound):
                best = (spec, gb)
    if best is not None and best[1].bound <= ball.value:
        spec, gb = best
        validity = {"kind": "glued", "specs_tried": tried, "budget": budget, "seed": seed, "grid": N, **gb.as_dict()}
        return EnvelopeResult(gb.bound, "glued", spec, validity)
    validity = dict(ball.validity)
    validity.update({"fallback": "ball", "specs_tried": tried})
    return EnvelopeResult(ball.value, "glued", ball.certificate, validity)


# ---------------------------------------------------------------------------
# re-evaluation and grids


def reevaluate(result: EnvelopeResult, X: SetGeometry) -> float:
    """Recompute the value of a certificate from scratch."""
    cert = result.certificate
    if cert is None:
        return np.inf
    if isinstance(cert, GluingSpec):
        return gluing_upper_bound(cert, X, result.validity.get("grid", 2**14)).bound
    if result.validity.get("kind") == "constant":
        return 0.0
    return I_of(cert).value


def best_envelope(X: SetGeometry, z, families: Sequence[str] = ("ball",), budget: int = 8, seed: int = 0) -> EnvelopeResult:
    runners = {
        "ball": lambda: envelope_ball(X, z),
        "rational": lambda: envelope_rational(X, z, budget=budget, seed=seed),
        "glued": lambda: envelope_glued(X, z, budget=budget, seed=seed),
    }
    best = None
    for fam in families:
        if fam not in runners:
            raise ValueError(f"unknown family {fam!r}")
        r = runners[fam]()
        if best is None or r.value < best.value:
            best = r
    return best


def _grid_point(args):
    X, z, families, budget, seed = args
    return best_envelope(X, z, families, budget, seed)


@dataclass
class GridRow:
    z: np.ndarray
    value: float
    family: str
    certificate: object = None
    validity: dict = field(default_factory=dict)


def v_grid(X: SetGeometry, points, families: Sequence[str] = ("ball",), budget: int = 8, seed: int = 0):
    """Per-point minimum over the enabled families, certificate kept for the arg-min."""
    pts = [as_point(p, X.dimension) for p in points]
    results = pmap(_grid_point, [(X, p, tuple(families), budget, seed) for p in pts])
    return [GridRow(p, r.value, r.family, r.certificate, r.validity) for p, r in zip(pts, results)]


def monotonicity_violations(small: Sequence[GridRow], large: Sequence[GridRow], tol: float = 1e-9) -> list:
    """Grid points where the larger set has the larger value."""
    return [i for i, (a, b) in enumerate(zip(small, large)) if b.value > a.value + tol]
