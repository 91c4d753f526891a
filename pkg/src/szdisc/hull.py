"""Polynomial-hull membership: disc certificates for membership, polynomial
certificates for exclusion.

A point a lies in the hull of K iff the extremal function of every open
neighbourhood U of K vanishes at a.  For a finite schedule of neighbourhoods
U_delta we look for discs centered at a with boundary in U_delta and small
functional value, and independently for polynomials separating a from K.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .discs import SetGeometry, check_boundary_in
from .envelope import as_point, envelope_ball, envelope_rational
from .functionals import nu_of_lifted
from .oracle import poly_lower
from .parallel import pmap

DEFAULT_SCHEDULE = (0.1, 0.05, 0.02, 0.01)
# |p(a)| must exceed the sampled sup by this relative margin
SEPARATION_MARGIN = 1e-9


class ContradictoryCertificates(RuntimeError):
    """A disc certificate and a separating polynomial were found for the same point."""


@dataclass
class HullVerdict:
    status: str  # in_hull_evidence | not_in_hull | inconclusive
    certificates: list = field(default_factory=list)
    schedule: list = field(default_factory=list)
    polynomial: Optional[dict] = None


def _disc_level(K: SetGeometry, a, delta: float, eps: float, budget: int, seed: int) -> dict:
    U = K.offset(delta)
    res = envelope_ball(U, a)
    rat = envelope_rational(U, a, degree=1, budget=budget, seed=seed)
    if rat.value < res.value:
        res = rat
    record = {"delta": delta, "eps": eps, "value": res.value, "family": res.family, "result": res}
    if res.found and res.validity.get("kind") != "constant":
        record["nu"] = nu_of_lifted(res.certificate).value
        record["fraction_inside"] = check_boundary_in(res.certificate, U, 4096).fraction_inside
        record["center_error"] = float(np.max(np.abs(res.certificate.project(np.zeros(1))[0] - a)))
    elif res.found:
        record["nu"] = 0.0
        record["fraction_inside"] = 1.0
        record["center_error"] = 0.0
    record["accepted"] = bool(
        res.found and res.value < eps and record.get("fraction_inside") == 1.0 and record["center_error"] <= 1e-9
    )
    return record


def _level_task(args) -> dict:
    return _disc_level(*args)


def separating_polynomial(K: SetGeometry, a, max_degree: int = 4, budget: int = 4, seed: int = 0, samples: int = 2048):
    """Best polynomial ratio (1/d) log(|p(a)| / sup_K |p|) over planar samples of K."""
    pts, pieces = K.compact_samples(samples)
    ov = poly_lower(pts, a[0], max_degree, budget=budget, seed=seed, pieces=pieces)
    if ov.detail.get("degenerate"):
        return None
    coeffs = ov.detail["coefficients"]
    pa = abs(np.polynomial.polynomial.polyval(a[0], coeffs))
    supK = float(np.max(np.abs(np.polynomial.polynomial.polyval(pts, coeffs)))) * ov.detail["inflation"]
    return {
        "coefficients": coeffs,
        "value_at_a": pa,
        "sup_K": supK,
        "separates": bool(pa > (1.0 + SEPARATION_MARGIN) * supK),
        "log_ratio": ov.value,
    }


def hull_test(
    K: SetGeometry,
    a,
    eps: float = 0.05,
    schedule: Sequence[float] = DEFAULT_SCHEDULE,
    budget: int = 4,
    seed: int = 0,
    max_degree: int = 4,
    timeout: Optional[float] = None,
) -> HullVerdict:
    """Evidence for membership of a in the polynomial hull of K.

    ``schedule`` lists delta as fractions of the diameter of K, decreasing.
    """
    if not schedule:
        raise ValueError("schedule must be nonempty")
    a = as_point(a, K.dimension)
    start = time.monotonic()
    deltas = [float(s) * K.diameter for s in schedule]
    levels, timed_out = [], False
    if timeout is None:
        # levels are independent; results come back in schedule order
        levels = pmap(_level_task, [(K, a, d, eps, budget, seed) for d in deltas])
    else:
        for delta in deltas:
            if time.monotonic() - start > timeout:
                timed_out = True
                break
            levels.append(_disc_level(K, a, delta, eps, budget, seed))
    disc_evidence = not timed_out and all(lv["accepted"] for lv in levels)

    poly = separating_polynomial(K, a, max_degree, budget, seed) if K.dimension == 1 else None
    separated = bool(poly and poly["separates"])
    if disc_evidence and separated:
        raise ContradictoryCertificates(f"disc certificates and a separating polynomial for a = {a}")
    pairs = [(d, eps) for d in deltas]
    if separated:
        return HullVerdict("not_in_hull", levels, pairs, poly)
    if disc_evidence:
        return HullVerdict("in_hull_evidence", levels, pairs, poly)
    return HullVerdict("inconclusive", levels, pairs, poly)
