"""Independent reference values: closed forms, a planar Green-function solver and
polynomial lower bounds."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pyamg
import scipy.sparse as sp
from numpy.polynomial import polynomial as P
from scipy.interpolate import RegularGridInterpolator
from scipy.optimize import minimize

from .discs import Ball, SetGeometry, polynomial_sup_inflation
from .parallel import child_seeds, pmap


@dataclass
class OracleValue:
    value: float
    method: str
    error_estimate: float = 0.0
    detail: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# closed form


def closed_form(X: SetGeometry, z) -> OracleValue:
    """log^+(|z - c| / r) for a single ball."""
    if len(X.primitives) != 1 or not isinstance(X.primitives[0], Ball):
        raise ValueError("closed form needs X to be a single ball")
    b = X.primitives[0]
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    return OracleValue(max(0.0, float(np.log(np.linalg.norm(z - b.center) / b.radius))), "closed_form", 0.0)


# ---------------------------------------------------------------------------
# Green function with pole at infinity by finite differences


@dataclass
class GreenSolve:
    value: object  # float, or array for several query points
    residual: float
    converged: bool
    flux_shift: float
    grid: int
    R: float


def _grid(X: SetGeometry, n: int, R: float):
    center = complex(X.center[0])
    h = 2.0 * R / (n - 1)
    x = center.real - R + h * np.arange(n)
    y = center.imag - R + h * np.arange(n)
    W = x[:, None] + 1j * y[None, :]
    return center, h, x, y, W


def red_black_sor(A_mask, fixed_vals, omega: Optional[float] = None, tol: float = 1e-8, max_sweeps: int = 200000):
    """Five-point Laplace relaxation with red-black ordering.

    ``A_mask`` marks unknown cells, ``fixed_vals`` holds the Dirichlet data.
    Returns (u, residual, converged) with the residual in the max norm.
    """
    n = A_mask.shape[0]
    u = np.where(A_mask, 0.0, fixed_vals)
    if omega is None:
        omega = 2.0 / (1.0 + np.sin(np.pi / n))
    ii, jj = np.indices(A_mask.shape)
    colors = [A_mask & ((ii + jj) % 2 == c) for c in (0, 1)]
    inner = np.zeros_like(A_mask)
    inner[1:-1, 1:-1] = True
    colors = [c & inner for c in colors]
    res = np.inf
    for sweep in range(max_sweeps):
        for c in colors:
            nb = np.zeros_like(u)
            nb[1:-1, 1:-1] = u[2:, 1:-1] + u[:-2, 1:-1] + u[1:-1, 2:] + u[1:-1, :-2]
            u[c] += omega * (0.25 * nb[c] - u[c])
        if sweep % 50 == 0 or sweep == max_sweeps - 1:
            nb = np.zeros_like(u)
            nb[1:-1, 1:-1] = u[2:, 1:-1] + u[:-2, 1:-1] + u[1:-1, 2:] + u[1:-1, :-2]
            res = float(np.max(np.abs(4 * u - nb)[A_mask & inner], initial=0.0))
            if res < tol:
                return u, res, True
    return u, res, False


def _assemble(unknown):
    idx = -np.ones(unknown.shape, dtype=np.int64)
    idx[unknown] = np.arange(int(unknown.sum()))
    ii, jj = np.nonzero(unknown)
    I = idx[ii, jj]
    rows, cols, vals = [I], [I], [np.full(I.size, 4.0)]
    boundary = []
    for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        ni, nj = ii + di, jj + dj
        nb = idx[ni, nj]
        inside = nb >= 0
        rows.append(I[inside]), cols.append(nb[inside]), vals.append(-np.ones(int(inside.sum())))
        boundary.append((I[~inside], ni[~inside], nj[~inside]))
    A = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(I.size, I.size))
    return A, boundary


def _rhs(boundary, size, G):
    b = np.zeros(size)
    for I, ni, nj in boundary:
        np.add.at(b, I, G[ni, nj])
    return b


def _flux(U, x, y, center, R):
    """Outward discrete flux through a square contour of half-side R/2."""
    i0, i1 = np.searchsorted(x, center.real - R / 2), np.searchsorted(x, center.real + R / 2)
    j0, j1 = np.searchsorted(y, center.imag - R / 2), np.searchsorted(y, center.imag + R / 2)
    f = np.sum(U[i1 + 1, j0 : j1 + 1] - U[i1, j0 : j1 + 1]) + np.sum(U[i0 - 1, j0 : j1 + 1] - U[i0, j0 : j1 + 1])
    f += np.sum(U[i0 : i1 + 1, j1 + 1] - U[i0 : i1 + 1, j1]) + np.sum(U[i0 : i1 + 1, j0 - 1] - U[i0 : i1 + 1, j0])
    return float(f)


def green_solve(X: SetGeometry, z, n: int, R: float, solver: str = "amg", tol: float = 1e-8) -> GreenSolve:
    """One finite-difference solve on [-R, R]^2 around the center of X.

    Cells in closed X are 0 and cells outside the disc of radius R about the
    center are fixed.  Two harmonic functions are computed: ``u1`` with outer
    data 1 and ``u2`` with outer data log|w - center|.  The Green function
    ``u2 - gamma u1`` has flux exactly 2pi through a contour around X, which
    removes the unknown Robin constant from the outer condition.  ``z`` may be
    a scalar or an array of query points.
    """
    center, h, x, y, W = _grid(X, n, R)
    closed = X.signed_distance(W[..., None]) >= 0
    outer = np.abs(W - center) >= R
    fixed = closed | outer
    fixed[0, :] = fixed[-1, :] = fixed[:, 0] = fixed[:, -1] = True
    unknown = ~fixed
    with np.errstate(divide="ignore"):
        G2 = np.where(outer & ~closed, np.log(np.abs(W - center)), 0.0)
    G1 = np.where(outer & ~closed, 1.0, 0.0)
    if solver == "amg":
        A, boundary = _assemble(unknown)
        ml = pyamg.ruge_stuben_solver(A)
        us, res = [], 0.0
        for G in (G1, G2):
            b = _rhs(boundary, A.shape[0], G)
            u = ml.solve(b, tol=1e-12, maxiter=500)
            res = max(res, float(np.max(np.abs(A @ u - b), initial=0.0)))
            U = G.copy()
            U[unknown] = u
            us.append(U)
    elif solver == "sor":
        us, res = [], 0.0
        for G in (G1, G2):
            U, r, _ = red_black_sor(unknown, G, tol=tol)
            res = max(res, r)
            us.append(U)
    else:
        raise ValueError(f"unknown solver {solver!r}")
    U1, U2 = us
    gamma = (_flux(U2, x, y, center, R) - 2 * np.pi) / _flux(U1, x, y, center, R)
    V = U2 - gamma * U1
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    vals = RegularGridInterpolator((x, y), V)(np.stack([zs.real, zs.imag], axis=-1))
    value = float(vals[0]) if np.ndim(z) == 0 else vals
    return GreenSolve(value, res, res < tol, gamma, n, R)


def pde_green(
    X: SetGeometry, z, n: int = 1000, R: Optional[float] = None, solver: str = "amg", tol: float = 1e-8
) -> OracleValue:
    """Green function of the complement of a planar X with pole at infinity.

    ``error_estimate = 2 |v(n, R) - v(n/2, R)| + |v(n/2, R) - v(n, 2R)|``.  The
    boundary staircase makes the scheme first order but irregularly so (observed
    error ratios per doubling of 0.45 to 0.6); with error ~ C n^-p the refinement
    change is err (2^p - 1), so the factor 2 covers rates down to p = 0.58.  The
    second term compares two outer radii at equal spacing.
    """
    if X.dimension != 1:
        raise ValueError("pde oracle is planar")
    z = complex(np.atleast_1d(np.asarray(z, dtype=complex))[0])
    if R is None:
        R = 4.0 * X.diameter
    if R < 4.0 * X.diameter:
        raise ValueError("outer radius must be at least 4 times the diameter")
    if X.contains(np.array([[z]]))[0]:
        return OracleValue(0.0, "pde", 0.0, {"inside": True})
    fine = green_solve(X, z, n, R, solver, tol)
    coarse = green_solve(X, z, n // 2, R, solver, tol)
    wide = green_solve(X, z, n, 2 * R, solver, tol)
    err = 2.0 * abs(fine.value - coarse.value) + abs(coarse.value - wide.value)
    converged = fine.converged and coarse.converged and wide.converged
    detail = {
        "grid": n,
        "R": R,
        "values": {"fine": fine.value, "coarse": coarse.value, "wide": wide.value},
        "residual": max(fine.residual, coarse.residual, wide.residual),
        "converged": converged,
        "solver": solver,
    }
    return OracleValue(max(fine.value, 0.0), "pde", err, detail)


# ---------------------------------------------------------------------------
# polynomial lower bounds


def leja_points(K: np.ndarray, count: int, start: Optional[complex] = None) -> np.ndarray:
    """Greedy Leja sequence drawn from the samples."""
    K = np.asarray(K, dtype=complex).ravel()
    first = K[np.argmax(np.abs(K - (start if start is not None else np.mean(K))))]
    pts = [first]
    logprod = np.log(np.abs(K - first) + 1e-300)
    for _ in range(count - 1):
        k = int(np.argmax(logprod))
        pts.append(K[k])
        logprod += np.log(np.abs(K - K[k]) + 1e-300)
    return np.array(pts)


def poly_log_ratio(roots, K, z, inflation: float = 1.0) -> float:
    """(1/d) log(|p(z)| / (inflation * max_K |p|)) for the monic p with the given roots."""
    roots = np.asarray(roots, dtype=complex)
    d = roots.size
    with np.errstate(divide="ignore"):
        logK = np.sum(np.log(np.abs(K[:, None] - roots[None, :])), axis=1)
        top = np.max(logK)
        if top == -np.inf:
            return np.inf
        return float((np.sum(np.log(np.abs(z - roots))) - top - np.log(inflation)) / d)


def _poly_restart(args):
    K, z, roots0, seed, maxfev = args
    rng = np.random.default_rng(seed)
    d = roots0.size
    spread = np.std(K) + 1e-12
    x0 = np.concatenate([roots0.real, roots0.imag]) + rng.normal(scale=0.05 * spread, size=2 * d)

    def f(x):
        v = poly_log_ratio(x[:d] + 1j * x[d:], K, z)
        return -v if np.isfinite(v) else (1e6 if v < 0 else -1e6)

    res = minimize(f, x0, method="Nelder-Mead", options={"maxfev": maxfev, "xatol": 1e-10, "fatol": 1e-12})
    return res.x[:d] + 1j * res.x[d:]


def poly_lower(
    K,
    z,
    degree: int,
    budget: int = 8,
    seed: int = 0,
    pieces=None,
    maxfev: int = 2000,
) -> OracleValue:
    """max over monic polynomials of degree <= d of (1/d) log(|p(z)| / sup_K |p|).

    ``K`` is a finite sample.  With ``pieces`` (from ``SetGeometry.compact_samples``)
    the sampled maximum is inflated by a Bernstein/Markov factor so the value is a
    lower bound over the continuous set.  A polynomial vanishing on every sample
    gives the separation flag (+inf).
    """
    if degree < 1:
        raise ValueError("degree must be at least 1")
    K = np.asarray(K, dtype=complex).ravel()
    if K.size == 0:
        raise ValueError("K is empty")
    z = complex(np.atleast_1d(np.asarray(z, dtype=complex))[0])
    best = (-np.inf, None, 1.0)
    seeds = child_seeds(seed, budget * degree)
    for d in range(1, degree + 1):
        infl = polynomial_sup_inflation(pieces, d) if pieces is not None else 1.0
        if not np.isfinite(infl):
            continue
        starts = [leja_points(K, d), leja_points(K, d, start=z)]
        if best[1] is not None and d % best[1].size == 0:
            # powers of the best lower-degree polynomial have the same ratio
            starts.append(np.tile(best[1], d // best[1].size))
        jobs = [(K, z, starts[i % len(starts)], seeds[(d - 1) * budget + i], maxfev) for i in range(budget)]
        candidates = starts + pmap(_poly_restart, jobs)
        for roots in candidates:
            v = poly_log_ratio(roots, K, z, infl)
            if v > best[0]:
                best = (v, roots, infl)
    value, roots, infl = best
    if roots is None:
        return OracleValue(-np.inf, "poly_lower", 0.0, {"degenerate": True})
    coeffs = P.polyfromroots(roots)
    detail = {"roots": roots, "coefficients": coeffs, "degree": roots.size, "inflation": infl}
    if value == np.inf:
        detail["separation"] = True
    return OracleValue(value, "poly_lower", 0.0, detail)
