"""One-variable boundary machinery on the unit circle.

Everything here works with the normalized arc length on the circle, discretized
by uniform grids of ``2**p`` points.  Holomorphic building blocks (Blaschke
products, atomic singular inner functions, outer functions) are evaluated on the
closed disc; boundary values on the circle are taken from their closed forms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np
from numpy.polynomial import polynomial as P

TWO_PI = 2.0 * np.pi
ANGLE_TOL = 1e-12
ZERO_TOL = 1e-12


def _is_pow2(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def grid_angles(size: int) -> np.ndarray:
    return TWO_PI * np.arange(size) / size


def _wrap(theta):
    return np.mod(theta, TWO_PI)


def circular_distance(a, b):
    d = np.abs(_wrap(np.asarray(a) - np.asarray(b)))
    return np.minimum(d, TWO_PI - d)


# ---------------------------------------------------------------------------
# grids


@dataclass(frozen=True, eq=False)
class BoundaryGrid:
    """Samples of a function at the points ``exp(2*pi*i*k/size)``."""

    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples)
        if s.ndim != 1:
            raise ValueError("grid samples must be one-dimensional")
        if s.size < 8 or not _is_pow2(s.size):
            raise ValueError(f"grid size must be a power of two >= 8, got {s.size}")
        if not np.all(np.isfinite(s)):
            raise ValueError("grid samples must be finite")
        s = s.copy()
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @classmethod
    def from_function(cls, fn, size: int) -> "BoundaryGrid":
        return cls(np.asarray(fn(grid_angles(size))))

    @property
    def size(self) -> int:
        return self.samples.size

    @property
    def angles(self) -> np.ndarray:
        return grid_angles(self.size)

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.samples)

    def mean(self):
        return self.samples.mean()

    def __eq__(self, other):
        return isinstance(other, BoundaryGrid) and np.array_equal(self.samples, other.samples)

    def __hash__(self):
        return hash(self.samples.tobytes())


def _require_real(u: BoundaryGrid) -> np.ndarray:
    if not u.is_real:
        raise TypeError("expected a real-valued grid")
    return u.samples


def analytic_coefficients(u: BoundaryGrid) -> np.ndarray:
    """Taylor coefficients of the holomorphic F with Re F* = u and Im F(0) = 0.

    The Nyquist mode of the trigonometric interpolant is kept with half weight so
    that Re F reproduces the interpolant exactly on the circle.
    """
    s = _require_real(u)
    n = s.size
    c = np.fft.fft(s) / n
    coef = np.empty(n // 2 + 1, dtype=complex)
    coef[0] = c[0].real
    coef[1 : n // 2] = 2.0 * c[1 : n // 2]
    coef[n // 2] = c[n // 2].real
    return coef


def poisson_value(u: BoundaryGrid, z):
    """Poisson integral of the trigonometric interpolant of ``u`` at ``z``."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) > 1.0 - 1e-12):
        raise ValueError("poisson_value needs |z| < 1")
    return P.polyval(z, analytic_coefficients(u)).real


def conjugate_grid(u: BoundaryGrid) -> BoundaryGrid:
    """Boundary values of the harmonic conjugate vanishing at the origin."""
    s = _require_real(u)
    n = s.size
    k = np.fft.fftfreq(n, d=1.0 / n)
    mult = -1j * np.sign(k)
    mult[n // 2] = 0.0
    return BoundaryGrid(np.fft.ifft(np.fft.fft(s) * mult).real)


# ---------------------------------------------------------------------------
# atomic measures


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite positive atomic measure on the circle, atoms as (angle, mass)."""

    atoms: tuple = ()

    def __post_init__(self):
        atoms = tuple((float(a), float(m)) for a, m in self.atoms)
        for a, m in atoms:
            if not (0.0 <= a < TWO_PI):
                raise ValueError(f"atom angle {a} outside [0, 2pi)")
            if not (m > 0.0 and np.isfinite(m)):
                raise ValueError(f"atom mass must be positive, got {m}")
        for (a0, _), (a1, _) in zip(atoms, atoms[1:]):
            if not a1 > a0 + ANGLE_TOL:
                raise ValueError("atom angles must be strictly increasing")
        if len(atoms) > 1 and circular_distance(atoms[0][0], atoms[-1][0]) <= ANGLE_TOL:
            raise ValueError("first and last atom coincide on the circle")
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[float]]) -> "AtomicMeasure":
        """Build from unsorted (angle, mass) pairs; coincident atoms are summed."""
        pairs = [(float(_wrap(a)), float(m)) for a, m in pairs if m > 0]
        if not pairs:
            return cls()
        angles, masses = _align([cls(((a, m),)) for a, m in pairs])
        return cls(tuple(zip(angles, masses.sum(axis=0))))

    @classmethod
    def point(cls, angle: float, mass: float = 1.0) -> "AtomicMeasure":
        return cls.from_pairs([(angle, mass)])

    @property
    def angles(self) -> np.ndarray:
        return np.array([a for a, _ in self.atoms])

    @property
    def masses(self) -> np.ndarray:
        return np.array([m for _, m in self.atoms])

    @property
    def total(self) -> float:
        return float(sum(m for _, m in self.atoms))

    @property
    def is_empty(self) -> bool:
        return not self.atoms

    def __add__(self, other: "AtomicMeasure") -> "AtomicMeasure":
        angles, masses = _align([self, other])
        return _from_aligned(angles, masses.sum(axis=0))

    def __sub__(self, other: "AtomicMeasure") -> "AtomicMeasure":
        angles, masses = _align([self, other])
        diff = masses[0] - masses[1]
        if np.any(diff < -1e-12):
            raise ValueError("measure difference would be negative")
        return _from_aligned(angles, diff)

    def __le__(self, other: "AtomicMeasure") -> bool:
        _, masses = _align([self, other])
        return bool(np.all(masses[0] <= masses[1] + 1e-12))

    def same_as(self, other: "AtomicMeasure", tol: float = 1e-12) -> bool:
        _, masses = _align([self, other])
        return bool(np.all(np.abs(masses[0] - masses[1]) <= tol))

    def shares_atoms_with(self, other: "AtomicMeasure") -> bool:
        _, masses = _align([self, other])
        return bool(np.any((masses[0] > 0) & (masses[1] > 0)))


def _align(measures: Sequence[AtomicMeasure]):
    """Common sorted atom angles of several measures and their mass matrix."""
    pts = [(a, i, m) for i, mu in enumerate(measures) for a, m in mu.atoms]
    if not pts:
        return np.zeros(0), np.zeros((len(measures), 0))
    pts.sort()
    clusters = [[pts[0]]]
    for p in pts[1:]:
        if p[0] - clusters[-1][-1][0] <= ANGLE_TOL:
            clusters[-1].append(p)
        else:
            clusters.append([p])
    if len(clusters) > 1 and circular_distance(clusters[0][0][0], clusters[-1][-1][0]) <= ANGLE_TOL:
        clusters[0] = clusters.pop() + clusters[0]
    angles = np.array([c[-1][0] if len(c) == 1 else min(p[0] for p in c) for c in clusters])
    masses = np.zeros((len(measures), len(clusters)))
    for j, c in enumerate(clusters):
        for _, i, m in c:
            masses[i, j] += m
    order = np.argsort(angles)
    return angles[order], masses[:, order]


def _from_aligned(angles, masses) -> AtomicMeasure:
    keep = masses > 1e-15
    return AtomicMeasure(tuple(zip(angles[keep], masses[keep])))


def measure_join(ms: Sequence[AtomicMeasure]) -> AtomicMeasure:
    """Smallest measure dominating every input (per-atom maximum)."""
    ms = list(ms)
    if not ms:
        return AtomicMeasure()
    angles, masses = _align(ms)
    return _from_aligned(angles, masses.max(axis=0))


def measure_meet(ms: Sequence[AtomicMeasure]) -> AtomicMeasure:
    """Largest measure dominated by every input (per-atom minimum)."""
    ms = list(ms)
    if not ms:
        return AtomicMeasure()
    angles, masses = _align(ms)
    return _from_aligned(angles, masses.min(axis=0))


def singular_eval(mu: AtomicMeasure, z):
    """exp(sum_j m_j (z + zeta_j)/(z - zeta_j)) on the closed disc minus the atoms."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) > 1.0 + 1e-14):
        raise ValueError("singular_eval needs |z| <= 1")
    expo = np.zeros(z.shape, dtype=complex)
    for a, m in mu.atoms:
        zeta = np.exp(1j * a)
        d = z - zeta
        if np.any(np.abs(d) < 1e-15):
            raise ValueError("singular_eval evaluated at an atom")
        expo = expo + m * (z + zeta) / d
    return np.exp(expo)


# ---------------------------------------------------------------------------
# Blaschke products


@dataclass(frozen=True)
class BlaschkeData:
    """Finite Blaschke product, zeros as (point, multiplicity).

    Factor convention: ``(|a|/a)(a - z)/(1 - conj(a) z)``, and ``z`` for ``a = 0``,
    so the value at the origin is ``prod |a|**m``.
    """

    zeros: tuple = ()

    def __post_init__(self):
        zs = tuple((complex(a), int(m)) for a, m in self.zeros)
        for a, m in zs:
            if not abs(a) < 1.0:
                raise ValueError(f"Blaschke zero {a} not inside the unit disc")
            if m < 1:
                raise ValueError("multiplicities must be positive integers")
        object.__setattr__(self, "zeros", zs)

    @classmethod
    def from_points(cls, points: Iterable[complex]) -> "BlaschkeData":
        merged: list[list] = []
        for p in points:
            for entry in merged:
                if abs(entry[0] - p) <= ZERO_TOL:
                    entry[1] += 1
                    break
            else:
                merged.append([complex(p), 1])
        return cls(tuple((a, m) for a, m in merged))

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.zeros)

    @property
    def is_trivial(self) -> bool:
        return not self.zeros

    def value_at_zero(self) -> float:
        return float(np.prod([abs(a) ** m for a, m in self.zeros])) if self.zeros else 1.0

    def log_abs_at_zero(self) -> float:
        if any(a == 0 for a, _ in self.zeros):
            return -np.inf
        return float(sum(m * np.log(abs(a)) for a, m in self.zeros))

    def __call__(self, z):
        return blaschke_eval(self, z)

    def _counts(self):
        return {a: m for a, m in self.zeros}

    def multiplicity(self, a: complex) -> int:
        for b, m in self.zeros:
            if abs(a - b) <= ZERO_TOL:
                return m
        return 0

    def __mul__(self, other: "BlaschkeData") -> "BlaschkeData":
        pts = [a for a, m in self.zeros for _ in range(m)] + [a for a, m in other.zeros for _ in range(m)]
        return BlaschkeData.from_points(pts)

    def divide(self, other: "BlaschkeData") -> "BlaschkeData":
        out = []
        for a, m in self.zeros:
            r = m - other.multiplicity(a)
            if r < 0:
                raise ValueError("Blaschke division is not exact")
            if r:
                out.append((a, r))
        for b, m in other.zeros:
            if self.multiplicity(b) == 0:
                raise ValueError("Blaschke division is not exact")
        return BlaschkeData(tuple(out))


def blaschke_gcd(bs: Sequence[BlaschkeData]) -> BlaschkeData:
    """Greatest common Blaschke divisor: per-zero minimum multiplicity."""
    bs = list(bs)
    if not bs:
        return BlaschkeData()
    out = []
    for a, m in bs[0].zeros:
        k = min([m] + [b.multiplicity(a) for b in bs[1:]])
        if k:
            out.append((a, k))
    return BlaschkeData(tuple(out))


def blaschke_eval(B: BlaschkeData, z):
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) > 1.0 + 1e-14):
        raise ValueError("blaschke_eval needs |z| <= 1")
    out = np.ones(z.shape, dtype=complex)
    for a, m in B.zeros:
        if a == 0:
            f = z
        else:
            f = np.exp(-1j * np.angle(a)) * (a - z) / (1.0 - np.conj(a) * z)
        out = out * f**m
    return out


# ---------------------------------------------------------------------------
# outer functions


def _roots(coefs) -> np.ndarray:
    c = np.trim_zeros(np.asarray(coefs, dtype=complex), "b")
    if c.size <= 1:
        return np.zeros(0, dtype=complex)
    return P.polyroots(c)


@dataclass(frozen=True)
class RationalOuter:
    """Quotient of polynomials (ascending coefficients), both zero-free on the open disc."""

    num: tuple = (1.0,)
    den: tuple = (1.0,)

    def __post_init__(self):
        num = tuple(complex(c) for c in self.num)
        den = tuple(complex(c) for c in self.den)
        if not den or not any(den):
            raise ValueError("denominator must not vanish identically")
        if not num:
            raise ValueError("numerator must have at least one coefficient")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        for name, c in (("numerator", num), ("denominator", den)):
            if name == "numerator" and not any(c):
                continue
            r = _roots(c)
            if r.size and np.min(np.abs(r)) < 1.0 - 1e-10:
                raise ValueError(f"{name} has a zero inside the unit disc")

    @property
    def is_zero(self) -> bool:
        return not any(self.num)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return P.polyval(z, self.num) / P.polyval(z, self.den)

    def boundary_values(self, theta):
        return self(np.exp(1j * np.asarray(theta)))

    def log_abs_at_zero(self) -> float:
        if self.is_zero:
            return -np.inf
        return float(np.log(abs(self.num[0])) - np.log(abs(self.den[0])))

    @property
    def is_bounded(self) -> bool:
        r = _roots(self.den)
        return bool(r.size == 0 or np.min(np.abs(r)) > 1.0 + 1e-10)

    def split(self):
        return RationalOuter(self.num, (1.0,)), RationalOuter(self.den, (1.0,))


@dataclass(frozen=True)
class GridOuter:
    """Outer function with prescribed boundary log-modulus on a grid."""

    log_modulus: BoundaryGrid
    _coef: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_coef", analytic_coefficients(self.log_modulus))

    @property
    def is_zero(self) -> bool:
        return False

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) > 1.0 + 1e-14):
            raise ValueError("outer functions are evaluated on the closed disc")
        return np.exp(P.polyval(z, self._coef))

    def boundary_values(self, theta):
        return self(np.exp(1j * np.asarray(theta)))

    def log_abs_at_zero(self) -> float:
        return float(self.log_modulus.samples.mean())

    @property
    def is_bounded(self) -> bool:
        return True

    def split(self):
        w = self.log_modulus.samples
        return GridOuter(BoundaryGrid(np.maximum(w, 0.0))), GridOuter(BoundaryGrid(np.maximum(-w, 0.0)))

    def __eq__(self, other):
        return isinstance(other, GridOuter) and self.log_modulus == other.log_modulus

    def __hash__(self):
        return hash(self.log_modulus)


@dataclass(frozen=True)
class ProductOuter:
    factors: tuple

    @property
    def is_zero(self) -> bool:
        return any(f.is_zero for f in self.factors)

    def __call__(self, z):
        out = np.ones(np.shape(z), dtype=complex)
        for f in self.factors:
            out = out * f(z)
        return out

    def boundary_values(self, theta):
        return self(np.exp(1j * np.asarray(theta)))

    def log_abs_at_zero(self) -> float:
        return float(sum(f.log_abs_at_zero() for f in self.factors))

    @property
    def is_bounded(self) -> bool:
        return all(f.is_bounded for f in self.factors)

    def split(self):
        us, vs = zip(*(f.split() for f in self.factors))
        return multiply_outer(*us), multiply_outer(*vs)


OuterSpec = Union[RationalOuter, GridOuter, ProductOuter]
ONE = RationalOuter((1.0,), (1.0,))


def multiply_outer(*factors: OuterSpec) -> OuterSpec:
    """Product of outer functions, merged into one rational or grid factor when possible."""
    flat: list = []
    for f in factors:
        flat.extend(f.factors if isinstance(f, ProductOuter) else [f])
    rational = [f for f in flat if isinstance(f, RationalOuter)]
    grids = [f for f in flat if isinstance(f, GridOuter)]
    out: list = []
    if rational:
        num, den = np.array([1.0 + 0j]), np.array([1.0 + 0j])
        for f in rational:
            num = P.polymul(num, f.num)
            den = P.polymul(den, f.den)
        out.append(RationalOuter(tuple(num), tuple(den)))
    by_size: dict = {}
    for g in grids:
        by_size.setdefault(g.log_modulus.size, []).append(g.log_modulus.samples)
    for size, arrs in by_size.items():
        out.append(GridOuter(BoundaryGrid(np.sum(arrs, axis=0))))
    if len(out) > 1 and rational and out[0] == ONE:
        out = out[1:]
    return out[0] if len(out) == 1 else ProductOuter(tuple(out))


def scale_outer(h: OuterSpec, c: complex) -> OuterSpec:
    return multiply_outer(RationalOuter((complex(c),), (1.0,)), h)


def outer_from_log_modulus(w: BoundaryGrid) -> GridOuter:
    """Outer h with log|h*| = w and arg h(0) = 0."""
    return GridOuter(w)


# ---------------------------------------------------------------------------
# arcs and harmonic measure


@dataclass(frozen=True)
class Arc:
    """Counterclockwise arc from ``start`` to ``end`` (radians, end - start in (0, 2pi])."""

    start: float
    end: float

    def __post_init__(self):
        length = self.end - self.start
        if not (length > 1e-14 and length <= TWO_PI + 1e-14):
            raise ValueError(f"degenerate arc [{self.start}, {self.end}]")

    @classmethod
    def full(cls) -> "Arc":
        return cls(0.0, TWO_PI)

    @property
    def length(self) -> float:
        return self.end - self.start

    @property
    def fraction(self) -> float:
        return min(self.length / TWO_PI, 1.0)

    @property
    def is_full(self) -> bool:
        return self.length >= TWO_PI - 1e-14

    @property
    def midpoint(self) -> float:
        return float(_wrap(0.5 * (self.start + self.end)))

    def contains(self, theta) -> np.ndarray:
        if self.is_full:
            return np.ones(np.shape(theta), dtype=bool)
        return _wrap(np.asarray(theta) - self.start) <= self.length + 1e-14

    def endpoints(self) -> tuple:
        return () if self.is_full else (float(_wrap(self.start)), float(_wrap(self.end)))

    def indicator(self, size: int) -> BoundaryGrid:
        """Arc indicator on a grid, 1/2 at grid points hitting an endpoint."""
        th = grid_angles(size)
        u = self.contains(th).astype(float)
        for e in self.endpoints():
            u[circular_distance(th, e) <= 1e-12] = 0.5
        return BoundaryGrid(u)


def harmonic_measure_arc(A: Arc, z):
    """Harmonic measure ``omega`` of ``A`` at ``z`` and its holomorphic completion ``W``.

    ``W = a - (i/pi) Log(q/q(0))`` with ``q = (e^{i end} - z)/(e^{i start} - z)``;
    ``q`` maps the disc onto a half-plane containing ``q(0)``, so the principal
    logarithm of ``q/q(0)`` is continuous on the disc.  Also valid on the circle
    away from the endpoints.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) > 1.0 + 1e-14):
        raise ValueError("harmonic_measure_arc needs |z| <= 1")
    if A.is_full:
        one = np.ones(z.shape)
        return one, one.astype(complex)
    a = A.fraction
    e1, e2 = np.exp(1j * A.start), np.exp(1j * A.end)
    q = (e2 - z) / (e1 - z)
    W = a - (1j / np.pi) * np.log(q * np.exp(-1j * A.length))
    return W.real, W
