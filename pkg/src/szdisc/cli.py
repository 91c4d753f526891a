"""Command-line entry point.

Structured artifacts are JSON (schema ``sz/1``), grids are CSV.  Exit codes:
0 success, 1 failed checks, 2 malformed input.
"""
from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from . import acceptance
from .discs import ClosedPolyDisc, FactoredDisc, LiftedDisc, lift
from .envelope import FAMILIES, BALL_SHRINK, best_envelope, v_grid
from .functionals import I_of, J_of, nu_of, nu_of_lifted
from .glue import gluing_upper_bound
from .hull import DEFAULT_SCHEDULE, hull_test
from .oracle import closed_form, pde_green, poly_lower
from .serialize import (
    SCHEMA,
    SchemaError,
    certificate_to_json,
    disc_from_json,
    dump,
    geometry_from_json,
    jsonable,
    load,
    result_to_json,
    spec_from_json,
)


class UsageError(ValueError):
    """Malformed command-line value; reported like a schema error."""


@dataclass
class Tolerances:
    quadrature: float = 5e-6
    membership: float = 1e-9
    shrink: float = BALL_SHRINK

    def __post_init__(self):
        for name, v in asdict(self).items():
            if not v > 0:
                raise UsageError(f"tolerance {name} must be positive, got {v}")


@dataclass
class RunConfig:
    N: int = 2**12
    seed: int = 0
    budget: int = 8
    tolerances: Tolerances = field(default_factory=Tolerances)
    out: Optional[str] = None

    def __post_init__(self):
        if self.N < 2**10 or self.N & (self.N - 1):
            raise UsageError(f"grid size must be a power of two >= 1024, got {self.N}")
        if self.budget < 1:
            raise UsageError("budget must be at least 1")


def parse_point(text: str, dimension: int) -> np.ndarray:
    """``"x,y"`` for a point of C; n such pairs, comma separated, for C^n."""
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"point {text!r}: expected comma-separated numbers") from None
    if len(vals) != 2 * dimension:
        raise UsageError(f"point {text!r}: expected {2 * dimension} numbers for dimension {dimension}")
    return np.array(vals[0::2]) + 1j * np.array(vals[1::2])


def parse_grid(text: str) -> np.ndarray:
    """``"re0:re1:n,im0:im1:n"`` to a flat array of complex points, real part fastest."""
    try:
        (a0, a1, na), (b0, b1, nb) = [part.split(":") for part in text.split(",")]
        re = np.linspace(float(a0), float(a1), int(na))
        im = np.linspace(float(b0), float(b1), int(nb))
    except ValueError:
        raise UsageError(f"grid {text!r}: expected re0:re1:n,im0:im1:n") from None
    return (re[None, :] + 1j * im[:, None]).ravel()


def parse_floats(text: str, what: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"{what} {text!r}: expected comma-separated numbers") from None


def _load_geometry(path: str):
    return geometry_from_json(load(path))


def as_lifted(disc) -> LiftedDisc:
    if isinstance(disc, LiftedDisc):
        return disc
    if isinstance(disc, ClosedPolyDisc):
        return disc.to_lifted()
    return lift(disc)


def _emit(doc: dict, out: Optional[str]):
    doc = {"schema": SCHEMA, **doc}
    if out:
        dump(doc, out)
    else:
        import json

        print(json.dumps(doc, indent=2))


def _config(args) -> RunConfig:
    return RunConfig(
        N=getattr(args, "N", 2**12),
        seed=getattr(args, "seed", 0),
        budget=getattr(args, "budget", 8),
        out=getattr(args, "out", None),
    )


# ---------------------------------------------------------------------------
# subcommands


def cmd_functional(args) -> int:
    cfg = _config(args)
    disc = disc_from_json(load(args.disc))
    if args.which == "nu":
        fv = nu_of(disc) if isinstance(disc, FactoredDisc) else nu_of_lifted(as_lifted(disc))
    elif args.which == "J":
        fv = J_of(as_lifted(disc))
    else:
        fv = I_of(as_lifted(disc), args.method, N=cfg.N)
    _emit({"which": args.which, "method": fv.method, "value": fv.value, "detail": jsonable(fv.detail)}, cfg.out)
    return 0


def cmd_glue(args) -> int:
    cfg = _config(args)
    spec = spec_from_json(load(args.spec))
    X = _load_geometry(args.set)
    bound = gluing_upper_bound(spec, X, cfg.N)
    _emit(jsonable(bound.as_dict()), cfg.out)
    return 0 if bound.valid else 1


def cmd_envelope(args) -> int:
    cfg = _config(args)
    X = _load_geometry(args.set)
    z = parse_point(args.point, X.dimension)
    families = [f.strip() for f in args.families.split(",") if f.strip()]
    unknown = [f for f in families if f not in FAMILIES]
    if unknown or not families:
        raise UsageError(f"families {args.families!r}: choose from {', '.join(FAMILIES)}")
    res = best_envelope(X, z, families, cfg.budget, cfg.seed)
    doc = result_to_json(res)
    doc["point"] = jsonable(z)
    _emit({k: v for k, v in doc.items() if k != "schema"}, cfg.out)
    return 0 if res.found else 1


def cmd_envelope_grid(args) -> int:
    cfg = _config(args)
    X = _load_geometry(args.set)
    if X.dimension != 1:
        raise UsageError("envelope-grid needs a planar set")
    pts = parse_grid(args.grid)
    families = [f.strip() for f in args.families.split(",") if f.strip()]
    rows = v_grid(X, pts, families, cfg.budget, cfg.seed)
    fh = open(cfg.out, "w", newline="") if cfg.out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["re", "im", "value", "family"])
        for row in rows:
            z = complex(row.z[0])
            w.writerow([repr(z.real), repr(z.imag), repr(float(row.value)), row.family])
    finally:
        if cfg.out:
            fh.close()
    return 0


def cmd_oracle(args) -> int:
    cfg = _config(args)
    X = _load_geometry(args.set)
    z = parse_point(args.point, X.dimension)
    if args.method == "closed":
        ov = closed_form(X, z)
    elif args.method == "pde":
        ov = pde_green(X, z, n=args.grid, R=args.R)
    else:
        pts, pieces = X.compact_samples(4096)
        ov = poly_lower(pts, z[0], args.degree, budget=cfg.budget, seed=cfg.seed, pieces=pieces)
    _emit({"method": ov.method, "value": ov.value, "error_estimate": ov.error_estimate, "detail": jsonable(ov.detail)}, cfg.out)
    return 0


def cmd_hull(args) -> int:
    cfg = _config(args)
    K = _load_geometry(args.compact)
    a = parse_point(args.point, K.dimension)
    schedule = parse_floats(args.schedule, "schedule")
    if not schedule or any(not s > 0 for s in schedule):
        raise UsageError("schedule must list positive fractions")
    if not args.eps > 0:
        raise UsageError("eps must be positive")
    v = hull_test(K, a, eps=args.eps, schedule=schedule, budget=cfg.budget, seed=cfg.seed)
    levels = []
    for lv in v.certificates:
        rec = {k: x for k, x in lv.items() if k != "result"}
        rec["certificate"] = certificate_to_json(lv["result"].certificate) if "result" in lv else None
        levels.append(jsonable(rec))
    _emit({"status": v.status, "schedule": v.schedule, "levels": levels, "polynomial": jsonable(v.polynomial)}, cfg.out)
    return 0


def cmd_verify(args) -> int:
    results = []
    for k in acceptance.SUITES[args.suite]:
        r = acceptance.CRITERIA[k]()
        print(r.line(), flush=True)
        results.append(r)
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed")
    if args.out:
        dump({"schema": SCHEMA, "suite": args.suite, "results": [jsonable(asdict(r)) for r in results]}, args.out)
    return 0 if passed == len(results) else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="szdisc", description="Disc functionals and extremal-function envelopes.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, grid=True, search=False):
        if grid:
            sp.add_argument("--grid-size", dest="N", type=int, default=2**12, help="boundary grid size (power of two)")
        if search:
            sp.add_argument("--budget", type=int, default=8, help="optimizer restarts")
            sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="output path (default: stdout)")

    sp = sub.add_parser("functional", help="evaluate J, I or nu on a disc file")
    sp.add_argument("--disc", required=True)
    sp.add_argument("--which", choices=("J", "I", "nu"), default="I")
    sp.add_argument("--method", choices=("exact", "quadrature"), default="exact")
    common(sp)
    sp.set_defaults(fn=cmd_functional)

    sp = sub.add_parser("glue", help="certify the upper bound of a gluing spec")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--set", required=True)
    sp.add_argument("--grid", dest="N", type=int, default=2**14, help="boundary grid size (power of two)")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_glue)

    sp = sub.add_parser("envelope", help="envelope upper bound at a point")
    sp.add_argument("--set", required=True)
    sp.add_argument("--point", required=True)
    sp.add_argument("--families", default="ball")
    common(sp, grid=False, search=True)
    sp.set_defaults(fn=cmd_envelope)

    sp = sub.add_parser("envelope-grid", help="envelope values on a rectangular grid, as CSV")
    sp.add_argument("--set", required=True)
    sp.add_argument("--grid", required=True, help="re0:re1:n,im0:im1:n")
    sp.add_argument("--families", default="ball")
    common(sp, grid=False, search=True)
    sp.set_defaults(fn=cmd_envelope_grid)

    sp = sub.add_parser("oracle", help="independent reference values")
    sp.add_argument("--set", required=True)
    sp.add_argument("--point", required=True)
    sp.add_argument("--method", choices=("pde", "poly", "closed"), default="closed")
    sp.add_argument("--grid", type=int, default=1000, help="finite-difference cells across the box")
    sp.add_argument("--R", type=float, default=None, help="outer radius (default 4 diameters)")
    sp.add_argument("--degree", type=int, default=6, help="polynomial degree for --method poly")
    common(sp, grid=False, search=True)
    sp.set_defaults(fn=cmd_oracle)

    sp = sub.add_parser("hull", help="polynomial-hull membership evidence")
    sp.add_argument("--compact", required=True)
    sp.add_argument("--point", required=True)
    sp.add_argument("--eps", type=float, default=0.05)
    sp.add_argument("--schedule", default=",".join(str(s) for s in DEFAULT_SCHEDULE))
    common(sp, grid=False, search=True)
    sp.set_defaults(fn=cmd_hull, budget=4)

    sp = sub.add_parser("verify", help="run the acceptance suite")
    sp.add_argument("--suite", choices=tuple(acceptance.SUITES), default="full")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SchemaError as exc:
        print(f"error: malformed input at {exc.path}: {exc.message}", file=sys.stderr)
        return 2
    except (UsageError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
