"""JSON formats for discs, geometries, gluing specs and envelope results.

Every document carries ``"schema": "sz/1"``.  Complex numbers are written as
``[re, im]`` pairs; points in C^n as lists of such pairs.  Parsing errors raise
:class:`SchemaError` with a path to the offending field.
"""
from __future__ import annotations

import json
from typing import Any

import numpy as np

from .boundary import (
    ONE,
    Arc,
    AtomicMeasure,
    BlaschkeData,
    BoundaryGrid,
    GridOuter,
    ProductOuter,
    RationalOuter,
)
from .discs import Ball, Box, ClosedPolyDisc, FactoredComponent, FactoredDisc, LiftedDisc, SetGeometry, Shell
from .glue import Attachment, GluingSpec

SCHEMA = "sz/1"


class SchemaError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


# ---------------------------------------------------------------------------
# primitives


def cpair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def clist(values) -> list:
    return [cpair(v) for v in np.ravel(np.asarray(values, dtype=complex))]


def _need(obj, key: str, path: str):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if key not in obj:
        raise SchemaError(f"{path}.{key}", "missing field")
    return obj[key]


def _real(v, path: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SchemaError(path, "expected a number")
    return float(v)


def _complex(v, path: str) -> complex:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, list) and len(v) == 2:
        return complex(_real(v[0], f"{path}[0]"), _real(v[1], f"{path}[1]"))
    raise SchemaError(path, "expected a number or an [re, im] pair")


def _complex_list(v, path: str) -> np.ndarray:
    if not isinstance(v, list):
        raise SchemaError(path, "expected a list")
    return np.array([_complex(x, f"{path}[{i}]") for i, x in enumerate(v)], dtype=complex)


def _list(v, path: str) -> list:
    if not isinstance(v, list):
        raise SchemaError(path, "expected a list")
    return v


def _wrap(path: str, fn, *args):
    try:
        return fn(*args)
    except SchemaError:
        raise
    except (ValueError, TypeError) as exc:
        raise SchemaError(path, str(exc)) from None


def check_schema(doc, path: str = "$"):
    if not isinstance(doc, dict):
        raise SchemaError(path, "expected an object")
    if doc.get("schema") != SCHEMA:
        raise SchemaError(f"{path}.schema", f"expected {SCHEMA!r}")


# ---------------------------------------------------------------------------
# discs


def _outer_to(o) -> dict:
    if isinstance(o, RationalOuter):
        return {"rational": {"num": clist(o.num), "den": clist(o.den)}}
    if isinstance(o, GridOuter):
        return {"grid": clist(o.log_modulus.samples)}
    if isinstance(o, ProductOuter):
        return {"product": [_outer_to(f) for f in o.factors]}
    raise TypeError(f"cannot serialize outer {type(o).__name__}")


def _outer_from(d, path: str):
    if not isinstance(d, dict) or len(d) != 1:
        raise SchemaError(path, "outer must have exactly one of rational, grid, product")
    (kind, body), = d.items()
    if kind == "rational":
        num = _complex_list(_need(body, "num", f"{path}.rational"), f"{path}.rational.num")
        den = _complex_list(_need(body, "den", f"{path}.rational"), f"{path}.rational.den")
        return _wrap(f"{path}.rational", RationalOuter, tuple(num), tuple(den))
    if kind == "grid":
        samples = _complex_list(body, f"{path}.grid")
        if np.any(samples.imag != 0):
            raise SchemaError(f"{path}.grid", "log-modulus samples must be real")
        return _wrap(f"{path}.grid", lambda: GridOuter(BoundaryGrid(samples.real)))
    if kind == "product":
        return ProductOuter(tuple(_outer_from(f, f"{path}.product[{i}]") for i, f in enumerate(_list(body, path))))
    raise SchemaError(path, f"unknown outer kind {kind!r}")


def _measure_to(m: AtomicMeasure) -> list:
    return [[a, w] for a, w in m.atoms]


def _measure_from(v, path: str) -> AtomicMeasure:
    pairs = []
    for i, item in enumerate(_list(v, path)):
        if not isinstance(item, list) or len(item) != 2:
            raise SchemaError(f"{path}[{i}]", "expected [angle, mass]")
        pairs.append((_real(item[0], f"{path}[{i}][0]"), _real(item[1], f"{path}[{i}][1]")))
    return _wrap(path, AtomicMeasure.from_pairs, pairs)


def component_to_json(c: FactoredComponent) -> dict:
    return {
        "blaschke": [[complex(a).real, complex(a).imag, m] for a, m in c.blaschke.zeros],
        "outer": _outer_to(c.outer),
        "sing_num": _measure_to(c.sing_num),
        "sing_den": _measure_to(c.sing_den),
    }


def component_from_json(d, path: str) -> FactoredComponent:
    zeros = []
    for i, z in enumerate(_list(d.get("blaschke", []) if isinstance(d, dict) else None, f"{path}.blaschke")):
        p = f"{path}.blaschke[{i}]"
        if not isinstance(z, list) or len(z) != 3:
            raise SchemaError(p, "expected [re, im, multiplicity]")
        mult = z[2]
        if isinstance(mult, bool) or not isinstance(mult, int):
            raise SchemaError(f"{p}[2]", "multiplicity must be an integer")
        zeros.append((complex(_real(z[0], f"{p}[0]"), _real(z[1], f"{p}[1]")), mult))
    B = _wrap(f"{path}.blaschke", BlaschkeData, tuple(zeros))
    outer = _outer_from(d["outer"], f"{path}.outer") if "outer" in d else ONE
    s_num = _measure_from(d.get("sing_num", []), f"{path}.sing_num")
    s_den = _measure_from(d.get("sing_den", []), f"{path}.sing_den")
    return _wrap(path, FactoredComponent, B, outer, s_num, s_den)


def disc_to_json(d) -> dict:
    if isinstance(d, ClosedPolyDisc):
        return {"schema": SCHEMA, "kind": "polynomial", "dimension": d.dimension, "coeffs": [clist(c) for c in d.coeffs]}
    kind = "lifted" if isinstance(d, LiftedDisc) else "factored"
    return {
        "schema": SCHEMA,
        "kind": kind,
        "dimension": d.dimension,
        "components": [component_to_json(c) for c in d.components],
    }


def disc_from_json(doc, path: str = "$"):
    check_schema(doc, path)
    kind = doc.get("kind", "factored")
    dim = _need(doc, "dimension", path)
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise SchemaError(f"{path}.dimension", "expected a positive integer")
    if kind == "polynomial":
        coeffs = _list(_need(doc, "coeffs", path), f"{path}.coeffs")
        if len(coeffs) != dim:
            raise SchemaError(f"{path}.coeffs", f"expected {dim} coordinates")
        return _wrap(path, ClosedPolyDisc, tuple(_complex_list(c, f"{path}.coeffs[{i}]") for i, c in enumerate(coeffs)))
    comps = _list(_need(doc, "components", path), f"{path}.components")
    parsed = tuple(component_from_json(c, f"{path}.components[{i}]") for i, c in enumerate(comps))
    if kind == "lifted":
        if len(parsed) != dim + 1:
            raise SchemaError(f"{path}.components", f"lifted disc needs {dim + 1} components")
        return _wrap(path, LiftedDisc, parsed)
    if kind == "factored":
        if len(parsed) != dim:
            raise SchemaError(f"{path}.components", f"expected {dim} components")
        return _wrap(path, FactoredDisc, parsed)
    raise SchemaError(f"{path}.kind", f"unknown disc kind {kind!r}")


# ---------------------------------------------------------------------------
# geometry


def geometry_to_json(X: SetGeometry) -> dict:
    prims = []
    for p in X.primitives:
        if isinstance(p, Ball):
            prims.append({"ball": {"center": clist(p.center), "radius": p.radius}})
        elif isinstance(p, Box):
            prims.append({"box": {"lo": clist(p.lo), "hi": clist(p.hi)}})
        else:
            prims.append({"shell": {"center": clist(p.center), "radius": p.radius, "width": p.width}})
    return {"schema": SCHEMA, "tolerance": X.tolerance, "primitives": prims}


def geometry_from_json(doc, path: str = "$") -> SetGeometry:
    check_schema(doc, path)
    tol = _real(doc.get("tolerance", 0.0), f"{path}.tolerance")
    prims = []
    for i, item in enumerate(_list(_need(doc, "primitives", path), f"{path}.primitives")):
        p = f"{path}.primitives[{i}]"
        if not isinstance(item, dict) or len(item) != 1:
            raise SchemaError(p, "expected exactly one of ball, box, shell")
        (kind, body), = item.items()
        if kind == "ball":
            c = _complex_list(_need(body, "center", f"{p}.ball"), f"{p}.ball.center")
            prims.append(_wrap(f"{p}.ball", Ball, c, _real(_need(body, "radius", f"{p}.ball"), f"{p}.ball.radius")))
        elif kind == "box":
            lo = _complex_list(_need(body, "lo", f"{p}.box"), f"{p}.box.lo")
            hi = _complex_list(_need(body, "hi", f"{p}.box"), f"{p}.box.hi")
            prims.append(_wrap(f"{p}.box", Box, lo, hi))
        elif kind == "shell":
            c = _complex_list(_need(body, "center", f"{p}.shell"), f"{p}.shell.center")
            r = _real(_need(body, "radius", f"{p}.shell"), f"{p}.shell.radius")
            w = _real(body.get("width", 0.0), f"{p}.shell.width")
            prims.append(_wrap(f"{p}.shell", Shell, c, r, w))
        else:
            raise SchemaError(p, f"unknown primitive {kind!r}")
    if not prims:
        raise SchemaError(f"{path}.primitives", "at least one primitive is required")
    return _wrap(path, SetGeometry, tuple(prims), tol)


# ---------------------------------------------------------------------------
# gluing specs


def _attachment_to(att: Attachment) -> dict:
    out = {"kind": att.kind, "z": clist(att.params["z"])}
    if att.kind == "ball":
        out.update({"c": clist(att.params["c"]), "r": att.params["r"]})
    return out


def _attachment_from(d, path: str) -> Attachment:
    kind = _need(d, "kind", path)
    z = _complex_list(_need(d, "z", path), f"{path}.z")
    if kind == "constant":
        return Attachment.constant(z)
    if kind == "ball":
        c = _complex_list(_need(d, "c", path), f"{path}.c")
        r = _real(_need(d, "r", path), f"{path}.r")
        return _wrap(path, Attachment.ball, z, c, r)
    raise SchemaError(f"{path}.kind", f"unknown attachment kind {kind!r}")


def spec_to_json(spec: GluingSpec) -> dict:
    return {
        "schema": SCHEMA,
        "base": {"coeffs": [clist(c) for c in spec.base.coeffs]},
        "arcs": [[a.start, a.end] for a in spec.arcs],
        "anchors": list(spec.anchors),
        "attached": [_attachment_to(a) for a in spec.attached],
        "m": spec.m,
    }


def spec_from_json(doc, path: str = "$") -> GluingSpec:
    check_schema(doc, path)
    base = _need(doc, "base", path)
    coeffs = _list(_need(base, "coeffs", f"{path}.base"), f"{path}.base.coeffs")
    base_disc = _wrap(
        f"{path}.base", ClosedPolyDisc, tuple(_complex_list(c, f"{path}.base.coeffs[{i}]") for i, c in enumerate(coeffs))
    )
    arcs = []
    for i, a in enumerate(_list(_need(doc, "arcs", path), f"{path}.arcs")):
        if not isinstance(a, list) or len(a) != 2:
            raise SchemaError(f"{path}.arcs[{i}]", "expected [start, end]")
        arcs.append(_wrap(f"{path}.arcs[{i}]", Arc, _real(a[0], f"{path}.arcs[{i}][0]"), _real(a[1], f"{path}.arcs[{i}][1]")))
    anchors = [_real(a, f"{path}.anchors[{i}]") for i, a in enumerate(_list(_need(doc, "anchors", path), f"{path}.anchors"))]
    attached = [_attachment_from(a, f"{path}.attached[{i}]") for i, a in enumerate(_list(_need(doc, "attached", path), f"{path}.attached"))]
    m = _real(_need(doc, "m", path), f"{path}.m")
    return _wrap(path, GluingSpec, base_disc, tuple(arcs), tuple(anchors), tuple(attached), m)


# ---------------------------------------------------------------------------
# generic plumbing


def jsonable(v: Any):
    """Plain JSON values for result records (numpy arrays, complex numbers, discs)."""
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items() if k != "result"}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return clist(v) if np.iscomplexobj(v) else v.tolist()
    if isinstance(v, (complex, np.complexfloating)):
        return cpair(v)
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        return v.item()
    if isinstance(v, GluingSpec):
        return spec_to_json(v)
    if isinstance(v, (FactoredDisc, LiftedDisc, ClosedPolyDisc)):
        return disc_to_json(v)
    return v


def certificate_to_json(cert) -> dict | None:
    if cert is None:
        return None
    if isinstance(cert, GluingSpec):
        return {"type": "spec", "data": spec_to_json(cert)}
    return {"type": "disc", "data": disc_to_json(cert)}


def certificate_from_json(doc, path: str = "$"):
    if doc is None:
        return None
    t = _need(doc, "type", path)
    data = _need(doc, "data", path)
    if t == "spec":
        return spec_from_json(data, f"{path}.data")
    if t == "disc":
        return disc_from_json(data, f"{path}.data")
    raise SchemaError(f"{path}.type", f"unknown certificate type {t!r}")


def result_to_json(res) -> dict:
    return {
        "schema": SCHEMA,
        "value": res.value,
        "family": res.family,
        "validity": jsonable(res.validity),
        "certificate": certificate_to_json(res.certificate),
    }


def load(path: str):
    """Read a JSON file; syntax errors become SchemaError with the line number."""
    with open(path) as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None


def dump(doc, path: str):
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
