"""Reading and writing structure specs and form files (JSON, ``spec_version`` 1)."""

from __future__ import annotations

import json
import re
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import jsonschema

from .errors import InputError, ParseError
from .fmanifold import (
    ConnectionData,
    ProductStructure,
    StructureSpec,
    diagonal_product,
    pullback_metric,
)
from .forms import FunctionalDensity, OneForm
from .jet import JetExpression
from .parser import parse_expr, parse_ratfun
from .poisson import MetricData
from .poly import PolyRing
from .printer import format_jet
from .ratfun import RatFun, format_ratfun

SPEC_VERSION = 1


@lru_cache(maxsize=1)
def schema() -> dict:
    text = resources.files("loopforms").joinpath("data/spec.schema.json").read_text()
    return json.loads(text)


def golden_epsilon3() -> dict:
    """Reference tables for the n = 3, eps = 1 epsilon-system."""
    text = resources.files("loopforms").joinpath("data/epsilon3_golden.json").read_text()
    return json.loads(text)


def validate(doc: dict) -> None:
    try:
        jsonschema.validate(doc, schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"schema violation at {where}: {exc.message}") from None


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}") from None


def _src(x) -> str:
    return str(x)


def _at(parse, x, ring, where: str):
    """Parse one embedded expression, naming its location in the document on failure."""
    try:
        return parse(_src(x), ring)
    except ParseError as exc:
        raise InputError(f"{where}: {exc}") from None


def _matrix(rows, ring, n, name="metric") -> tuple:
    if len(rows) != n or any(len(r) != n for r in rows):
        raise InputError(f"expected a {n} x {n} matrix")
    return tuple(tuple(_at(parse_ratfun, x, ring, f"{name}/{i}/{j}") for j, x in enumerate(r))
                 for i, r in enumerate(rows))


def _tensor(entries, ring, n, name) -> tuple:
    z = RatFun.const(ring, 0)
    t = [[[z] * n for _ in range(n)] for _ in range(n)]
    seen = {}
    for pos, (i, j, k, v) in enumerate(entries):
        if not (1 <= i <= n and 1 <= j <= n and 1 <= k <= n):
            raise InputError(f"{name}: index out of range in {[i, j, k]}")
        val = _at(parse_ratfun, v, ring, f"{name}/{pos}")
        key = (i - 1, min(j, k) - 1, max(j, k) - 1)
        if key in seen and seen[key] != val:
            raise InputError(f"{name}: conflicting entries for {[i, j, k]}")
        seen[key] = val
        t[i - 1][j - 1][k - 1] = val
        t[i - 1][k - 1][j - 1] = val
    return tuple(tuple(tuple(r) for r in m) for m in t)


def spec_from_dict(doc: dict) -> StructureSpec:
    validate(doc)
    if "spec_version" not in doc:
        raise InputError("not a structure spec (missing spec_version)")
    n = doc["n"]
    coords = tuple(doc["coords"])
    if len(coords) != n:
        raise InputError(f"n = {n} but {len(coords)} coordinate names given")
    ring = PolyRing(coords)
    z = RatFun.const(ring, 0)
    if "connection" in doc:
        conn = ConnectionData(_tensor(doc["connection"], ring, n, "connection"))
    else:
        conn = ConnectionData(tuple(tuple((z,) * n for _ in range(n)) for _ in range(n)))
    if "product" in doc:
        prod = ProductStructure(_tensor(doc["product"], ring, n, "product"))
    else:
        prod = ProductStructure(diagonal_product(ring))
    tmap = eta = None
    if "map" in doc:
        if "eta" not in doc:
            raise InputError("a coordinate map needs the constant target metric 'eta'")
        if len(doc["map"]) != n:
            raise InputError("coordinate map has the wrong length")
        tmap = tuple(_at(parse_ratfun, x, ring, f"map/{i}") for i, x in enumerate(doc["map"]))
        eta_m = _matrix(doc["eta"], ring, n, "eta")
        if not all(x.is_constant() for r in eta_m for x in r):
            raise InputError("eta must be constant")
        eta = tuple(tuple(x.constant_value() for x in r) for r in eta_m)
    metric = None
    if "metric" in doc:
        g = _matrix(doc["metric"], ring, n)
        if doc.get("metric_index", "upper") == "upper":
            metric = MetricData.from_contravariant(g)
        else:
            metric = MetricData.from_covariant(g)
    elif tmap is not None:
        metric = pullback_metric(tmap, eta)
    return StructureSpec(n, coords, conn, prod, metric, tmap, eta)


def load_spec(path) -> StructureSpec:
    doc = load_json(path)
    try:
        return spec_from_dict(doc)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


def spec_forms(doc: dict, ring: PolyRing) -> dict[str, OneForm]:
    return {k: OneForm.from_components([_at(parse_expr, x, ring, f"forms/{k}/{i}") for i, x in enumerate(v)])
            for k, v in doc.get("forms", {}).items()}


def form_from_dict(doc: dict, ring: PolyRing | None = None) -> OneForm:
    validate(doc)
    if "form_version" not in doc:
        raise InputError("not a form file (missing form_version)")
    fring = PolyRing(doc["coords"])
    if ring is not None and fring != ring:
        raise InputError(f"form coordinates {list(fring.names)} differ from {list(ring.names)}")
    n = len(fring.names)
    kinds = [k for k in ("components", "general", "density") if k in doc]
    if len(kinds) != 1:
        raise InputError("a form file needs exactly one of 'components', 'general', 'density'")
    if "components" in doc:
        if len(doc["components"]) != n:
            raise InputError(f"expected {n} components")
        return OneForm.from_components([_at(parse_expr, x, fring, f"components/{i}")
                                        for i, x in enumerate(doc["components"])])
    if "density" in doc:
        return FunctionalDensity(_at(parse_expr, doc["density"], fring, "density")).delta()
    general = {}
    for pos, (i, t, v) in enumerate(doc["general"]):
        if not 1 <= i <= n:
            raise InputError(f"coordinate index {i} out of range")
        e = _at(parse_expr, v, fring, f"general/{pos}")
        key = (i - 1, t)
        general[key] = general[key] + e if key in general else e
    return OneForm(fring, general)


def load_form(arg: str, ring: PolyRing | None = None, spec_doc: dict | None = None) -> OneForm:
    """A form from a JSON file, or ``spec:NAME`` for a form listed in the spec."""
    if arg.startswith("spec:"):
        name = arg[5:]
        if spec_doc is None or name not in spec_doc.get("forms", {}):
            raise InputError(f"spec has no form named {name!r}")
        return spec_forms({"forms": {name: spec_doc["forms"][name]}}, ring)[name]
    doc = load_json(arg)
    try:
        return form_from_dict(doc, ring)
    except InputError as exc:
        raise InputError(f"{arg}: {exc}") from None


def _tensor_entries(t) -> list:
    out = []
    n = len(t)
    for i in range(n):
        for j in range(n):
            for k in range(j, n):
                if not t[i][j][k].is_zero():
                    out.append([i + 1, j + 1, k + 1, format_ratfun(t[i][j][k])])
    return out


def _frac(x: Fraction) -> str | int:
    return int(x) if x.denominator == 1 else str(x)


def spec_to_dict(spec: StructureSpec, description: str | None = None, include_metric: bool = False) -> dict:
    doc: dict = {"spec_version": SPEC_VERSION}
    if description:
        doc["description"] = description
    doc["n"] = spec.n
    doc["coords"] = list(spec.coords)
    doc["connection"] = _tensor_entries(spec.connection.gamma)
    doc["product"] = _tensor_entries(spec.product.c)
    if spec.map is not None:
        doc["map"] = [format_ratfun(t) for t in spec.map]
        doc["eta"] = [[_frac(x) for x in r] for r in spec.eta]
    if spec.metric is not None and (include_metric or spec.map is None):
        doc["metric"] = [[format_ratfun(x) for x in r] for r in spec.metric.g_contra]
    return doc


def form_to_dict(form: OneForm) -> dict:
    return {"form_version": 1, "coords": list(form.ring.names),
            "components": [format_jet(c) for c in form.components]}


_FLAT_ARRAY = re.compile(r"\[\n\s+([^\[\]{}]*?)\n\s*\]")


def dumps(doc: dict) -> str:
    """JSON text with innermost arrays kept on one line."""
    text = json.dumps(doc, indent=2)
    return _FLAT_ARRAY.sub(lambda m: "[" + ", ".join(x.strip() for x in m.group(1).split(",\n")) + "]", text) + "\n"


def jet_to_text(e: JetExpression) -> str:
    return format_jet(e)
