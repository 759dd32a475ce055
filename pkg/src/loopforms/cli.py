"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a check fails (defects are
printed), 2 on input, parse or mode errors.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .errors import InputError, LoopFormsError, ParseError
from .fmanifold import (
    HierarchyForm,
    check_fmanifold,
    check_invariance,
    check_metric_connection,
    epsilon_system,
    involution_check,
    verify_recursion,
)
from .forms import exactness_defect, pairing
from .jet import is_total_derivative
from .poisson import (
    MODES,
    MetricData,
    antihom_defect,
    apply_P,
    bracket,
    cartan_defect,
    casimir_form,
    check_flat,
    jacobi_defect,
)
from .poly import PolyRing
from .printer import format_jet
from .randgen import (
    DEFAULT_SEED,
    coord_names,
    random_constant_metric,
    random_density,
    random_form,
    random_point_form,
)
from .ratfun import format_ratfun
from .report import Report
from .specfile import dumps, form_to_dict, golden_epsilon3, load_form, load_json, spec_from_dict, spec_to_dict


class Context:
    def __init__(self, args):
        self.threads = max(1, getattr(args, "threads", 1) or 1)
        self.timing = getattr(args, "timing", False)
        self._t = {}

    def parallel(self, funcs):
        """Run independent zero-argument callables; results keep input order."""
        if self.threads == 1 or len(funcs) < 2:
            return [f() for f in funcs]
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(lambda f: f(), funcs))

    def timed(self, name, f):
        t0 = time.perf_counter()
        out = f()
        self._t[name] = time.perf_counter() - t0
        return out

    def timing_dict(self):
        return dict(self._t) if self.timing else None


def _defects(d: dict) -> list[str]:
    return [f"({', '.join(str(i + 1) for i in k)}): {format_ratfun(v)}" for k, v in d.items()]


def _form_lines(form) -> list[str]:
    return [format_jet(c) for c in form.components]


def _nonzero_form_defects(form) -> list[str]:
    return [f"component {i + 1}: {format_jet(c)}" for i, c in enumerate(form.components) if not c.is_zero()]


def _load_spec(path):
    doc = load_json(path)
    try:
        return doc, spec_from_dict(doc)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


def _need_metric(spec) -> MetricData:
    if spec.metric is None:
        raise LoopFormsError("spec has no metric (give 'metric' or 'map' with 'eta')")
    return spec.metric


# -- commands -------------------------------------------------------------------

def cmd_check_structure(args, ctx: Context) -> Report:
    doc, spec = _load_spec(args.spec)
    rep = Report("check-structure")
    jobs = [lambda: ("fmanifold", check_fmanifold(spec))]
    if spec.metric is not None:
        jobs += [
            lambda: ("flat", check_flat(spec.metric)),
            lambda: ("metric-compat", spec.metric.check_compatibility()),
            lambda: ("metric-connection", check_metric_connection(spec)),
            lambda: ("invariance", check_invariance(spec.metric, spec.product)),
        ]
    for tag, res in ctx.timed("checks", lambda: ctx.parallel(jobs)):
        if tag == "fmanifold":
            for r in res:
                rep.check(r.name, r.passed, _defects(r.defects))
        elif tag in ("flat", "metric-compat"):
            ok, d = res
            rep.check("metric-flatness" if tag == "flat" else "metric-compatibility", ok, _defects(d))
        elif tag == "metric-connection":
            rep.check(res.name, res.passed, _defects(res.defects))
        else:
            # invariance selects the Hamiltonian sub-case; it is reported, not required
            rep.check(res.name, res.passed, _defects(res.defects), informational=True)
    rep.timing = ctx.timing_dict()
    return rep


def cmd_bracket(args, ctx: Context) -> Report:
    doc, spec = _load_spec(args.spec)
    M = _need_metric(spec)
    a = load_form(args.a, spec.ring, doc)
    b = load_form(args.b, spec.ring, doc)
    res = ctx.timed("bracket", lambda: bracket(M, a, b, args.mode))
    rep = Report(f"bracket --mode {args.mode}")
    rep.results["bracket"] = _form_lines(res)
    rep.results["zero"] = res.is_zero()
    rep.timing = ctx.timing_dict()
    return rep


def cmd_reduce(args, ctx: Context):
    form = load_form(args.form)
    if args.emit:
        return dumps(form_to_dict(form))
    rep = Report("reduce")
    rep.results["reduced"] = _form_lines(form)
    return rep


def cmd_apply_p(args, ctx: Context) -> Report:
    doc, spec = _load_spec(args.spec)
    M = _need_metric(spec)
    form = load_form(args.form, spec.ring, doc)
    field = ctx.timed("apply-p", lambda: apply_P(M, form))
    rep = Report("apply-p")
    rep.results["field"] = [format_jet(c) for c in field.components]
    rep.timing = ctx.timing_dict()
    return rep


def cmd_jacobi(args, ctx: Context) -> Report:
    doc, spec = _load_spec(args.spec)
    M = _need_metric(spec)
    a, b, c = (load_form(x, spec.ring, doc) for x in (args.a, args.b, args.c))
    d = ctx.timed("jacobi", lambda: jacobi_defect(M, a, b, c))
    rep = Report("jacobi")
    rep.check("jacobi", d.is_zero(), _nonzero_form_defects(d))
    rep.timing = ctx.timing_dict()
    return rep


def cmd_cartan(args, ctx: Context) -> Report:
    doc, spec = _load_spec(args.spec)
    M = _need_metric(spec)
    a, b = (load_form(x, spec.ring, doc) for x in (args.a, args.b))
    d = ctx.timed("cartan", lambda: cartan_defect(M, a, b))
    rep = Report("cartan")
    rep.check("cartan", d.is_zero(), _nonzero_form_defects(d))
    rep.timing = ctx.timing_dict()
    return rep


def cmd_hierarchy_verify(args, ctx: Context) -> Report:
    doc, spec = _load_spec(args.spec)
    M = _need_metric(spec)
    names = args.forms
    forms = [HierarchyForm((1, k), load_form(x, spec.ring, doc)) for k, x in enumerate(names)]
    rep = Report("hierarchy-verify")
    jobs = []
    for k in range(1, len(forms)):
        jobs.append(lambda k=k: ("recursion", k, verify_recursion(spec, forms[k], forms[k - 1])))
    for k in range(len(forms)):
        jobs.append(lambda k=k: ("exact", k, exactness_defect(forms[k].form)))
    for k in range(len(forms)):
        for m in range(k + 1, len(forms)):
            jobs.append(lambda k=k, m=m: ("involution", (k, m), involution_check(M, forms[k], forms[m])))
    for tag, key, res in ctx.timed("hierarchy", lambda: ctx.parallel(jobs)):
        if tag == "recursion":
            rep.check(f"recursion {names[key - 1]} -> {names[key]}", res.passed, _defects(res.defects))
        elif tag == "exact":
            d = {(i, j): res[i][j] for i in range(len(res)) for j in range(i + 1, len(res)) if not res[i][j].is_zero()}
            rep.check(f"closed {names[key]}", not d, _defects(d), informational=True)
        else:
            k, m = key
            rep.check(f"involution {names[k]}, {names[m]}", res.is_zero(), _nonzero_form_defects(res))
    rep.timing = ctx.timing_dict()
    return rep


def cmd_epsilon(args, ctx: Context) -> Report | str:
    eps = Fraction(args.eps)
    spec = ctx.timed("build", lambda: epsilon_system(args.n, eps))
    if args.emit:
        doc = spec_to_dict(spec, f"epsilon-system, n = {args.n}, eps = {eps}")
        if spec.map is not None:
            doc["forms"] = golden_epsilon3()["forms"]
        return dumps(doc)
    rep = Report(f"epsilon --n {args.n} --eps {eps}")
    for r in check_fmanifold(spec):
        rep.check(r.name, r.passed, _defects(r.defects))
    if spec.metric is not None:
        ok, d = check_flat(spec.metric)
        rep.check("metric-flatness", ok, _defects(d))
        r = check_metric_connection(spec)
        rep.check(r.name, r.passed, _defects(r.defects))
    rep.timing = ctx.timing_dict()
    return rep


def cmd_casimir_check(args, ctx: Context) -> Report:
    doc, spec = _load_spec(args.spec)
    M = _need_metric(spec)
    form = load_form(args.form, spec.ring, doc)
    rep = Report("casimir-check")
    field = apply_P(M, form)
    for i, name in enumerate(spec.coords):
        e = casimir_form(spec.ring, i)
        Pe = apply_P(M, e)
        rep.check(f"P(delta {name}) = 0", Pe.is_zero(),
                  [f"component {k + 1}: {format_jet(c)}" for k, c in enumerate(Pe.components) if not c.is_zero()])
        dens = pairing(e, field).density
        rep.check(f"<delta {name}, P form> is a total derivative", is_total_derivative(dens),
                  [] if is_total_derivative(dens) else [format_jet(dens)])
    return rep


def cmd_properties(args, ctx: Context) -> Report:
    rng = random.Random(args.seed)
    n = args.n
    ring = PolyRing(coord_names(n))
    rep = Report(f"properties --seed {args.seed} --count {args.count}")
    cases = []
    for k in range(args.count):
        M = MetricData.constant(ring, random_constant_metric(rng, n))
        a, b, c = (random_form(rng, ring, args.order, args.degree) for _ in range(3))
        pa, pb = random_point_form(rng, ring), random_point_form(rng, ring)
        f, g = random_density(rng, ring), random_density(rng, ring)
        cases.append((M, a, b, c, pa, pb, f, g))

    def run(case):
        from .poisson import functional_bracket

        M, a, b, c, pa, pb, f, g = case
        fl = bracket(M, a, b, "flat")
        hy = bracket(M, pa, pb, "flat")
        return {
            "jacobi": jacobi_defect(M, a, b, c).is_zero(),
            "antihomomorphism": antihom_defect(M, a, b).is_zero(),
            "cartan": cartan_defect(M, a, b).is_zero(),
            "antisymmetry": (fl + bracket(M, b, a, "flat")).is_zero(),
            "mode-agreement": fl == bracket(M, a, b, "definition") == bracket(M, a, b, "general")
            and hy == bracket(M, pa, pb, "hydro"),
            "exact-forms": bracket(M, f.delta(), g.delta(), "flat") == functional_bracket(M, f, g).delta(),
        }

    outcomes = ctx.timed("properties", lambda: ctx.parallel([lambda c=c: run(c) for c in cases]))
    for prop in ("jacobi", "antihomomorphism", "cartan", "antisymmetry", "mode-agreement", "exact-forms"):
        bad = [str(k) for k, o in enumerate(outcomes) if not o[prop]]
        rep.check(f"{prop} ({args.count} cases)", not bad, [f"failing case {b}" for b in bad])
    rep.timing = ctx.timing_dict()
    return rep


# -- argument parsing -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the JSON report instead of text")
    common.add_argument("--threads", type=int, default=1, metavar="K", help="worker threads for independent checks")
    common.add_argument("--timing", action="store_true", help="include wall-clock timings in the report")

    p = argparse.ArgumentParser(prog="loopforms", description="Exact Poisson calculus on loop-space 1-forms.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check-structure", parents=[common], help="F-manifold, flatness and invariance checks")
    s.add_argument("spec")
    s.set_defaults(func=cmd_check_structure)

    s = sub.add_parser("bracket", parents=[common], help="Poisson bracket of two 1-forms")
    s.add_argument("--mode", choices=MODES, default="flat")
    s.add_argument("spec")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_bracket)

    s = sub.add_parser("reduce", parents=[common], help="reduce a 1-form to standard form")
    s.add_argument("form")
    s.add_argument("--emit", action="store_true", help="write the reduced form as a form file")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("apply-p", parents=[common], help="evolutionary field P(form)")
    s.add_argument("spec")
    s.add_argument("form")
    s.set_defaults(func=cmd_apply_p)

    s = sub.add_parser("jacobi", parents=[common], help="Jacobi identity on three forms (constant metric)")
    s.add_argument("spec")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("c")
    s.set_defaults(func=cmd_jacobi)

    s = sub.add_parser("cartan", parents=[common], help="Cartan formula balance (constant metric)")
    s.add_argument("spec")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_cartan)

    s = sub.add_parser("hierarchy-verify", parents=[common], help="recursion, closedness and involution of forms")
    s.add_argument("spec")
    s.add_argument("forms", nargs="+")
    s.set_defaults(func=cmd_hierarchy_verify)

    s = sub.add_parser("epsilon", parents=[common], help="build (and optionally emit) the epsilon-system")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--eps", default="1", help="rational parameter, e.g. 1 or -1/2")
    s.add_argument("--emit", action="store_true", help="write the structure spec as JSON")
    s.add_argument("-o", "--output", help="file for --emit (default: stdout)")
    s.set_defaults(func=cmd_epsilon)

    s = sub.add_parser("casimir-check", parents=[common], help="Casimir and leaf-tangency checks")
    s.add_argument("spec")
    s.add_argument("form")
    s.set_defaults(func=cmd_casimir_check)

    s = sub.add_parser("properties", parents=[common], help="seeded random identity checks")
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--count", type=int, default=10)
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--order", type=int, default=2, help="maximal jet order of random forms")
    s.add_argument("--degree", type=int, default=2, help="maximal coefficient degree")
    s.set_defaults(func=cmd_properties)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    ctx = Context(args)
    try:
        if args.command == "epsilon":
            try:
                Fraction(args.eps)
            except ValueError:
                raise LoopFormsError(f"invalid rational {args.eps!r}") from None
        out = args.func(args, ctx)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (LoopFormsError, ZeroDivisionError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if isinstance(out, str):
        if getattr(args, "output", None):
            with open(args.output, "w") as fh:
                fh.write(out)
        else:
            sys.stdout.write(out)
        return 0
    print(out.to_json() if args.json else out.to_text())
    return out.exit_code


if __name__ == "__main__":
    sys.exit(main())
