"""Command-line entry point: JSON jobs in, deterministic JSON reports out.

Exit codes: 0 when every requested result was certified, 1 when a check
failed, 2 for invalid input, 3 for a non-regular map, 4 when a budget ran out.
"""

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import PolyRing, RationalFunctionField, canonical, field_from_record
from .algebra.fields import QQ
from .budget import BudgetExceeded, limits
from .curve import ContractedCurve, new_curve, pushforward_image
from .endo import (NotRegular, check_semiconjugacy, commutes_with, is_homogeneous, is_skew_product,
                   new_endomorphism, restrict_infinity, RationalPair)
from .family import (EndoFamily, family_degree_sequence, marked_infinity_points, superattracting_parameters)
from .infinity import critical_points, periodic_points
from .p1 import point_text
from .local import PlanePoint, intersection_multiplicity, resolution_tree, shared_tree_depth
from .search import find_periodic_curves, orbit_degree_sequence, stabilization_audit
from .webs import AFFINE, PROJECTIVE, build_web_form, factorization_check, form_ring, is_invariant_web

OK, FAILED, BAD_INPUT, NOT_REGULAR, OUT_OF_BUDGET = 0, 1, 2, 3, 4

COMMANDS = ("analyze", "image", "orbit", "find-periodic", "resolve", "family-audit", "web", "verify-examples")


class InputError(ValueError):
    pass


@dataclass
class JobSpec:
    command: str
    inputs: list = field(default_factory=list)
    mode: str = "exact"
    degree_bound: int = 1
    period_bound: int = 1
    jet_order: int = None
    steps: int = None
    depth: int = 3
    budget_ms: int = None
    out: str = None
    options: dict = field(default_factory=dict)

    def validate(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.mode not in ("exact", "numeric"):
            raise InputError(f"--mode must be exact or numeric, not {self.mode!r}")
        if self.steps is None:
            # family orbits double in degree over Q(t); keep the default short there
            self.steps = 2 if self.command == "family-audit" else 4
        for name in ("degree_bound", "period_bound", "steps", "depth"):
            if getattr(self, name) < 1:
                raise InputError(f"--{name.replace('_', '-')} must be positive")
        if self.jet_order is not None and self.jet_order < 1:
            raise InputError("--jet-order must be positive")
        if self.budget_ms is not None and self.budget_ms < 0:
            raise InputError("--budget-ms must not be negative")
        return self


# ------------------------------------------------------------------ input
def load_record(arg):
    """A JSON record given inline or as a path to a .json file."""
    text = arg
    if not arg.lstrip().startswith(("{", "[", '"')):
        if not os.path.exists(arg):
            raise InputError(f"{arg}: no such file and not inline JSON")
        with open(arg, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None


def _require(rec, keys, what):
    if not isinstance(rec, dict):
        raise InputError(f"{what} record must be a JSON object")
    missing = [k for k in keys if k not in rec]
    if missing:
        raise InputError(f"{what} record is missing {', '.join(missing)}")


def _field(rec):
    try:
        return field_from_record(rec.get("field", "Q"))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def endo_from_record(rec):
    _require(rec, ("P", "Q"), "endomorphism")
    K = _field(rec)
    names = tuple(rec.get("vars", ("x", "y")))
    if len(names) != 2:
        raise InputError("an endomorphism record needs exactly two variables")
    ring = PolyRing(K, names)
    try:
        P, Q = ring(rec["P"]), ring(rec["Q"])
    except ValueError as exc:
        raise InputError(f"cannot parse the map: {exc}") from None
    return new_endomorphism(P, Q)


def curve_from_record(rec, default_field=QQ):
    if isinstance(rec, str):
        rec = {"poly": rec}
    _require(rec, ("poly",), "curve")
    K = _field(rec) if "field" in rec else default_field
    form = rec.get("form", "affine")
    if form not in ("affine", "homogeneous"):
        raise InputError(f"curve form must be affine or homogeneous, not {form!r}")
    try:
        return new_curve(rec["poly"], form, K)
    except ValueError as exc:
        raise InputError(f"cannot read the curve: {exc}") from None


def _point(text):
    try:
        a, b = (Fraction(v.strip()) for v in text.split(","))
    except ValueError:
        raise InputError(f"a point is written 'a,b' with rational a, b, not {text!r}") from None
    return PlanePoint((a, b))


def _verdict(v):
    out = {"holds": v.holds, "scope": v.scope, "note": v.note}
    if v.witness is not None:
        out["witness"] = [str(c) for c in v.witness] if isinstance(v.witness, tuple) else str(v.witness)
    return out


# --------------------------------------------------------------- commands
def cmd_analyze(job):
    F = endo_from_record(job.inputs[0])
    f = restrict_infinity(F)
    Pd, Qd = F.leading_forms()
    periodic = {}
    for n in range(1, job.period_bound + 1):
        reports = periodic_points(f, n, mode=job.mode)
        periodic[str(n)] = [r.record() for r in reports if r.period == n]
    crit = [{"point": p, "multiplicity": m} for p, m in _critical(f)]
    report = {
        "regular": True,
        "degree": F.degree,
        "field": F.field.record(),
        "map": [str(F.P), str(F.Q)],
        "leading_forms": [str(Pd), str(Qd)],
        "infinity_map": f.text(),
        "periodic_points": periodic,
        "critical_points": crit,
        "skew_product": _verdict(is_skew_product(F)),
        "homogeneous": _verdict(is_homogeneous(F)),
    }
    return report, OK


def _critical(f):
    pts, packets = critical_points(f)
    out = [(point_text(p), m) for p, m in pts]
    out.extend((f"roots of {pk.text()}", pk.multiplicity) for pk in packets)
    return out


def cmd_image(job):
    F = endo_from_record(job.inputs[0])
    C = curve_from_record(job.inputs[1], F.field)
    try:
        cert = pushforward_image(F, C)
    except ContractedCurve as exc:
        return {"source": C.text(), "contracted": str(exc)}, FAILED
    rec = cert.record()
    rec["verified"] = cert.verify(F)
    rec["degree_formula"] = cert.degree_formula_holds()
    return rec, OK if rec["verified"] else FAILED


def cmd_orbit(job):
    F = endo_from_record(job.inputs[0])
    C = curve_from_record(job.inputs[1], F.field)
    rep = orbit_degree_sequence(F, C, job.steps)
    return rep.record(), OUT_OF_BUDGET if rep.truncated else OK


def cmd_find_periodic(job):
    F = endo_from_record(job.inputs[0])
    cands = [curve_from_record(c, F.field) for c in job.inputs[1:]]
    cat = find_periodic_curves(F, job.degree_bound, job.period_bound, candidates=cands, jet_order=job.jet_order)
    return cat.record(), OUT_OF_BUDGET if cat.partial else OK


def cmd_resolve(job):
    p = _point(job.options.get("point") or "0,0")
    curves = [curve_from_record(c) for c in job.inputs]
    try:
        out = {"point": p.text(), "trees": [resolution_tree(C, p, job.depth).to_json() for C in curves]}
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if len(curves) == 2:
        C1, C2 = curves
        out["intersection_multiplicity"] = intersection_multiplicity(C1, C2, p)
        out["shared_depth"] = shared_tree_depth(C1, C2, p, job.depth)
    return out, OK


def cmd_family_audit(job):
    rec = job.inputs[0]
    F = endo_from_record(rec)
    if not isinstance(F.field, RationalFunctionField):
        raise InputError('a family record needs "field": "Q(t)"')
    fam = EndoFamily.from_endo(F)
    out = {"family": fam.record()}
    code = OK
    curve = rec.get("curve") if len(job.inputs) < 2 else job.inputs[1]
    if curve is not None:
        X = curve_from_record(curve, F.field)
        degs = family_degree_sequence(fam, X, job.steps, special=tuple(rec.get("special", ())))
        out["degrees"] = degs.record()
        if degs.generic.truncated:
            code = OUT_OF_BUDGET
        out["stabilization"] = stabilization_audit(F, X).record() if X.degree else None
        marked = [m for m in marked_infinity_points(X) if m.packet is None]
    else:
        marked = []
    f = restrict_infinity(F)
    params = []
    for m in marked:
        params.append({"marked_point": m.text(),
                       "superattracting": superattracting_parameters(f, m, job.period_bound).record()})
    for a in rec.get("marked", ()):
        params.append({"marked_point": str(a),
                       "superattracting": superattracting_parameters(f, F.field(a), job.period_bound).record()})
    out["superattracting_parameters"] = params
    return out, code


def cmd_web(job):
    rec = job.inputs[0]
    _require(rec, ("poly", "param", "k"), "web")
    K = _field(rec)
    coords = PROJECTIVE if rec.get("coords", "projective") == "projective" else AFFINE
    s = rec["param"]
    try:
        P = PolyRing(K, coords + (s,))(rec["poly"])
    except ValueError as exc:
        raise InputError(f"cannot parse the family: {exc}") from None
    omega = build_web_form(P, s, int(rec["k"]), int(rec.get("e", 1)), coords)
    out = {
        "form": omega.to_json(),
        "k": omega.k,
        "degenerate": omega.is_degenerate(),
        "factorization": _factorization_record(omega),
    }
    code = OK
    if len(job.inputs) > 1:
        F = endo_from_record(job.inputs[1])
        inv = is_invariant_web(F, omega)
        out["invariant"] = inv.holds
        out["factor"] = None if inv.factor is None else str(inv.factor)
        code = OK if inv.holds else FAILED
    return out, code


def _factorization_record(omega):
    chk = factorization_check(omega)
    return {"samples": chk["samples"], "failures": [list(p) for p in chk["failures"]],
            "factorizable": chk["factorizable"]}


# ---------------------------------------------------------------- gallery
A2 = ("x^2 - y^2 - 2*x", "2*x*y + 2*y")
A2_SPLIT = ("x^2 - 2*y", "y^2 - 2*x")
A3 = ("x^3 - 3*x*y^2 - 3*x^2 - 3*y^2 + 3", "3*x^2*y - y^3")
PHI = ("(x^2*y + x*y^2 + 1)/(x*y)", "(x + y + x^2*y^2)/(x*y)")
LINE_FAMILY = {"second": "y - k*x - 1/k + k^2", "first": "y - k*x - 1/k + 1/k^2"}
INCIDENCE = "z*k^3 - x*k^2 + y*k - z"


def _two_cycle():
    F = new_endomorphism("x^2", "y^2 - x")
    C = new_curve("y")
    first = pushforward_image(F, C)
    second = pushforward_image(F, first.image)
    ok = (first.image == new_curve("y^2 - x") and second.image == C
          and first.verify(F) and second.verify(F))
    return ok, {"images": [first.image.text(), second.image.text()], "deltas": [first.delta, second.delta]}


def _degree_growth():
    S = RationalFunctionField("s")
    R = PolyRing(S, ("x", "y"))
    F = new_endomorphism(R("x^2"), R("y^2 + s*x"))
    rep = family_degree_sequence(EndoFamily.from_endo(F), new_curve(R("y - s*x")), 2, samples=(1,), special=(0,))
    degs = rep.generic.degrees
    drop = any(c.get("flag") == "degree drop" for c in rep.spot_checks if c["parameter"] == "0")
    ok = degs == [1, 2, 4] and drop
    return ok, {"generic": degs, "spot_checks": rep.spot_checks}


def _commuting():
    ok = commutes_with(new_endomorphism(*A2), new_endomorphism(*A3))
    return ok, {"A2": list(A2), "A3": list(A3)}


def _semiconjugacy():
    mu = RationalPair.from_text(*PHI)
    ok = check_semiconjugacy(mu, new_endomorphism("x^2", "y^2"), new_endomorphism(*A2_SPLIT))
    return ok, {"mu": list(PHI), "G": ["x^2", "y^2"], "F": list(A2_SPLIT)}


def _omega_expansion():
    R = PolyRing(QQ, PROJECTIVE + ("k",))
    omega = build_web_form(R(INCIDENCE), "k", 3)
    fr = form_ring(QQ)
    alpha, beta = fr("z*dy - y*dz"), fr("x*dz - z*dx")
    displayed = alpha ** 3 + fr("x") * alpha ** 2 * beta + fr("y") * alpha * beta ** 2 + beta ** 3
    one = fr.one
    same = canonical(omega.poly.compose({"z": one})) == canonical(displayed.compose({"z": one}))
    inv = is_invariant_web(new_endomorphism(*A2_SPLIT), omega)
    return same and inv.holds, {"form": omega.to_json(), "matches_display": same, "invariant": inv.holds,
                                "factor": str(inv.factor)}


def _line_family(variant):
    def run():
        K = RationalFunctionField("k")
        rep = stabilization_audit(new_endomorphism(*A2_SPLIT), PolyRing(K, ("x", "y"))(LINE_FAMILY[variant]))
        ok = rep.status == "found" and rep.reparametrization == K.gen() ** 2
        return ok, {"variant": variant, **rep.record()}
    return run


def gallery(variant="second"):
    return [
        ("two-cycle", _two_cycle),
        ("degree-growth", _degree_growth),
        ("a2-a3-commute", _commuting),
        ("phi-semiconjugacy", _semiconjugacy),
        ("omega-expansion", _omega_expansion),
        ("a2-line-family", _line_family(variant)),
    ]


def cmd_verify_examples(job):
    results = []
    failing = []
    for name, fn in gallery(job.options.get("a2_variant", "second")):
        entry = {"id": name}
        try:
            with _budget(job):
                ok, detail = fn()
            entry["status"] = "pass" if ok else "fail"
            entry["detail"] = detail
        except BudgetExceeded as exc:
            entry["status"] = "skipped"
            entry["error"] = f"budget: {exc}"
        if entry["status"] != "pass":
            failing.append(name)
        results.append(entry)
    if not failing:
        code = OK
    elif all(e["status"] == "skipped" for e in results if e["id"] in failing):
        code = OUT_OF_BUDGET
    else:
        code = FAILED
    return {"examples": results, "failing": failing}, code


HANDLERS = {
    "analyze": cmd_analyze,
    "image": cmd_image,
    "orbit": cmd_orbit,
    "find-periodic": cmd_find_periodic,
    "resolve": cmd_resolve,
    "family-audit": cmd_family_audit,
    "web": cmd_web,
    "verify-examples": cmd_verify_examples,
}


def _budget(job):
    seconds = None if job.budget_ms is None else job.budget_ms / 1000
    return limits(seconds=seconds)


def run_job(job):
    """(report, exit code) for a validated job; errors become reports."""
    job.validate()
    try:
        if job.command == "verify-examples":
            return HANDLERS[job.command](job)
        with _budget(job):
            return HANDLERS[job.command](job)
    except NotRegular as exc:
        return {"regular": False, "reason": str(exc), "witness": _witness_text(exc.witness)}, NOT_REGULAR
    except BudgetExceeded as exc:
        return {"error": "budget", "message": str(exc)}, OUT_OF_BUDGET
    except InputError as exc:
        return {"error": "input", "message": str(exc)}, BAD_INPUT


def _witness_text(w):
    if isinstance(w, tuple):
        return "[" + ":".join(str(c) for c in w) + "]"
    return w


def dumps(report):
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def build_parser():
    ap = argparse.ArgumentParser(prog="planedyn", description="Exact dynamics of regular polynomial maps of the plane.")
    ap.add_argument("--mode", choices=("exact", "numeric"), default="exact", help="periodic point arithmetic")
    ap.add_argument("--degree-bound", type=int, default=1, help="curve degree bound D (default 1)")
    ap.add_argument("--period-bound", type=int, default=1, help="period bound N (default 1)")
    ap.add_argument("--jet-order", type=int, default=None, help="jet length (default D^2 + D + 2)")
    ap.add_argument("--steps", type=int, default=None, help="orbit length k (default 4, or 2 for family-audit)")
    ap.add_argument("--depth", type=int, default=3, help="resolution tree depth (default 3)")
    ap.add_argument("--point", default=None, help="affine point 'a,b' for resolve (default 0,0)")
    ap.add_argument("--budget-ms", type=int, default=None, help="wall-clock budget per computation")
    ap.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    ap.add_argument("--a2-variant", choices=("first", "second"), default="second",
                    help="constant term of the A2 line family used by verify-examples")
    ap.add_argument("--timing", action="store_true", help="report elapsed time on stderr")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("inputs", nargs="*", help="JSON records, inline or as file paths")
    return ap


ARITY = {"analyze": (1, 1), "image": (2, 2), "orbit": (2, 2), "find-periodic": (1, None), "resolve": (1, 2),
         "family-audit": (1, 2), "web": (1, 2), "verify-examples": (0, 0)}


def job_from_args(args):
    lo, hi = ARITY[args.command]
    n = len(args.inputs)
    if n < lo or (hi is not None and n > hi):
        raise InputError(f"{args.command} takes {lo}{'' if hi == lo else '+' if hi is None else f'-{hi}'} inputs, got {n}")
    job = JobSpec(args.command, [load_record(a) for a in args.inputs], args.mode, args.degree_bound,
                  args.period_bound, args.jet_order, args.steps, args.depth, args.budget_ms, args.out,
                  {"point": args.point, "a2_variant": args.a2_variant})
    return job.validate()


def main(argv=None):
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        job = job_from_args(args)
    except InputError as exc:
        report, code = {"error": "input", "message": str(exc)}, BAD_INPUT
    else:
        report, code = run_job(job)
    text = dumps(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.timing:
        print(f"elapsed {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
