"""Command-line front end.

One JSON document in, one JSON document out.  The input file holds either
a bare input description (``{"kind": "gl", ...}`` or ``{"kind": "cox", ...}``)
or a job ``{"input": {...}, "options": {...}}``; command-line flags override
job options.  Exit status: 0 success, 1 verification failure, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

import jsonschema

from .errors import StackyModuliError
from .fields import QQ, GF, format_rational, parse_rational
from .glps import CoxData, GLData, build_cox_data
from .lattice import FgAbelianGroup, GroupElement
from .pipeline import Pipeline, build_pipeline, cox_from_parts
from .polyring import Poly
from .refined import (
    RefinedRep, captures_cox_check, check_refined, default_test_degrees, generic_violations, homogenize,
    implied_theta, is_theta_semistable, is_theta_stable, mask_vertices, tested_subsets,
)
from .verify import compare_masses, fiber_check

COMMANDS = ("build", "lambda-r", "relations", "de-ideal", "captures-cox", "homogenize",
            "stability-check", "count", "fiber-check")

_rational = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^\s*-?\d+(/\d+)?\s*$"}]}
_intvec = {"type": "array", "items": {"type": "integer"}}
_poly = {"type": "array", "items": {"type": "array", "prefixItems": [_intvec, _rational], "minItems": 2,
                                    "maxItems": 2}}

GL_SCHEMA = {
    "type": "object",
    "required": ["kind", "d"],
    "properties": {
        "kind": {"const": "gl"},
        "d": {"type": "integer", "minimum": 0, "maximum": 8},
        "weights": {"type": "array", "items": {"type": "integer", "minimum": 1, "maximum": 64}},
        "forms": {"type": "array", "items": {"type": "array", "items": _rational}},
        "names": {"type": "array", "items": {"type": "string", "minLength": 1}},
    },
    "additionalProperties": False,
}

COX_SCHEMA = {
    "type": "object",
    "required": ["kind", "variables", "group", "degrees", "tilting"],
    "properties": {
        "kind": {"const": "cox"},
        "variables": {"type": "array", "items": {"type": "string", "minLength": 1}, "minItems": 1},
        "group": {
            "type": "object",
            "required": ["n_generators"],
            "properties": {
                "n_generators": {"type": "integer", "minimum": 0},
                "relators": {"type": "array", "items": _intvec},
                "orient_by": {"type": "array", "items": _intvec},
            },
            "additionalProperties": False,
        },
        "degrees": {"type": "array", "items": _intvec},
        "relations": {"type": "array", "items": _poly},
        "tilting": {"type": "array", "items": _intvec, "minItems": 1},
        "c_class": _intvec,
        "irrelevant_locus": {"type": "string"},
    },
    "additionalProperties": False,
}

OPTIONS_SCHEMA = {
    "type": "object",
    "properties": {
        "q": {"type": "array", "items": {"type": "integer", "minimum": 2}},
        "theta": _intvec,
        "degree_bound": {"type": "integer", "minimum": 0},
        "budget": {"type": "integer", "minimum": 1},
        "restricted": {"type": "boolean"},
        "rep": {
            "type": "object",
            "required": ["m"],
            "properties": {"m": {"type": "array", "items": _rational}, "g": {"type": "array", "items": _rational}},
            "additionalProperties": False,
        },
        "poly": _poly,
    },
    "additionalProperties": False,
}

INPUT_SCHEMA = {"oneOf": [GL_SCHEMA, COX_SCHEMA]}
JOB_SCHEMA = {
    "type": "object",
    "required": ["input"],
    "properties": {"input": {"type": "object"}, "options": OPTIONS_SCHEMA, "command": {"enum": list(COMMANDS)}},
    "additionalProperties": False,
}


class InputError(Exception):
    def __init__(self, message: str, path: str = ""):
        super().__init__(message)
        self.path = path


def _pointer(parts) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in parts)


def _validate(doc, schema, prefix=()) -> None:
    v = jsonschema.Draft202012Validator(schema)
    errors = sorted(v.iter_errors(doc), key=lambda e: (list(e.absolute_path), e.message))
    if not errors:
        return
    err = errors[0]
    # oneOf failures: report the branch matching the declared kind
    if err.validator == "oneOf" and isinstance(doc, dict) and doc.get("kind") in ("gl", "cox"):
        branch = GL_SCHEMA if doc["kind"] == "gl" else COX_SCHEMA
        return _validate(doc, branch, prefix)
    raise InputError(err.message, _pointer(list(prefix) + list(err.absolute_path)))


def parse_job(doc) -> tuple[dict, dict]:
    if not isinstance(doc, dict):
        raise InputError("top-level JSON value must be an object", "")
    if "input" in doc:
        _validate(doc, JOB_SCHEMA)
        _validate(doc["input"], INPUT_SCHEMA, ("input",))
        return doc["input"], dict(doc.get("options", {}))
    _validate(doc, INPUT_SCHEMA)
    return doc, {}


def cox_from_input(inp: dict) -> CoxData:
    if inp["kind"] == "gl":
        forms = tuple(tuple(parse_rational(str(x)) for x in f) for f in inp.get("forms", []))
        names = tuple(inp["names"]) if "names" in inp else None
        g = GLData(inp["d"], tuple(inp.get("weights", [])), forms, names)
        return build_cox_data(g)
    grp = inp["group"]
    n = grp["n_generators"]
    for k, r in enumerate(grp.get("relators", [])):
        if len(r) != n:
            raise InputError(f"relator has {len(r)} entries, expected {n}", f"/group/relators/{k}")
    G = FgAbelianGroup(n, grp.get("relators", []), grp.get("orient_by"))
    nv = len(inp["variables"])
    if len(inp["degrees"]) != nv:
        raise InputError(f"{len(inp['degrees'])} degrees for {nv} variables", "/degrees")
    for k, d in enumerate(inp["degrees"]):
        if len(d) != n:
            raise InputError(f"degree has {len(d)} entries, expected {n}", f"/degrees/{k}")
    rels = []
    for k, r in enumerate(inp.get("relations", [])):
        for t, (m, _) in enumerate(r):
            if len(m) != nv:
                raise InputError(f"monomial has {len(m)} exponents, expected {nv}", f"/relations/{k}/{t}/0")
        rels.append(Poly.from_json([(m, str(c)) for m, c in r], nv, QQ))
    return cox_from_parts(inp["variables"], G, inp["degrees"], rels, inp.get("c_class"),
                          inp.get("irrelevant_locus", "origin"))


# -- serialization --------------------------------------------------------------------

def _elt(e: GroupElement) -> list[int]:
    return list(e.canonical)


def _group(G: FgAbelianGroup) -> dict:
    return {"rank": G.rank, "torsion": list(G.torsion)}


def _rat(x) -> str:
    return format_rational(Fraction(x))


def _poly_json(f: Poly) -> list:
    return [[list(m), _rat(c) if not f.field.characteristic else int(c)] for m, c in f.sorted_terms()]


def emit_cox(C: CoxData, p: Pipeline) -> dict:
    G = C.group
    grp: dict = {"n_generators": G.n_generators, "relators": [list(r) for r in G.relators]}
    if G.orient_by:
        grp["orient_by"] = [list(v) for v in G.orient_by]
    out = {
        "kind": "cox",
        "variables": list(C.variables),
        "group": grp,
        "degrees": [list(d.coords) for d in C.presentation.degrees],
        "relations": [_poly_json(f) for f in C.presentation.relations],
        "tilting": [list(v.coords) for v in p.vertices],
    }
    if C.c_class is not None:
        out["c_class"] = list(C.c_class.coords)
    if C.irrelevant_locus != "origin":
        out["irrelevant_locus"] = C.irrelevant_locus
    return out


def _arrows(p: Pipeline) -> list[dict]:
    Q = p.quiver
    return [{"id": a.id, "tail": a.tail, "head": a.head, "label": Q.label_name(a), "exponents": list(a.label)}
            for a in Q.arrows]


def _relations(p: Pipeline) -> list[dict]:
    return [{"tail": r.tail, "head": r.head,
             "terms": [{"path": list(path), "coef": _rat(c)} for path, c in sorted(r.coefficients.items())]}
            for r in p.algebra.relations]


def _lambda_r(p: Pipeline) -> dict:
    QL = p.lattices
    return {
        "rank": QL.lambda_r.rank,
        "basis": [list(b) for b in QL.basis],
        "f_star": [list(v.canonical) for v in p.vertices[1:]],
        "f_star_surjective": QL.surjective,
    }


def _peirce(p: Pipeline) -> list[dict]:
    PB = p.peirce
    return [{"pair": [i, j], "paths": [list(path) for path, _ in PB[i, j]]}
            for (i, j) in PB.pairs() if i != j]


def _base(p: Pipeline, command: str) -> dict:
    return {"command": command, "group": _group(p.cox.group), "variables": list(p.cox.variables),
            "vertices": [_elt(v) for v in p.vertices]}


def _parse_rep(opt: dict, p: Pipeline, q: int | None) -> RefinedRep:
    F = GF(q) if q else QQ
    rep = opt["rep"]
    m = [F(parse_rational(str(x))) for x in rep["m"]]
    g = [F(parse_rational(str(x))) for x in rep.get("g", [1] * p.lattices.lambda_r.rank)]
    if len(m) != len(p.quiver.arrows):
        raise InputError(f"{len(m)} arrow values for {len(p.quiver.arrows)} arrows", "/options/rep/m")
    if len(g) != p.lattices.lambda_r.rank:
        raise InputError(f"{len(g)} character values for rank {p.lattices.lambda_r.rank}", "/options/rep/g")
    return RefinedRep(F, tuple(m), tuple(g))


def _theta(opt: dict, p: Pipeline) -> tuple[int, ...]:
    th = tuple(opt.get("theta") or p.default_theta())
    n = len(p.vertices)
    if len(th) not in (n - 1, n):
        raise InputError(f"theta needs {n - 1} entries (vertices other than 0)", "/options/theta")
    return tuple(implied_theta(th, n)[1:])


def run(command: str, doc: dict, opt: dict, workers: int = 1, emit: bool = False) -> tuple[dict, int]:
    """Execute one subcommand; returns ``(report, exit_code)``."""
    inp, job_opt = parse_job(doc)
    job_opt.update({k: v for k, v in opt.items() if v is not None})
    opt = job_opt
    C = cox_from_input(inp)
    vertices = [C.group.element(v) for v in inp["tilting"]] if inp["kind"] == "cox" else None
    p = build_pipeline(C, vertices)
    restricted = opt.get("restricted", True)
    code = 0
    rep = _base(p, command)

    if command == "build":
        rep.update({"arrows": _arrows(p), "relations": _relations(p), "lambda_r": _lambda_r(p)})
        if emit:
            rep["cox"] = emit_cox(C, p)
    elif command == "lambda-r":
        rep["lambda_r"] = _lambda_r(p)
    elif command == "relations":
        rep.update({"arrows": _arrows(p), "relations": _relations(p), "peirce": _peirce(p)})
    elif command == "de-ideal":
        names = p.S.variables
        rep["arrow_variables"] = list(names)
        rep["generators"] = [{"text": f.format(names), "terms": _poly_json(f)} for f in p.de_ideal]
    elif command == "captures-cox":
        bound = opt.get("degree_bound")
        degs = default_test_degrees(C, p.lattices, bound)
        cc = captures_cox_check(C, p.S, p.de_ideal, degs)
        rep.update({
            "verdict": cc.verdict,
            "certified": "degrees listed in hilbert only",
            "unreached": [{"generator": u["generator"], "degree": _elt(u["degree"]), "reason": u["reason"]}
                          for u in cc.unreached],
            "hilbert": [{"degree": _elt(h["degree"]), "lhs": h["lhs"], "rhs": h["rhs"]} for h in cc.hilbert],
        })
        code = 0 if cc.verdict else 1
    elif command == "homogenize":
        names = p.S.variables
        polys = [Poly.from_json([(m, str(c)) for m, c in opt["poly"]], len(names), QQ)] if "poly" in opt \
            else p.de_ideal
        out = []
        for f in polys:
            sh = homogenize(f, p.lattices)
            out.append({"poly": f.format(names), "terms": [
                {"monomial": list(m), "coef": _rat(c), "kappa": list(k), "kappa_r": list(p.lattices.r_coordinates(k))}
                for m, c, k in sh]})
        rep["homogenized"] = out
    elif command == "stability-check":
        th = _theta(opt, p)
        QL = p.lattices
        subsets = tested_subsets(QL, restricted)
        rep.update({"theta": list(th), "restricted": restricted,
                    "tested_subsets": [mask_vertices(s) for s in subsets],
                    "theta_zero_subsets": [mask_vertices(s) for s in generic_violations(QL, th, restricted)]})
        if "rep" in opt:
            qs = opt.get("q") or [None]
            r = _parse_rep(opt, p, qs[0])
            rep.update({"refined": check_refined(r, p.S, p.constraints),
                        "stable": is_theta_stable(r, p.quiver, QL, th, restricted),
                        "semistable": is_theta_semistable(r, p.quiver, QL, th, restricted)})
    elif command == "count":
        qs = opt.get("q") or [5]
        th = _theta(opt, p)
        reports = compare_masses(C, p.S, p.constraints, p.lattices, qs, th, restricted, opt.get("budget"), workers)
        rows = []
        for r in reports:
            print(f"q={r.q}: {r.timing:.3f}s", file=sys.stderr)
            rows.append({
                "q": r.q, "stack_mass": _rat(r.stack_mass), "refined_mass": _rat(r.refined_mass),
                "naive_stack_mass": _rat(r.naive_stack_mass), "stable_point_count": r.stable_point_count,
                "gauge_order": r.gauge_order, "candidates": r.candidates, "match": r.match,
                "stack_profile": {str(k): _rat(v) for k, v in r.stack_profile.items()},
                "refined_profile": {str(k): _rat(v) for k, v in r.refined_profile.items()},
                "profiles_match": r.profiles_match,
            })
            if not r.match:
                code = 1
        rep.update({"theta": list(th), "restricted": restricted, "reports": rows})
    elif command == "fiber-check":
        qs = opt.get("q") or [3, 5]
        res = [{"q": q, "verdict": fiber_check(p.S, p.de_ideal, p.constraints, q, opt.get("budget"))} for q in qs]
        rep["results"] = res
        code = 0 if all(r["verdict"] for r in res) else 1
    return rep, code


def _bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {s!r}")


def _intlist(s: str) -> list[int]:
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {s!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 2 with a JSON document, like other input errors
        self.print_usage(sys.stderr)
        print(json.dumps({"error": "usage", "message": message}))
        raise SystemExit(2)


def make_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="stacky-moduli", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", required=True, help="JSON input or job file ('-' for stdin)")
    ap.add_argument("--q", type=_intlist, help="comma-separated primes")
    ap.add_argument("--theta", type=_intlist, help="theta on vertices 1..n-1")
    ap.add_argument("--degree-bound", type=int)
    ap.add_argument("--budget", type=int)
    ap.add_argument("--restricted", type=_bool)
    ap.add_argument("--emit-cox", action="store_true")
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--workers", type=int, default=1)
    return ap


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    opt: dict[str, Any] = {"q": args.q, "theta": args.theta, "degree_bound": args.degree_bound,
                           "budget": args.budget, "restricted": args.restricted}
    try:
        if args.input == "-":
            doc = json.load(sys.stdin)
        else:
            with open(args.input) as fh:
                doc = json.load(fh)
        report, code = run(args.command, doc, opt, args.workers, args.emit_cox)
    except json.JSONDecodeError as e:
        report, code = {"error": "json", "message": str(e), "path": ""}, 2
    except OSError as e:
        report, code = {"error": "io", "message": str(e), "path": ""}, 2
    except InputError as e:
        report, code = {"error": "schema", "message": str(e), "path": e.path}, 2
    except (StackyModuliError, ValueError) as e:
        report, code = {"error": type(e).__name__, "message": str(e), "path": ""}, 2
    text = dumps(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
