"""Command-line front end.

Exit codes: 0 holds / verified, 1 fails / refuted, 2 unknown, budget
exhausted, or bad input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import verify
from .constructions import (constant_set_functor, grothendieck, hom_functor, product, pullback,
                            slice_category)
from .core import CategoryError, FiniteCategory, materialize, opposite, validate_category
from .engine import (ArrowQuery, ArrowVerdict, DegreeReport, OracleCapExceeded, check_arrow,
                     check_arrow_oracle, degree_bounds, degree_exact_finite, recheck_arrow,
                     recheck_degree)
from .formats import (FormatError, dumps, load_category, load_functor, load_json,
                      load_structure, save_category)
from .structures import (AllStructuresSpec, ChainsSpec, SetsSpec, Signature, StructureClassView,
                         add_constants, enumerate_embeddings, find_strong_amalgam, is_linear_order,
                         linear_orders_spec, rigid_surjection_category, rigid_surjections, superpose)

EXIT_OK, EXIT_FAIL, EXIT_UNKNOWN = 0, 1, 2

PREDICATES = {
    "all": None,
    "graphs": lambda s: all(x != y and (y, x) in s.relations["E"] for x, y in s.relations["E"]),
    "orders": lambda s: is_linear_order(s, "<"),
}


# ---------------------------------------------------------------------------
# inputs


def _parse_relations(text: str) -> dict:
    out = {}
    for item in filter(None, text.split(",")):
        name, _, arity = item.partition(":")
        out[name] = int(arity or 2)
    return out


def build_spec(args):
    kind = args.cls
    cap = args.max_size
    if kind == "chains":
        return ChainsSpec(cap)
    if kind == "sets":
        return SetsSpec(cap)
    if kind == "superpose":
        return superpose(linear_orders_spec(cap, "<"), linear_orders_spec(cap, "<2"))
    if kind == "add-constants":
        return add_constants(ChainsSpec(cap), args.constants)
    if kind == "all-structures":
        sig = Signature.make(relations=_parse_relations(args.relations))
        return AllStructuresSpec(sig, cap or 3, PREDICATES[args.predicate], args.predicate)
    raise FormatError(f"unknown class {kind!r}")


def load_view(args, finite: bool = False):
    """The category named by ``--cat`` or ``--class``."""
    if getattr(args, "cat", None):
        cat = load_category(args.cat)
        rep = validate_category(cat)
        if not rep.ok:
            raise FormatError(f"{args.cat}: fails validation ({', '.join(rep.failures())})")
        return cat
    if getattr(args, "cls", None):
        if args.cls == "rs-chains":
            # rigid surjections are mono only in the opposite category
            return opposite(rigid_surjection_category(args.max_size or 4))
        spec = build_spec(args)
        cap = args.max_size if (finite or args.max_size) else None
        return StructureClassView(spec, cap)
    raise FormatError("give --cat FILE or --class NAME")


def _add_view_args(p):
    p.add_argument("--cat", help="category JSON file")
    p.add_argument("--class", dest="cls",
                   choices=["chains", "sets", "superpose", "add-constants", "all-structures",
                            "rs-chains"], help="named structure class")
    p.add_argument("--max-size", type=_positive, help="universe size budget for class views")
    p.add_argument("--constants", type=_positive, default=1, help="constants for add-constants")
    p.add_argument("--relations", default="E:2", help="relations for all-structures, e.g. E:2,P:1")
    p.add_argument("--predicate", choices=sorted(PREDICATES), default="all")


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def emit(args, payload: dict, text: str):
    out = dumps(payload) if args.format == "json" else text + "\n"
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args) -> int:
    cat = load_category(args.path)
    rep = validate_category(cat)
    lines = [f"{name}: {'ok' if c.passed else 'FAIL'}" + ("" if c.passed else f" {c.message} {c.counterexample}")
             for name, c in rep.checks.items()]
    emit(args, rep.to_dict(), "\n".join(lines))
    return EXIT_OK if rep.ok and rep.mono else EXIT_FAIL


def cmd_construct(args) -> int:
    kind = args.kind
    if kind == "product":
        view = product(load_category(args.c1), load_category(args.c2))
    elif kind == "pullback":
        view = pullback(load_functor(args.f1), load_functor(args.f2))
    elif kind == "grothendieck":
        cat = load_category(args.cat)
        H = hom_functor(cat, args.hom) if args.hom else constant_set_functor(cat, range(args.const))
        view = grothendieck(cat, H)
    elif kind == "slice":
        cat = load_category(args.cat)
        view = slice_category(cat, args.x)
    else:
        cat = load_category(args.input)
        result = opposite(cat)
        return _write_category(args, result)
    return _write_category(args, materialize(view))


def _write_category(args, cat: FiniteCategory) -> int:
    if args.out:
        save_category(cat, args.out)
    else:
        sys.stdout.write(dumps(cat.to_dict()))
    return EXIT_OK


def _query(view, args) -> ArrowQuery:
    return ArrowQuery(view.find_object(args.A), view.find_object(args.B), view.find_object(args.C),
                      args.k, args.t, args.variant)


def cmd_arrow(args) -> int:
    view = load_view(args)
    if args.report:
        verdict = ArrowVerdict.from_dict(load_json(args.report))
        ok, msg = recheck_arrow(view, verdict, args.oracle_cap)
        emit(args, {"recheck": ok, "message": msg}, f"recheck: {'ok' if ok else 'FAILED'} ({msg})")
        return EXIT_OK if ok else EXIT_FAIL
    q = _query(view, args)
    verdict = check_arrow(view, q, symmetry=args.symmetry)
    payload = verdict.to_dict()
    lines = [verdict.summary()]
    if not verdict.holds:
        lines.append("bad coloring: " + ", ".join(f"{d}={c}" for d, c in zip(verdict.domain, verdict.coloring)))
    if args.oracle:
        try:
            o = check_arrow_oracle(view, q, cap=args.oracle_cap)
            payload["oracle_agrees"] = o.holds == verdict.holds
            lines.append(f"oracle: {o.status}")
        except OracleCapExceeded as exc:
            payload["oracle_agrees"] = None
            lines.append(f"oracle skipped: {exc}")
    if args.recheck:
        ok, msg = recheck_arrow(view, ArrowVerdict.from_dict(json.loads(dumps(verdict.to_dict()))),
                                args.oracle_cap)
        payload["recheck"] = ok
        lines.append(f"recheck: {'ok' if ok else 'FAILED'} ({msg})")
        if not ok:
            emit(args, payload, "\n".join(lines))
            return EXIT_UNKNOWN
    emit(args, payload, "\n".join(lines))
    return EXIT_OK if verdict.holds else EXIT_FAIL


def cmd_degree(args) -> int:
    view = load_view(args)
    if args.report:
        rep = DegreeReport.from_dict(load_json(args.report))
        ok, msg = recheck_degree(view, rep, args.oracle_cap)
        emit(args, {"recheck": ok, "message": msg}, f"recheck: {'ok' if ok else 'FAILED'} ({msg})")
        return EXIT_OK if ok else EXIT_FAIL
    a = view.find_object(args.A)
    if view.finite:
        rep = degree_exact_finite(view, a, args.variant)
    else:
        rep = degree_bounds(view, a, args.variant, args.max_k, args.max_b, args.max_c)
    payload = rep.to_dict()
    lines = [rep.summary()]
    if rep.note:
        lines.append(rep.note)
    for w in rep.upper_witnesses:
        lines.append(f"  k={w['k']} B={w['B']}: C={w['C']}" + (f" via {w['w']}" if w["w"] else ""))
    code = EXIT_OK if rep.status == "exact" else EXIT_UNKNOWN
    if args.recheck:
        ok, msg = recheck_degree(view, DegreeReport.from_dict(json.loads(dumps(rep.to_dict()))),
                                 args.oracle_cap)
        payload["recheck"] = ok
        lines.append(f"recheck: {'ok' if ok else 'FAILED'} ({msg})")
        if not ok:
            code = EXIT_UNKNOWN
    emit(args, payload, "\n".join(lines))
    return code


SWEEPS = {
    "multiplicativity": verify.multiplicativity_instance,
    "aut-factor": verify.aut_factor_instance,
    "rp-implies-ap": verify.rp_ap_instance,
}

TRANSPORT_SWEEPS = {
    "cofinal": verify.cofinal_instance,
    "grothendieck": verify.grothendieck_instance,
    "slice": verify.slice_instance,
    "pullback": verify.pullback_instance,
}


def cmd_verify(args) -> int:
    suite = args.suite
    workers = verify.worker_count(args.workers)
    seeds = list(range(args.seed, args.seed + (args.sweep or 0)))
    if suite == "multiplicativity" and not args.sweep:
        c1, c2 = load_category(args.c1), load_category(args.c2)
        rep = verify.verify_multiplicativity(c1, c2, args.A1, args.A2)
    elif suite == "aut-factor" and not args.sweep:
        rep = verify.verify_aut_factor(load_view(args, finite=True), args.A)
    elif suite == "rp-implies-ap" and not args.sweep:
        rep = verify.verify_rp_implies_ap(load_view(args, finite=True))
    elif suite in SWEEPS:
        rep = verify.sweep(suite, SWEEPS[suite], seeds, workers)
    elif suite == "monotonicity":
        view = load_view(args, finite=True)
        rep = verify.verify_monotonicity(view, args.samples, random.Random(args.seed))
    else:  # transport
        if args.functor:
            rep = verify.verify_functor_transport(load_functor(args.functor), random.Random(args.seed),
                                                  args.samples)
        else:
            kinds = [args.kind] if args.kind else list(TRANSPORT_SWEEPS)
            parts = [verify.sweep(k, TRANSPORT_SWEEPS[k], seeds or [args.seed], workers) for k in kinds]
            rep = verify.merge("transport", parts, "suites")
            rep.summary = "; ".join(f"{k}: {p.summary}" for k, p in zip(kinds, parts))
    emit(args, rep.to_dict(), f"{rep.suite}: {'verified' if rep.ok else 'REFUTED'} - {rep.summary}")
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_structures(args) -> int:
    if args.kind == "rigid-surjections":
        maps = rigid_surjections(args.n, args.m)
        emit(args, {"n": args.n, "m": args.m, "count": len(maps), "maps": [list(f) for f in maps]},
             f"{len(maps)} rigid surjections {args.n} -> {args.m}\n" +
             "\n".join(" ".join(map(str, f)) for f in maps))
        return EXIT_OK
    if args.kind == "embeddings":
        a, b = load_structure(args.a), load_structure(args.b)
        embs = enumerate_embeddings(a, b)
        emit(args, {"count": len(embs), "embeddings": [list(e.images) for e in embs]},
             f"{len(embs)} embeddings\n" + "\n".join(" ".join(map(str, e.images)) for e in embs))
        return EXIT_OK
    # amalgam
    a, b1, b2 = load_structure(args.a), load_structure(args.b1), load_structure(args.b2)
    f1 = [int(x) for x in args.f1.split(",")]
    f2 = [int(x) for x in args.f2.split(",")]
    spec = build_spec(args) if args.cls else AllStructuresSpec(a.signature, args.budget)
    res = find_strong_amalgam(a, b1, b2, f1, f2, spec, args.budget)
    if res is None:
        emit(args, {"found": False, "budget": args.budget}, f"no strong amalgam within size {args.budget}")
        return EXIT_UNKNOWN
    emit(args, {"found": True, "C": res.C.to_dict(), "g1": list(res.g1), "g2": list(res.g2)},
         f"strong amalgam of size {res.C.size}: g1={list(res.g1)} g2={list(res.g2)}\n{res.C!r}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--workers", type=_positive, help="worker processes (default: RAMSEYCAT_WORKERS or 1)")
    common.add_argument("--oracle-cap", type=_positive, default=20, help="largest domain for oracle rechecks")

    parser = argparse.ArgumentParser(prog="ramseycat", description="Ramsey degrees in finite categories")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check the category laws of a file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("construct", parents=[common], help="build a derived category file")
    p.add_argument("kind", choices=["product", "pullback", "grothendieck", "slice", "opposite"])
    p.add_argument("--c1")
    p.add_argument("--c2")
    p.add_argument("--f1", help="functor file")
    p.add_argument("--f2", help="functor file")
    p.add_argument("--cat")
    p.add_argument("--hom", help="Grothendieck construction of hom(X, -)")
    p.add_argument("--const", type=_positive, default=1, help="Grothendieck construction of a constant functor")
    p.add_argument("--x", help="slice object")
    p.add_argument("--in", dest="input")
    p.set_defaults(func=cmd_construct)

    for name, func in (("arrow", cmd_arrow), ("degree", cmd_degree)):
        p = sub.add_parser(name, parents=[common])
        _add_view_args(p)
        p.add_argument("--A", required=True)
        p.add_argument("--variant", choices=["embedding", "structural"], default="embedding")
        p.add_argument("--recheck", action="store_true", help="re-validate the certificates")
        p.add_argument("--report", help="recheck an existing JSON report instead of computing")
        if name == "arrow":
            p.add_argument("--B", required=True)
            p.add_argument("--C", required=True)
            p.add_argument("--k", type=_positive, required=True)
            p.add_argument("--t", type=_positive, required=True)
            p.add_argument("--symmetry", action="store_true", help="Aut(C) symmetry reduction")
            p.add_argument("--oracle", action="store_true", help="cross-check with exhaustive enumeration")
        else:
            p.add_argument("--max-k", type=_positive, default=2)
            p.add_argument("--max-b", type=_positive, default=4)
            p.add_argument("--max-c", type=_positive, default=8)
        p.set_defaults(func=func)

    p = sub.add_parser("verify", parents=[common], help="theorem verification suites")
    p.add_argument("suite", choices=["multiplicativity", "aut-factor", "monotonicity", "transport",
                                     "rp-implies-ap"])
    _add_view_args(p)
    p.add_argument("--c1")
    p.add_argument("--c2")
    p.add_argument("--A1")
    p.add_argument("--A2")
    p.add_argument("--A")
    p.add_argument("--functor", help="functor file for transport")
    p.add_argument("--kind", choices=sorted(TRANSPORT_SWEEPS), help="transport sub-suite")
    p.add_argument("--sweep", type=_positive, help="number of generated instances")
    p.add_argument("--samples", type=_positive, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("structures", parents=[common], help="embeddings, rigid surjections, amalgams")
    p.add_argument("kind", choices=["embeddings", "rigid-surjections", "amalgam"])
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--b1")
    p.add_argument("--b2")
    p.add_argument("--f1", help="comma-separated images")
    p.add_argument("--f2", help="comma-separated images")
    p.add_argument("--n", type=_positive)
    p.add_argument("--m", type=_positive)
    p.add_argument("--budget", type=_positive, default=6)
    _add_view_args(p)
    p.set_defaults(func=cmd_structures)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, CategoryError, KeyError, ValueError) as exc:
        sys.stderr.write(f"ramseycat: error: {exc}\n")
        return EXIT_UNKNOWN


if __name__ == "__main__":
    sys.exit(main())
