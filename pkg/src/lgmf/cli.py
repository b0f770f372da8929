"""Command-line front end: ``lgmf COMMAND [flags]``.

Every command prints one JSON report on standard output.  Exit codes:
0 computed, 1 property violation (``verify``), 2 usage or input
error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import __version__
from .expr import ParseError, UnknownVariableError, format_rational
from .ideal import BudgetExhausted
from .localize import (LocusError, NonzeroFiberPotential, RationalPoint, fiber_cohomology,
                       fiber_ranks, in_support, parse_point, parse_prime, trim_at_point)
from .mfcore import FactorizationError, ModelMismatch, MorphismError, PotentialMismatch, tensor
from .modelfile import ModelFileError, format_matrix, load_model
from .singloc import (NotInSingLoc, NotOnZeroFiber, build_nonvanishing_mf, realize_support,
                      sample_singloc, witness_decomposition)
from .tensorgeom import (FiberPreconditionError, check_support_data_axioms, generator_probe,
                         nilpotence_search)
from .verify import ALIASES, SUITES, run_suite

SCHEMA_VERSION = "1"


class UsageError(Exception):
    pass


def mf_dict(F) -> dict:
    return {"n1": F.n1, "n0": F.n0, "potential": str(F.potential),
            "phi1": [[str(e) for e in r] for r in F.phi1.rows],
            "phi0": [[str(e) for e in r] for r in F.phi0.rows]}


def locus_dict(p) -> dict:
    if isinstance(p, RationalPoint):
        return {"kind": "point", "value": [format_rational(c) for c in p.coords]}
    return {"kind": "prime", "value": [str(g) for g in p.generators.nonzero_generators()]}


def _loci(args, mfile, allow_primes=True, default_probes=True):
    model = mfile.model
    loci = []
    for text in args.point or []:
        loci.append(parse_point(text).check_on(model))
    if allow_primes:
        for text in args.prime or []:
            loci.append(parse_prime(text, model.ring).check_on(model))
    elif args.prime:
        raise UsageError("this command accepts only --point")
    if not loci and default_probes:
        loci = list(mfile.points) + (list(mfile.primes) if allow_primes else [])
    if not loci:
        raise UsageError("no locus given (use --point or --prime, or declare probes)")
    return loci


def _points(args, mfile):
    return [p for p in _loci(args, mfile, allow_primes=False)]


def _one_mf(args, mfile):
    if not args.mf:
        raise UsageError("--mf NAME is required")
    return mfile.mf(args.mf[0])


def cmd_singloc(args, mfile):
    reports = sample_singloc(mfile.model, _loci(args, mfile), witness=args.witness)
    out = {"reports": [r.as_dict() for r in reports]}
    if len(reports) == 1:
        out["in_singloc"] = reports[0].in_singloc
    return out


def cmd_support(args, mfile):
    F = _one_mf(args, mfile)
    rows = []
    for p in _loci(args, mfile):
        t = trim_at_point(F, p)
        entry = {"locus": locus_dict(p), "in_support": in_support(F, p),
                 "trimmed_rank": [t.n1, t.n0]}
        entry["agree"] = entry["in_support"] == (t.total_rank > 0)
        rows.append(entry)
    out = {"mf": args.mf[0], "results": rows}
    if len(rows) == 1:
        out["in_support"] = rows[0]["in_support"]
    return out


def cmd_cohomology(args, mfile):
    F = _one_mf(args, mfile)
    rows = []
    for p in _loci(args, mfile):
        try:
            h0, h1 = fiber_cohomology(F, p)
            r1, r0 = fiber_ranks(F, p)
            rows.append({"locus": locus_dict(p), "h0": h0, "h1": h1,
                         "rank_phi1": r1, "rank_phi0": r0})
        except NonzeroFiberPotential:
            rows.append({"locus": locus_dict(p), "h0": None, "h1": None,
                         "fiber_potential_nonzero": True})
    return {"mf": args.mf[0], "results": rows}


def cmd_trim(args, mfile):
    F = _one_mf(args, mfile)
    rows = []
    for p in _loci(args, mfile):
        t = trim_at_point(F, p)
        rows.append({"locus": locus_dict(p), "n1": t.n1, "n0": t.n0,
                     "num1": [[str(e) for e in r] for r in t.num1.rows],
                     "num0": [[str(e) for e in r] for r in t.num0.rows],
                     "den1": str(t.den1), "den0": str(t.den0),
                     "pivots": [list(pv) for pv in t.pivots],
                     "relations_hold": t.check(), "entries_vanish": t.entries_vanish()})
    return {"mf": args.mf[0], "results": rows}


def cmd_tensor(args, mfile):
    if not args.mf or len(args.mf) < 2:
        raise UsageError("tensor needs two or more --mf NAME flags")
    T = mfile.mf(args.mf[0])
    for name in args.mf[1:]:
        T = tensor(T, mfile.mf(name))
    return {"factors": list(args.mf), "result": mf_dict(T), "valid": True}


def cmd_witness(args, mfile):
    rows = []
    for p in _loci(args, mfile):
        w = witness_decomposition(mfile.model, p)
        rows.append({"locus": locus_dict(p), "witness": w.as_dict(),
                     "verified": w.verify(mfile.model, p)})
    return {"results": rows}


def cmd_build_k(args, mfile):
    pts = _points(args, mfile)
    p = pts[0]
    K = build_nonvanishing_mf(mfile.model, p)
    probes = list(mfile.points) or [p]
    return {"locus": locus_dict(p), "mf": mf_dict(K),
            "support": {q.label(): in_support(K, q) for q in probes}}


def _parse_component(text: str, mfile):
    if "@" not in text:
        raise UsageError(f"component {text!r} must look like 'f1,f2@a,b,...'")
    fs, pt = text.split("@", 1)
    funcs = [mfile.model.ring.parse(f.strip()) for f in fs.split(",") if f.strip()]
    return funcs, parse_point(pt).check_on(mfile.model)


def cmd_realize(args, mfile):
    if not args.component:
        raise UsageError("realize needs at least one --component 'f1,f2@a,b,...'")
    comps = [_parse_component(c, mfile) for c in args.component]
    F = realize_support(mfile.model, comps)
    probes = list(mfile.points) + [pt for _, pt in comps]
    seen, support = set(), {}
    for q in probes:
        if q.label() not in seen:
            seen.add(q.label())
            support[q.label()] = in_support(F, q)
    return {"ranks": [F.n1, F.n0], "potential": str(F.potential), "support": support}


def cmd_nilpotence(args, mfile):
    if not args.morphism:
        raise UsageError("--morphism NAME is required")
    f = mfile.morphism(args.morphism)
    probes = _points(args, mfile)
    res = nilpotence_search(f, probes, max_n=args.max_n, degree_bound=args.degree_bound)
    out = {"morphism": args.morphism, "n": res.n if res.found else "unknown",
           "max_n": args.max_n, "degree_bound": args.degree_bound}
    if res.found:
        out["homotopy"] = {"h0": [[str(e) for e in r] for r in res.h0],
                           "h1": [[str(e) for e in r] for r in res.h1]}
    return out


def cmd_axioms(args, mfile):
    pts = _points(args, mfile)
    objects = [mfile.mf(n) for n in args.mf] if args.mf else list(mfile.factorizations.values())
    objects = [o for o in objects if o.potential == mfile.model.potential]
    if not objects:
        raise UsageError("no factorization of the model potential to test")
    rep = check_support_data_axioms(objects, pts, seed=args.seed)
    return rep.as_dict()


def cmd_generator_probe(args, mfile):
    G = _one_mf(args, mfile)
    return generator_probe(mfile.model, G, _points(args, mfile)).as_dict()


COMMANDS = {
    "singloc": cmd_singloc, "support": cmd_support, "trim": cmd_trim, "tensor": cmd_tensor,
    "cohomology": cmd_cohomology, "witness": cmd_witness, "build-k": cmd_build_k,
    "realize": cmd_realize, "nilpotence": cmd_nilpotence, "axioms": cmd_axioms,
    "generator-probe": cmd_generator_probe,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lgmf", description="Matrix factorizations and relative singular loci "
                                 "of affine Landau-Ginzburg models.")
    parser.add_argument("--version", action="version", version=f"lgmf {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def common(p, model=True):
        if model:
            p.add_argument("--model", required=True,
                           help="model file path or builtin name (cone4, fat2, fat3, nil, node)")
        p.add_argument("--point", action="append", help="rational point 'a,b,...' (repeatable)")
        p.add_argument("--prime", action="append", help="prime generators 'g1,g2,...' (repeatable)")
        p.add_argument("--mf", action="append", help="named factorization (repeatable)")
        p.add_argument("--seed", type=int, default=1)
        p.add_argument("--degree-bound", type=int, default=4)
        p.add_argument("--max-n", type=int, default=8)
        p.add_argument("--json", action="store_true",
                       help="emit JSON (the default and only format)")

    helps = {
        "singloc": "locally relative singular locus membership",
        "support": "support membership of a factorization",
        "trim": "unit-entry elimination at a locus",
        "tensor": "tensor product of named factorizations",
        "cohomology": "fiber cohomology dimensions",
        "witness": "explicit r*W = sum m_i*n_i decomposition",
        "build-k": "factorization supported at a singular point",
        "realize": "factorization with prescribed support components",
        "nilpotence": "smallest null-homotopic tensor power of a morphism",
        "axioms": "support-data axioms on the model's factorizations",
        "generator-probe": "certify that a factorization is not a tensor generator",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        common(p)
        if name == "singloc":
            p.add_argument("--witness", action="store_true", help="include witnesses")
        if name == "realize":
            p.add_argument("--component", action="append", help="'f1,f2@a,b,...' (repeatable)")
        if name == "nilpotence":
            p.add_argument("--morphism", help="named morphism from the model file")
    p = sub.add_parser("verify", help="run a self-check suite")
    p.add_argument("--suite", default="golden", choices=sorted(SUITES) + sorted(ALIASES) + ["all"])
    p.add_argument("--json", action="store_true", help="emit JSON (the default and only format)")
    return parser


def emit(report: dict, stream=None):
    stream = stream or sys.stdout
    stream.write(json.dumps(report, sort_keys=True, indent=2) + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if not args.command:
        parser.print_help(sys.stderr)
        return 2
    base = {"schema_version": SCHEMA_VERSION, "command": args.command}
    if args.command == "verify":
        checks = run_suite(args.suite)
        ok = all(c.passed for c in checks)
        emit({**base, "suite": args.suite, "passed": ok,
              "checks": [c.as_dict() for c in checks]})
        return 0 if ok else 1
    try:
        mfile = load_model(args.model)
        report = COMMANDS[args.command](args, mfile)
    except (UsageError, ModelFileError, ParseError, UnknownVariableError, LocusError,
            NotOnZeroFiber, NotInSingLoc, FactorizationError, MorphismError,
            PotentialMismatch, ModelMismatch, FiberPreconditionError, BudgetExhausted,
            KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        emit({**base, "error": {"type": type(exc).__name__, "message": msg}})
        return 2
    emit({**base, "model": args.model, **report})
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
