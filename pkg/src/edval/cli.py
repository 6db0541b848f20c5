"""Command-line front end.

Exit codes: 0 success, 1 a sweep criterion failed, 2 parse error,
3 contract violation, 4 an internal consistency assertion fired.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import acceptance
from .claims import ClaimError, ClaimFalsified, claim_subset
from .edcore import ContractError, EdReport, GapViolation, brauer_i0, brauer_matrix, classify, common_level, ed_report, witness
from .extalg import MultivectorError
from .pzcoeff import CoefficientError
from .symcalc import (
    ParseError,
    SymbolClass,
    SymbolError,
    fixture_classes,
    gen_block_brauer,
    gen_chain,
    gen_congruence,
    gen_generic,
    parse_class,
    render_class,
    wedge_nu,
)
from .zlattice import LatticeError, matrix_to_json

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_CONTRACT = 3
EXIT_INTERNAL = 4

CONTRACT_ERRORS = (ContractError, SymbolError, MultivectorError, LatticeError, ClaimError, CoefficientError)


def max_rank() -> int:
    return int(os.environ.get("EDVAL_MAX_RANK", "12"))


def _emit(obj, as_json: bool, text: str) -> None:
    if as_json:
        print(json.dumps(obj, separators=(", ", ": ")))
    else:
        print(text)


def load_class(args) -> SymbolClass:
    if (args.cls is None) == (args.file is None):
        raise ContractError("give exactly one of an inline class or --file")
    text = Path(args.file).read_text() if args.file else args.cls
    c = parse_class(text, rank=args.rank)
    if c.rank > max_rank():
        raise ContractError(f"rank {c.rank} exceeds EDVAL_MAX_RANK={max_rank()}")
    return c


def _factors_text(factors) -> str:
    return " + ".join(f"Z/{k}" for k in factors) or "0"


def format_report(c: SymbolClass, rep: EdReport) -> str:
    lines = [
        f"class:          {render_class(c)}",
        f"p = {rep.p}, rank = {rep.rank}, degree = {rep.degree if rep.degree is not None else 'mixed'}",
        f"A_omega:        {_factors_text(rep.a_omega.invariant_factors)}",
        f"rho:            {rep.rho}",
    ]
    if rep.exact:
        lines.append(f"ed = rho = {rep.rho} exactly (monomial class)")
    else:
        lines.append(f"ed >= rho = {rep.rho} (lower bound)")
    lines.append(f"classification: {rep.classification.value}")
    lines.append(f"witness:        {[list(v) for v in rep.witness.basis]}")
    if rep.brauer is not None:
        lines.append(f"brauer:         divisors {list(rep.brauer.divisors)}, i0 = {rep.brauer.i0}")
    return "\n".join(lines)


def cmd_ed(args) -> int:
    c = load_class(args)
    rep = ed_report(c, henselian=args.henselian)
    _emit(rep.to_json(), args.json, format_report(c, rep))
    return EXIT_OK


def cmd_classify(args) -> int:
    c = load_class(args)
    if c.mixed:
        raise ContractError("classification requires homogeneous class")
    result = classify(wedge_nu(c))
    _emit({"classification": result.value, "degree": c.degree}, args.json, result.value)
    return EXIT_OK


def cmd_witness(args) -> int:
    c = load_class(args)
    W = witness(wedge_nu(c))
    basis = [list(v) for v in W.basis]
    _emit({"rank": W.rank, "basis": basis}, args.json, f"rank {W.rank}: {basis}")
    return EXIT_OK


def cmd_brauer(args) -> int:
    c = common_level(load_class(args))
    n = max(c.levels)
    M = brauer_matrix(c)
    b = brauer_i0(M, c.p, n)
    obj = {
        "M": matrix_to_json(M),
        "divisors": list(b.divisors),
        "i0": b.i0,
        "factors": list(b.factors),
    }
    text = "\n".join(
        ["M ="]
        + ["  " + " ".join(f"{x:3d}" for x in row) for row in M]
        + [f"elementary divisors: {list(b.divisors)}", f"i0 = {b.i0}", f"A_omega: {_factors_text(b.factors)}"]
    )
    _emit(obj, args.json, text)
    return EXIT_OK


def cmd_check_claim(args) -> int:
    js = range(args.n) if args.j is None else [args.j]
    for j in js:
        print(json.dumps(claim_subset(args.n, args.d, j).to_json()))
    return EXIT_OK


def _preset(args) -> SymbolClass:
    need = lambda *names: [getattr(args, k) for k in names]  # noqa: E731
    if args.preset == "generic":
        return gen_generic(*need("r", "d", "p", "n"))
    if args.preset == "block":
        return gen_block_brauer(*need("r", "p", "n"))
    if args.preset == "chain":
        return gen_chain(*need("r", "p"))
    if args.preset == "congruence":
        return gen_congruence(*need("nv", "d", "p"))
    return fixture_classes()[args.preset]


def cmd_gen(args) -> int:
    if args.all:
        out = Path(args.out or ".")
        out.mkdir(parents=True, exist_ok=True)
        for name, c in fixture_classes().items():
            (out / f"{name}.cls").write_text(render_class(c) + "\n")
            print(out / f"{name}.cls")
        return EXIT_OK
    if args.preset is None:
        raise ContractError("gen needs --preset or --all")
    c = _preset(args)
    text = render_class(c)
    if args.out:
        Path(args.out).write_text(text + "\n")
    if args.json:
        print(json.dumps(c.to_json()))
    else:
        print(text)
    return EXIT_OK


def cmd_sweep(args) -> int:
    only = [int(x) for x in args.only.split(",")] if args.only else None
    results = acceptance.run_all(seed=args.seed, only=only)
    for r in results:
        if args.json:
            print(json.dumps({"criterion": r.number, "name": r.name, "passed": r.passed, "detail": r.detail}))
        else:
            print(r.line())
    failed = [r.number for r in results if not r.passed]
    if not args.json:
        print(f"{len(results) - len(failed)}/{len(results)} criteria passed" + (f"; failed {failed}" if failed else ""))
    return EXIT_FAILED if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="edval", description="Essential dimension of symbol classes over valued fields.")
    sub = parser.add_subparsers(dest="command", required=True)

    def class_cmd(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("cls", nargs="?", help='class text, e.g. "(t0,t1)_2 + (t2,t3)_2"')
        sp.add_argument("--file", help="read the class from a file")
        sp.add_argument("--rank", type=int, help="embed into Z^rank")
        sp.add_argument("--json", action="store_true")
        sp.set_defaults(func=func)
        return sp

    ed = class_cmd("ed", cmd_ed, "full report")
    ed.add_argument("--henselian", action="store_true", help="treat the base as strictly Henselian (units are harmless)")
    class_cmd("classify", cmd_classify, "Zero / Symbol / NonSymbol")
    class_cmd("witness", cmd_witness, "minimal subgroup the class descends to")
    class_cmd("brauer", cmd_brauer, "degree-2 elementary divisor route")

    cc = sub.add_parser("check-claim", help="subset witnesses for the residue claim")
    cc.add_argument("--n", type=int, required=True)
    cc.add_argument("--d", type=int, required=True)
    cc.add_argument("--j", type=int)
    cc.set_defaults(func=cmd_check_claim)

    gen = sub.add_parser("gen", help="generate example classes")
    gen.add_argument("--preset", choices=["generic", "block", "chain", "congruence", "t1", "t2"])
    gen.add_argument("--all", action="store_true", help="write every fixture into --out (a directory)")
    for name, default in (("r", 1), ("d", 2), ("p", 2), ("n", 1), ("nv", 5)):
        gen.add_argument(f"--{name}", type=int, default=default)
    gen.add_argument("--out")
    gen.add_argument("--json", action="store_true")
    gen.set_defaults(func=cmd_gen)

    sw = sub.add_parser("sweep", help="run the acceptance sweeps")
    sw.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)
    sw.add_argument("--only", help="comma-separated criterion numbers")
    sw.add_argument("--json", action="store_true")
    sw.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (GapViolation, ClaimFalsified) as exc:
        print(f"internal assertion: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except CONTRACT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
