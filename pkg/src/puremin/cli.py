"""Command-line front end: ``puremin VERB [options]``.

Exit codes: 0 success or passing suite, 1 failing suite or refused
example, 2 invalid input, 3 unknown or unsupported request.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from .complexes import ChainComplex, homology, validate_complex
from .errors import Unsupported
from .harness.gallery import NAMES as EXAMPLE_NAMES
from .harness.gallery import RefusedExample, gallery
from .harness.suites import SUITES, run_suite
from .minimality import diagnose, dimension, reduce
from .modules import FPModule
from .serialize import InvalidInput, dumps, load_complex, load_module_or_complex

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_UNSUPPORTED = 0, 1, 2, 3


class UsageError(Exception):
    """Bad flags or an unknown name; reported with exit code 3."""


def _seed(text: str) -> int:
    try:
        v = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be a decimal integer, got {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must lie in [0, 2**64)")
    return v


def _positive(text: str) -> int:
    try:
        v = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def _num(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    return x


def _cf_json(cf):
    return {"divisors": [_num(d) for d in cf.divisors], "free_rank": cf.free_rank}


def _out(args, obj, human: str):
    print(dumps(obj) if args.json else human)


def _load_valid(path: str) -> ChainComplex:
    C = load_complex(path)
    errors = validate_complex(C)
    if errors:
        raise InvalidInput("$.differentials", None, "; ".join(errors), path)
    return C


def _write(path: str, obj):
    with open(path, "w") as fh:
        fh.write(dumps(obj) + "\n")


# --- verbs -------------------------------------------------------------------------


def cmd_validate(args) -> int:
    C = _load_valid(args.input)
    obj = {"valid": True, "ring": C.ring.to_json(), "shape": C.shape.to_json(),
           "ranks": {str(i): C.rank(i) for i in C.degrees()}}
    _out(args, obj, f"valid: {C!r}")
    return EXIT_OK


def cmd_homology(args) -> int:
    C = _load_valid(args.input)
    degrees = [args.degree] if args.degree is not None else list(C.degrees())
    forms = {i: homology(C, i).canonical_form for i in degrees}
    obj = {"homology": {str(i): _cf_json(cf) for i, cf in forms.items()}}
    _out(args, obj, "\n".join(f"H_{i} = {cf}" for i, cf in forms.items()))
    return EXIT_OK


def cmd_diagnose(args) -> int:
    C = _load_valid(args.input)
    rep = diagnose(C, budget=args.budget, seed=args.seed)
    flags = rep.flags()
    lines = [f"{k} = {str(v).lower() if isinstance(v, bool) else v}" for k, v in flags.items()]
    if rep.minimal.witness is not None:
        sig = ", ".join(f"{k}: {m.data}" for k, m in sorted(rep.minimal.witness.items()))
        lines.append(f"minimality witness: sigma = {{{sig}}}, 1 + d sigma + sigma d not invertible "
                     f"in degree {rep.minimal.degree}")
    lines += ["", "decision path:"] + [f"  {n}" for n in rep.notes]
    _out(args, rep.to_json(), "\n".join(lines))
    return EXIT_OK


def cmd_reduce(args) -> int:
    C = _load_valid(args.input)
    tr = reduce(C)
    errors = tr.verify()
    if errors:
        raise AssertionError("reduction failed its own verification: " + "; ".join(errors))
    if args.trace:
        _write(args.trace, tr.to_json())
    if args.emit:
        _write(args.emit, tr.reduced.to_json())
    obj = {"moves": len(tr.moves), "reduced": tr.reduced.to_json(), "split_part": tr.split_part.to_json()}
    human = [f"moves: {len(tr.moves)}", f"reduced: {tr.reduced!r}", f"split part: {tr.split_part!r}"]
    if tr.reduced.is_zero():
        human.append("reduced complex is zero (the input is contractible)")
    if args.trace:
        human.append(f"trace written to {args.trace}")
    _out(args, obj, "\n".join(human))
    return EXIT_OK


def cmd_dimension(args) -> int:
    X = load_module_or_complex(args.input)
    if isinstance(X, ChainComplex):
        errors = validate_complex(X)
        if errors:
            raise InvalidInput("$.differentials", None, "; ".join(errors), args.input)
    res = dimension(X, kind=args.kind, cutoff=args.cutoff)
    obj = {"kind": args.kind, "cutoff": args.cutoff, "value": res.value, "notes": list(res.notes)}
    what = "module" if isinstance(X, FPModule) else "complex"
    human = [f"{args.kind} of {what} = {res.value}"] + [f"  {n}" for n in res.notes]
    _out(args, obj, "\n".join(human))
    return EXIT_OK


def _emit_counterexamples(report, directory: str):
    os.makedirs(directory, exist_ok=True)
    written = []
    for kind, entries in (("failure", report.failures), ("expected", report.expected_counterexamples)):
        for e in entries:
            for key, obj in sorted((e.get("objects") or {}).items()):
                if isinstance(obj, dict) and "complex" in obj:
                    path = os.path.join(directory, f"{report.suite}-{kind}-case{e['case']}-{key}.json")
                    _write(path, obj["complex"])
                    written.append(path)
    return written


def cmd_harness(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    for n in names:
        if n not in SUITES:
            raise UsageError(f"unknown suite {n!r}; known: all, {', '.join(SUITES)}")
    reports = [run_suite(n, cases=args.cases, seed=args.seed, jobs=args.jobs) for n in names]
    if args.emit_counterexamples:
        for r in reports:
            _emit_counterexamples(r, args.emit_counterexamples)
    ok = all(r.passed for r in reports)
    if args.json:
        print(dumps({"passed": ok, "reports": [r.to_json() for r in reports]}))
    else:
        for r in reports:
            print(r.summary())
            for f in r.failures[:3]:
                print(f"    case {f['case']} (seed {f['seed']}): {'; '.join(f['violations'])}")
            for e in r.errors[:3]:
                print(f"    case {e['case']} (seed {e['seed']}): error {e['error']}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_example(args) -> int:
    if args.name not in EXAMPLE_NAMES:
        raise UsageError(f"unknown example {args.name!r}; known: {', '.join(EXAMPLE_NAMES)}")
    try:
        C = gallery(args.name)
    except RefusedExample as exc:
        _out(args, {"example": args.name, "refused": True, "reason": str(exc)}, f"{args.name}: refused\n{exc}")
        return EXIT_FAIL
    if args.emit:
        _write(args.emit, C.to_json())
    _out(args, C.to_json(), f"{args.name}: {C!r}" + (f"\nwritten to {args.emit}" if args.emit else ""))
    return EXIT_OK


# --- parser ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="puremin", description="Purity and minimality of chain complexes over computable rings.")
    p.add_argument("--json", action="store_true", help="print stable JSON instead of text")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def verb(name, fn, help, input=True):
        s = sub.add_parser(name, help=help)
        s.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="print stable JSON instead of text")
        if input:
            s.add_argument("input", help="complex JSON file")
        s.set_defaults(fn=fn)
        return s

    verb("validate", cmd_validate, "check a complex file (schema and d o d = 0)")
    s = verb("homology", cmd_homology, "homology canonical forms per degree")
    s.add_argument("--degree", type=int)
    s = verb("diagnose", cmd_diagnose, "acyclicity, contractibility, purity and minimality flags")
    s.add_argument("--budget", type=_positive, default=20000)
    s.add_argument("--seed", type=_seed, default=0)
    s = verb("reduce", cmd_reduce, "split off disks; the remainder is pure-minimal")
    s.add_argument("--trace", metavar="PATH", help="write the reduction trace JSON")
    s.add_argument("--emit", metavar="PATH", help="write the reduced complex JSON")
    s = verb("dimension", cmd_dimension, "projective or flat dimension of a module or complex file")
    s.add_argument("--kind", choices=("pd", "fd"), default="pd")
    s.add_argument("--cutoff", type=_positive, default=8)
    s = verb("harness", cmd_harness, "run property suites", input=False)
    s.add_argument("--suite", default="all", help="suite name or 'all'")
    s.add_argument("--seed", type=_seed, default=0)
    s.add_argument("--cases", type=_positive)
    s.add_argument("--jobs", type=_positive, default=1)
    s.add_argument("--emit-counterexamples", metavar="DIR", help="write counterexample complexes as JSON files")
    s = verb("example", cmd_example, "built-in example complexes", input=False)
    s.add_argument("name")
    s.add_argument("--emit", metavar="PATH", help="write the complex JSON")
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"puremin: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    try:
        return args.fn(args)
    except InvalidInput as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (UsageError, Unsupported) as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
