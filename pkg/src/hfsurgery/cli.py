"""Command-line interface.

Exit codes: 0 success, 1 mathematical failure, 2 usage or parse failure.
Inputs are knot-system JSON files or ``@name`` for a builtin dataset.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import gcd
from pathlib import Path
from typing import Any, Sequence

from . import knotsys, lensmodel, surgery
from .chain import InvalidComplexError, ungraded_homology
from .knotsys import ParseError, ShapeError, ValidationFailed

EXIT_OK, EXIT_MATH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load_input(source: str) -> knotsys.KnotSystem:
    if source.startswith("@"):
        try:
            return knotsys.builtin(source[1:])
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    path = Path(source)
    if not path.is_file():
        raise UsageError(f"no such file: {source}")
    return knotsys.load(path)


def _dump_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _write_json(payload: Any, dest: str | None) -> None:
    if dest is None:
        return
    text = _dump_json(payload)
    if dest == "-":
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text, encoding="utf-8")


def _slope(p: int, q: int) -> surgery.SurgerySlope:
    try:
        return surgery.SurgerySlope(p, q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_validate(args) -> int:
    ks = _load_input(args.input)
    report = knotsys.validate(ks)
    for c in report.checks:
        line = f"{'ok  ' if c.passed else 'FAIL'} {c.name}"
        if c.witness is not None:
            line += f"  witness={json.dumps(c.witness)}"
        print(line)
    print(f"{ks.name}: {'valid' if report.passed else 'INVALID'}")
    _write_json(report.to_dict(), args.json)
    return EXIT_OK if report.passed else EXIT_MATH


def _print_report(r: surgery.HomologyReport) -> None:
    print(f"{r.input} p={r.p} q={r.q} method={r.method}")
    print(f"  space dims    {r.to_dict()['space_dims']}")
    print(f"  homology dims {r.to_dict()['homology_dims']}")
    print(f"  ranks {r.ranks}  total {r.total}  ({r.elapsed * 1000:.1f} ms)")
    for note in r.notes:
        print(f"  note: {note}")


def cmd_surgery(args) -> int:
    ks = _load_input(args.input)
    slope = _slope(args.p, args.q)
    if args.method in ("zigzag", "splice") and slope.q != 1:
        raise UsageError(f"method {args.method} needs q = 1")
    if args.method in ("rational", "zigzag") and not ks.is_homology_level():
        raise UsageError(f"method {args.method} needs a knot system with zero differentials")
    report = surgery.surgery_report(ks, slope, args.method)
    _print_report(report)
    _write_json(report.to_dict(), args.json)
    return EXIT_OK


def cmd_sweep(args) -> int:
    ks = _load_input(args.input)
    if args.pmax < 1 or args.qmax < 1:
        raise UsageError("pmax and qmax must be positive")
    if args.method != "rational" and args.qmax != 1:
        raise UsageError(f"method {args.method} sweeps need --qmax 1")
    rows = []
    print(f"{'p':>4} {'q':>4} {'total':>6}")
    for p in range(1, args.pmax + 1):
        for q in range(1, args.qmax + 1):
            if gcd(p, q) != 1:
                continue
            r = surgery.surgery_report(ks, surgery.SurgerySlope(p, q), args.method)
            rows.append(r.to_dict())
            print(f"{p:>4} {q:>4} {r.total:>6}")
    _write_json(rows, args.json)
    return EXIT_OK


def cmd_model(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be positive")
    model = lensmodel.build_model(args.n)
    if args.dump:
        sys.stdout.write(_dump_json(lensmodel.dump(model)))
        return EXIT_OK
    b = model.bordered
    print(f"model n={args.n}")
    print(f"  L: {b.L.dim} generators: {' '.join(b.L.labels)}")
    print(f"  M: {b.M.dim} generators: {' '.join(b.M.labels)}")
    print(f"  homology: L {ungraded_homology(b.L)}, M {ungraded_homology(b.M)}")
    problems = b.failures()
    print(f"  bordered relations: {'ok' if not problems else problems}")
    return EXIT_OK if not problems else EXIT_MATH


def _parse_dims(text: str) -> tuple[int, int, int]:
    try:
        dims = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"--dims expects A,B,C, got {text!r}") from None
    if len(dims) != 3:
        raise UsageError(f"--dims expects three integers, got {text!r}")
    return dims


def cmd_random(args) -> int:
    dims = _parse_dims(args.dims)
    try:
        ks = knotsys.random_valid(args.seed, dims)
    except ValueError as exc:
        raise UsageError(f"infeasible dims {dims}: {exc}") from None
    text = knotsys.dumps(ks)
    if args.out is None or args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {ks.name} to {args.out}")
    return EXIT_OK


def cmd_compare(args) -> int:
    ks = _load_input(args.input)
    if args.nmax < 1:
        raise UsageError("--nmax must be positive")
    if not ks.is_homology_level():
        raise UsageError("compare needs a knot system with zero differentials")
    rows = []
    print(f"{'n':>4} {'rational':>9} {'splice':>7} {'diff':>5}")
    for n in range(1, args.nmax + 1):
        c = surgery.compare_methods(ks, n)
        rows.append(c.to_dict(traces=args.traces))
        print(f"{n:>4} {c.rational_total:>9} {c.splice_total:>7} {c.difference:>5}")
    _write_json({"input": ks.name, "rows": rows}, args.json)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hfsurgery", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check every hypothesis on a knot system")
    p.add_argument("input", help="knot-system file or @builtin")
    p.add_argument("--json", metavar="PATH", help="write the report as JSON ('-' for stdout)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("surgery", help="homology of p/q surgery")
    p.add_argument("input")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--method", choices=["rational", "zigzag", "splice"], default="rational")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_surgery)

    p = sub.add_parser("sweep", help="all coprime slopes up to pmax, qmax")
    p.add_argument("input")
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--qmax", type=int, required=True)
    p.add_argument("--method", choices=["rational", "zigzag", "splice"], default="rational")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("model", help="inspect the solid-torus model of size n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dump", action="store_true", help="print generators and matrices as JSON")
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("random", help="generate a random valid knot system")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--dims", required=True, help="h_inf,h_one,h_zero")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("compare", help="rational formula vs splice with the model, n = 1..nmax")
    p.add_argument("input")
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--traces", action="store_true", help="include reduction traces in the JSON")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationFailed, InvalidComplexError) as exc:
        witness = getattr(exc, "witness", None)
        print(f"error: {exc}" + (f" (witness {witness})" if witness else ""), file=sys.stderr)
        return EXIT_MATH
    except (UsageError, ParseError, ShapeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
