"""Command-line entry point.

Every invocation prints exactly one JSON record on stdout; notes go to
stderr.  Exit codes: 0 ok, 1 usage, 2 input, 3 evaluation.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field as dc_field

from . import duality, expr, poly, rowfinite
from . import series as S
from .field import (
    Q,
    DivisionByZero,
    FieldError,
    descriptor_for,
    field_by_name,
    format_value,
)
from .monoid import IndexSpace, IndexSpaceError

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_EVAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class EvaluationError(Exception):
    pass


@dataclass
class CommandResult:
    status: str
    payload: dict
    diagnostics: list = dc_field(default_factory=list)
    exit_code: int = EXIT_OK
    command: str | None = None

    def to_json(self) -> str:
        record = {"status": self.status, "command": self.command, "payload": self.payload}
        return json.dumps(record, sort_keys=True, ensure_ascii=False)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --- argument helpers ---------------------------------------------------------------


def _horizon(text: str) -> tuple[int, int | None]:
    try:
        if "x" in text:
            a, b = text.split("x")
            n, c = int(a), int(b)
        else:
            n, c = int(text), None
    except ValueError:
        raise UsageError(f"bad horizon {text!r}; expected N or NxC") from None
    if n < 1 or (c is not None and c < 1):
        raise UsageError("horizons must be at least 1")
    return n, c


def _alphabet(text: str) -> tuple[str, ...]:
    return tuple(text.split(",")) if "," in text else tuple(text)


def _space(args) -> IndexSpace:
    if args.space == "naturals":
        return IndexSpace.naturals()
    try:
        return IndexSpace.free(_alphabet(args.alphabet))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _field(args, default=Q):
    if args.field is None:
        return default
    try:
        return field_by_name(args.field)
    except FieldError as exc:
        raise UsageError(str(exc)) from None


def _descriptor(args, field):
    topo = args.topology
    if topo == "krull":
        raise UsageError("krull is a series topology; only 'converge' accepts it")
    try:
        return descriptor_for(field, topo)
    except FieldError as exc:
        raise UsageError(str(exc)) from None


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_poly(path: str, space: IndexSpace) -> poly.Polynomial:
    text = _read(path)
    try:
        return poly.loads(text, space)
    except (ValueError, FieldError, IndexSpaceError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_matrix(path: str) -> rowfinite.RowFiniteMatrix:
    text = _read(path)
    try:
        return rowfinite.loads(text)
    except (ValueError, FieldError, IndexSpaceError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _series(text: str, space: IndexSpace, field) -> S.Series:
    try:
        tree = expr.parse(text, space.alphabet, field)
    except expr.ExprError as exc:
        raise InputError(f"series expression: {exc}") from None
    return expr.evaluate(tree, space, field)


def _index(text: str, space: IndexSpace):
    try:
        return space.parse_index(text)
    except IndexSpaceError as exc:
        raise InputError(str(exc)) from None


def _coefficients(f: S.Series, count: int) -> list:
    return [
        {"index": f.space.format_index(x), "coeff": format_value(f.coeff(x))}
        for x in f.space.enumerate(count)
    ]


def _nonzero_coefficients(f: S.Series, count: int) -> list:
    return [
        {"index": f.space.format_index(x), "coeff": format_value(v)}
        for x in f.space.enumerate(count)
        if (v := f.coeff(x))
    ]


def _functional(spec: str, space: IndexSpace, field):
    if spec.startswith("pair:"):
        p = _load_poly(spec[len("pair:") :], space)
        return duality.phi(p), p.field
    if spec == "ones-on-diracs":
        return duality.ones_on_diracs(space, field), field
    if spec.startswith("projection:"):
        x = _index(spec[len("projection:") :], space)
        return duality.projection(space, field, x), field
    raise UsageError(f"unknown functional {spec!r}")


def _verdict_record(v: S.Verdict) -> dict:
    return {"status": str(v.status), "witness": v.witness}


# --- commands ----------------------------------------------------------------------


def cmd_pair(args, notes):
    space = _space(args)
    p = _load_poly(args.poly, space)
    if args.field is not None and _field(args) is not p.field:
        raise InputError("--field disagrees with the polynomial file")
    f = _series(args.series, space, p.field)
    return {"value": format_value(poly.pair(p, f))}


def cmd_coeff(args, notes):
    space = _space(args)
    field = _field(args)
    f = _series(args.series, space, field)
    x = _index(args.index, space)
    return {"index": space.format_index(x), "value": format_value(f.coeff(x))}


def cmd_star_check(args, notes):
    space = _space(args)
    field = _field(args)
    f = _series(args.series, space, field)
    fs = S.star(f)
    one = S.one(space, field)
    lhs = S.cauchy_product(S.lin(-field.one, f, one), fs)
    fixed = S.lin(field.one, S.cauchy_product(f, fs), one)
    mismatches = []
    checked = 0
    for w in space.words_up_to(args.degree):
        checked += 1
        if lhs.coeff(w) != one.coeff(w) or fs.coeff(w) != fixed.coeff(w):
            mismatches.append(space.format_index(w))
    notes.append(f"checked {checked} words up to length {args.degree}")
    return {"holds": not mismatches, "degree": args.degree, "words_checked": checked,
            "mismatches": mismatches[:20]}


def cmd_apply(args, notes):
    m = _load_matrix(args.matrix)
    f = _series(args.series, m.source, m.field)
    _, c = _horizon(args.horizon)
    count = c if c is not None else _horizon(args.horizon)[0]
    return {"coefficients": _coefficients(rowfinite.apply(m, f), count)}


def cmd_compose(args, notes):
    left = _load_matrix(args.left)
    right = _load_matrix(args.right)
    return {"matrix": rowfinite.to_record(rowfinite.compose(left, right))}


def cmd_extract_matrix(args, notes):
    field = _field(args)
    hy, hx = _horizon(args.horizon)
    hx = hx if hx is not None else hy
    spec = args.operator
    if spec.startswith("matrix:"):
        m = _load_matrix(spec[len("matrix:") :])
        source, target, field = m.source, m.target, m.field
        op = lambda f: rowfinite.apply(m, f)  # noqa: E731
    elif spec == "identity":
        source = target = _space(args)
        op = lambda f: f  # noqa: E731
    elif spec.startswith("shift:"):
        try:
            k = int(spec[len("shift:") :])
        except ValueError:
            raise UsageError(f"bad shift {spec!r}") from None
        m = rowfinite.shift(k, field)
        source, target = m.source, m.target
        op = lambda f: rowfinite.apply(m, f)  # noqa: E731
    else:
        raise UsageError(f"unknown operator {spec!r}")
    mat, reports = rowfinite.extract_matrix(op, source, target, field, hy, hx)
    rows = [
        {"y": target.format_index(y), "exhausted": r.exhausted, "entries": len(r.detected_support)}
        for y, r in reports.items()
    ]
    return {"matrix": rowfinite.to_record(mat), "rows": rows}


def cmd_dual_probe(args, notes):
    space = _space(args)
    field = _field(args)
    ell, field = _functional(args.functional, space, field)
    h, _ = _horizon(args.horizon)
    p, report = duality.extract_poly(ell, h)
    if not report.exhausted:
        notes.append("support still growing at the probe horizon: no continuity signature")
    return {"polynomial": poly.to_record(p), "report": report.to_record(space)}


def cmd_extend(args, notes):
    space = _space(args)
    field = _field(args)
    ell, field = _functional(args.functional, space, field)
    d = _descriptor(args, field)
    n, c = _horizon(args.horizon)
    f = _series(args.series, space, field)
    value, verdict = duality.complete_extend(ell, f, c if c is not None else n, d)
    return {"value": format_value(value), "verdict": _verdict_record(verdict)}


def _family(spec: str, args, field):
    if spec.startswith("alphabet:"):
        try:
            k = int(spec[len("alphabet:") :])
        except ValueError:
            raise UsageError(f"bad family {spec!r}") from None
        if k < 0:
            raise UsageError("alphabet size must be non-negative")
        space, members = S.alphabet_family(k, field)
        return space, members
    if spec.startswith("dirac-decomposition:"):
        space = _space(args)
        f = _series(spec[len("dirac-decomposition:") :], space, field)
        return space, S.dirac_decomposition(f)
    raise UsageError(f"unknown family {spec!r}")


def cmd_converge(args, notes):
    field = _field(args)
    n, c = _horizon(args.horizon)
    c = c if c is not None else S.DEFAULT_COORDINATE_HORIZON
    if args.topology == "krull":
        topo = S.Topology.krull()
    else:
        topo = S.Topology.product(_descriptor(args, field))
    space, family = _family(args.family, args, field)
    verdict, total = S.sum_family(family, topo, n, c, space=space, field=field)
    notes.append(f"{verdict.status} under {topo} at horizon {n}x{c}")
    return {
        "topology": str(topo),
        "verdict": _verdict_record(verdict),
        "sum": _nonzero_coefficients(total, c),
    }


def cmd_modulus(args, notes):
    space = _space(args)
    p = _load_poly(args.poly, space)
    d = _descriptor(args, p.field)
    try:
        m = duality.continuity_modulus(p, d)
    except ValueError as exc:
        raise EvaluationError(str(exc)) from None
    out = {
        "descriptor": str(d),
        "coordinates": [space.format_index(x) for x in m.coordinates],
    }
    if m.bound is not None:
        out["bound"] = m.bound
    return out


COMMANDS = {
    "pair": cmd_pair,
    "coeff": cmd_coeff,
    "star-check": cmd_star_check,
    "apply": cmd_apply,
    "compose": cmd_compose,
    "extract-matrix": cmd_extract_matrix,
    "dual-probe": cmd_dual_probe,
    "extend": cmd_extend,
    "converge": cmd_converge,
    "modulus": cmd_modulus,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--field", default=None, help="Q, F<p> or R64 (default Q)")
    common.add_argument(
        "--topology",
        default=None,
        help="discrete | arch:<eps> | padic:<p>:<k> | indiscrete | krull",
    )
    common.add_argument("--alphabet", default="ab", help="letters, e.g. ab or x0,x1")
    common.add_argument("--space", choices=("words", "naturals"), default="words")
    common.add_argument("--horizon", default=f"{S.DEFAULT_FAMILY_HORIZON}x{S.DEFAULT_COORDINATE_HORIZON}",
                        help="N or NxC (default 256x128)")
    common.add_argument("--degree", type=int, default=S.DEFAULT_DEGREE, help="word length bound D")

    parser = _Parser(prog="fpsdual", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command")
    sub.required = True

    p = sub.add_parser("pair", parents=[common])
    p.add_argument("--poly", required=True)
    p.add_argument("--series", required=True)

    p = sub.add_parser("coeff", parents=[common])
    p.add_argument("--series", required=True)
    p.add_argument("--index", required=True)

    p = sub.add_parser("star-check", parents=[common])
    p.add_argument("--series", required=True)

    p = sub.add_parser("apply", parents=[common])
    p.add_argument("--matrix", required=True)
    p.add_argument("--series", required=True)

    p = sub.add_parser("compose", parents=[common])
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)

    p = sub.add_parser("extract-matrix", parents=[common])
    p.add_argument("--operator", required=True, help="matrix:<file> | identity | shift:<k>")

    p = sub.add_parser("dual-probe", parents=[common])
    p.add_argument("--functional", required=True,
                   help="pair:<file> | ones-on-diracs | projection:<x>")

    p = sub.add_parser("extend", parents=[common])
    p.add_argument("--functional", required=True)
    p.add_argument("--series", required=True)

    p = sub.add_parser("converge", parents=[common])
    p.add_argument("--family", required=True,
                   help="alphabet:<n> | dirac-decomposition:<expr>")

    p = sub.add_parser("modulus", parents=[common])
    p.add_argument("--poly", required=True)
    return parser


def run(argv=None) -> CommandResult:
    notes: list[str] = []
    command = None
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        if args.degree < 0:
            raise UsageError("--degree must be non-negative")
        payload = COMMANDS[command](args, notes)
        return CommandResult("ok", payload, notes, EXIT_OK, command)
    except UsageError as exc:
        code, kind, msg = EXIT_USAGE, "usage", str(exc)
    except InputError as exc:
        code, kind, msg = EXIT_INPUT, "input", str(exc)
    except (EvaluationError, S.StarUndefined, S.UnsupportedSpace, DivisionByZero,
            FieldError, IndexSpaceError, ValueError, ArithmeticError) as exc:
        code, kind, msg = EXIT_EVAL, "evaluation", f"{type(exc).__name__}: {exc}"
    notes.append(msg)
    return CommandResult("error", {"kind": kind, "message": msg}, notes, code, command)


def main(argv=None) -> int:
    result = run(argv)
    for note in result.diagnostics:
        print(note, file=sys.stderr)
    print(result.to_json())
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
