"""Command-line front end: every operation with JSON in and JSON out.

Exit codes: 0 success, 1 mathematical rejection, 2 input error, 3 undecided.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import jsonschema

from . import schema
from .descent.curve import EllipticCurveFull2
from .descent.primes import DEFAULT_BOUND, find_prime
from .descent.selmer import selmer_group, twist_report
from .descent.structure import check_two_structure, is_admissible
from .errors import (DomainError, NoSuchFrobenius, SearchExhausted, StructureRejected,
                     UncomparedPlace, Undecided, UnfactoredResidue)
from .kummer.equations import KummerSpec, build_equations
from .kummer.hypotheses import check_hypotheses
from .kummer.search import search_point
from .kummer.solubility import is_els
from .qfield import as_fraction, hilbert, parse_place, squarefree_part
from .twotorsion import CohClass

log = logging.getLogger("kummerlab")

OK, REJECTED, INPUT_ERROR, UNDECIDED = 0, 1, 2, 3


class InputError(Exception):
    def __init__(self, message: str, pointer: str = ""):
        self.pointer = pointer
        super().__init__(message)


def _pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


def load_input(text: str, input_schema: dict):
    """Inline JSON, '-' for stdin, or a path to a UTF-8 JSON file."""
    if text == "-":
        raw = sys.stdin.read()
    elif text.lstrip().startswith(("{", "[")):
        raw = text
    else:
        try:
            with open(text, encoding="utf-8") as fh:
                raw = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read input: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc.msg} at line {exc.lineno} column {exc.colno}")
    try:
        jsonschema.validate(data, input_schema)
    except jsonschema.ValidationError as exc:
        raise InputError(exc.message, _pointer(exc.absolute_path)) from exc
    return data


def _field(pointer: str, fn, *args):
    try:
        return fn(*args)
    except (DomainError, ValueError, ZeroDivisionError) as exc:
        raise InputError(str(exc), pointer) from exc


def _curve(data, prefix="") -> EllipticCurveFull2:
    return _field(f"{prefix}/c", EllipticCurveFull2, tuple(data["c"]), data.get("d", 1))


def _spec(data) -> KummerSpec:
    b = [_field(f"/b/{i}", as_fraction, x) for i, x in enumerate(data["b"])]
    return _field("/a", KummerSpec, tuple(data["a"]), tuple(b), data.get("M"))


# ------------------------------------------------------------- commands

def cmd_hilbert(args):
    a = _field("/a", lambda s: as_fraction(Fraction(s)), args.a)
    b = _field("/b", lambda s: as_fraction(Fraction(s)), args.b)
    v = _field("/v", parse_place, args.v)
    if a == 0 or b == 0:
        raise InputError("hilbert symbol of 0", "/a" if a == 0 else "/b")
    return OK, {"schema": schema.tag("hilbert"), "a": schema.rational_json(a),
                "b": schema.rational_json(b), "place": schema.place_json(v),
                "symbol": hilbert(a, b, v)}


def cmd_selmer(args):
    data = load_input(args.input, schema.CURVE_INPUT)
    return OK, schema.selmer_json(selmer_group(_curve(data)))


def _scan_one(job):
    c, d = job
    return schema.twist_row(twist_report(EllipticCurveFull2(c), d))


def thread_count() -> int:
    raw = os.environ.get("KUMMERLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise InputError(f"KUMMERLAB_THREADS must be an integer, got {raw!r}")


def cmd_twist_scan(args):
    data = load_input(args.input, schema.TWIST_SCAN_INPUT)
    curve = _curve(data)
    if "twists" in data:
        twists = data["twists"]
        for i, d in enumerate(twists):
            if d == 0 or squarefree_part(d) != d:
                raise InputError(f"twist {d} is not squarefree", f"/twists/{i}")
    else:
        bound = data.get("bound", 50)
        twists = [d for d in range(-bound, bound + 1) if d != 0 and squarefree_part(d) == d]
    twists = sorted(set(twists))
    jobs = [(curve.c, d) for d in twists]
    n = min(thread_count(), len(jobs)) if jobs else 1
    if n > 1:
        with ProcessPoolExecutor(max_workers=n) as pool:
            rows = list(pool.map(_scan_one, jobs))
    else:
        rows = [_scan_one(j) for j in jobs]
    report = {"schema": schema.tag("twist-scan"), "curve": schema.curve_json(curve),
              "rows": rows}
    return (OK if all(r["ok"] for r in rows) else REJECTED), report


def cmd_mazur_rubin(args):
    data = load_input(args.input, schema.MAZUR_RUBIN_INPUT)
    curve = _curve(data)
    d = data["d"]
    if d == 0 or squarefree_part(d) != d:
        raise InputError(f"twist {d} is not squarefree", "/d")
    T = None
    if "T" in data:
        T = [_field(f"/T/{i}", parse_place, v) for i, v in enumerate(data["T"])]
    curve = EllipticCurveFull2(curve.c)
    try:
        report = twist_report(curve, d, T)
    except UncomparedPlace as exc:
        raise InputError(str(exc), "/T") from exc
    return (OK if report.ok else REJECTED), schema.mazur_rubin_json(report)


def cmd_two_structure(args):
    data = load_input(args.input, schema.TWO_STRUCTURE_INPUT)
    roots = data.get("c") or data.get("a")
    try:
        s = check_two_structure(tuple(roots), data["M"], data.get("extended", False))
    except StructureRejected as exc:
        return REJECTED, schema.rejection_json(exc)
    except DomainError as exc:
        raise InputError(str(exc), "/c" if "c" in data else "/a") from exc
    return OK, schema.structure_json(s)


def cmd_admissible(args):
    data = load_input(args.input, schema.ADMISSIBLE_INPUT)
    factors = data["curves"] if "curves" in data else [data]
    prefix = "/curves/{}" if "curves" in data else ""
    curves, structures, alphas = [], [], []
    for i, f in enumerate(factors):
        p = prefix.format(i)
        c = tuple(f["c"])
        try:
            s = check_two_structure(c, f["M"])
        except StructureRejected as exc:
            raise InputError(f"M is not a certified 2-structure: {exc}", f"{p}/M") from exc
        except DomainError as exc:
            raise InputError(str(exc), f"{p}/c") from exc
        alpha = f.get("alpha", [1, 1])
        curves.append(c)
        structures.append(s)
        alphas.append(_field(f"{p}/alpha", lambda a: CohClass(tuple(as_fraction(x) for x in a)),
                             alpha))
    res = is_admissible(curves, structures, alphas)
    return (OK if res.admissible else REJECTED), {
        "schema": schema.tag("admissible"), "admissible": res.admissible,
        "witness": res.witness}


def _parse_condition(text: str):
    try:
        c, s = text.split(":")
        return int(c), int(s)
    except ValueError:
        raise InputError(f"condition must look like CLASS:SIGN, got {text!r}", "/conditions")


def cmd_find_prime(args):
    if args.input:
        data = load_input(args.input, schema.FIND_PRIME_INPUT)
        conds = [tuple(c) for c in data["conditions"]]
        bound = data.get("bound", args.bound)
    else:
        conds = [_parse_condition(t) for t in args.cond or []]
        bound = args.bound
    for i, (c, s) in enumerate(conds):
        if c == 0:
            raise InputError("class must be nonzero", f"/conditions/{i}/0")
        if s not in (1, -1):
            raise InputError("symbol must be +1 or -1", f"/conditions/{i}/1")
    out = {"schema": schema.tag("find-prime")}
    try:
        out["prime"] = find_prime(conds, bound)
    except NoSuchFrobenius as exc:
        out.update(prime=None, error="no-such-frobenius", relation=list(exc.relation))
        return REJECTED, out
    except SearchExhausted:
        out.update(prime=None, error="search-exhausted")
        return REJECTED, out
    return OK, out


def cmd_kummer_build(args):
    spec = _spec(load_input(args.input, schema.KUMMER_INPUT))
    return OK, schema.forms_json(spec, build_equations(spec))


def cmd_kummer_check(args):
    data = load_input(args.input, schema.KUMMER_INPUT)
    if "M" not in data:
        raise InputError("hypothesis check needs M", "/M")
    report = check_hypotheses(_spec(data))
    return (OK if report.accept else REJECTED), schema.hypotheses_json(report)


def cmd_kummer_els(args):
    cert = is_els(_spec(load_input(args.input, schema.KUMMER_INPUT)))
    code = {"els": OK, "not-els": REJECTED, "undecided": UNDECIDED}[cert.status]
    return code, schema.certificate_json(cert)


def cmd_search_point(args):
    spec = _spec(load_input(args.input, schema.KUMMER_INPUT))
    if args.height < 1:
        raise InputError("height must be at least 1", "/height")
    pt = search_point(build_equations(spec), args.height)
    return OK, {"schema": schema.tag("search-point"), "height": args.height,
                "point": list(pt) if pt else None}


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kummerlab", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=["json", "tsv"], default="json")
    p.add_argument("--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    h = sub.add_parser("hilbert", help="Hilbert symbol (a, b)_v")
    h.add_argument("-a", required=True)
    h.add_argument("-b", required=True)
    h.add_argument("-v", required=True, help="prime or 'inf'")
    h.set_defaults(func=cmd_hilbert)

    def with_input(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("input", help="inline JSON, a file path, or '-' for stdin")
        sp.set_defaults(func=func)
        return sp

    with_input("selmer", cmd_selmer, "2-Selmer group of a twisted curve")
    with_input("twist-scan", cmd_twist_scan, "Mazur-Rubin summaries over many twists")
    with_input("mazur-rubin", cmd_mazur_rubin, "full twist comparison for one d")
    with_input("two-structure", cmd_two_structure, "certify a 2-structure")
    with_input("admissible", cmd_admissible, "admissibility of a class over a 2-structure")
    fp = sub.add_parser("find-prime", help="least prime with prescribed Legendre symbols")
    fp.add_argument("input", nargs="?", help="JSON with 'conditions' and optional 'bound'")
    fp.add_argument("--cond", action="append", help="CLASS:SIGN, repeatable")
    fp.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    fp.set_defaults(func=cmd_find_prime)
    with_input("kummer-build", cmd_kummer_build, "the three quadrics of the surface")
    with_input("kummer-check", cmd_kummer_check, "itemized hypothesis check")
    with_input("kummer-els", cmd_kummer_els, "everywhere-local solubility certificate")
    sp = with_input("search-point", cmd_search_point, "height-bounded rational point search")
    sp.add_argument("--height", type=int, default=10)
    return p


def _tsv(report: dict) -> str:
    if "rows" in report:
        cols = ["d", "dim_sel", "dim_sel_twist", "r", "dim_V", "dim_V_twist", "gap", "ok"]
        lines = ["\t".join(cols)]
        lines += ["\t".join(str(row[c]).lower() if isinstance(row[c], bool) else str(row[c])
                            for c in cols) for row in report["rows"]]
        return "\n".join(lines) + "\n"
    scalars = [(k, v) for k, v in report.items() if isinstance(v, (int, str, bool)) or v is None]
    return "".join(f"{k}\t{json.dumps(v)}\n" for k, v in scalars)


def emit(report: dict, fmt: str, stream) -> None:
    if fmt == "tsv":
        stream.write(_tsv(report))
    else:
        stream.write(json.dumps(report, indent=2) + "\n")


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(name)s: %(message)s")
    try:
        code, report = args.func(args)
    except InputError as exc:
        code, report = INPUT_ERROR, {"schema": schema.tag("error"), "error": str(exc),
                                     "pointer": exc.pointer}
    except Undecided as exc:
        code, report = UNDECIDED, {"schema": schema.tag("error"), "error": str(exc),
                                   "place": schema.place_json(exc.place)}
    except UnfactoredResidue as exc:
        code, report = UNDECIDED, {"schema": schema.tag("error"), "error": str(exc)}
    log.info("exit code %d", code)
    emit(report, args.format, stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
