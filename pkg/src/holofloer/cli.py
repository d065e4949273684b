"""Command-line front end: ``holofloer VERB KNOT [options]``.

Exit status is 0 on success or a verified match, 1 when a verification
fails, and 2 for bad input (unknown knot, malformed file, bad flags).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from .alexander import (
    DEFAULT_ORDER,
    cable_alexander,
    colored_reduced,
    colored_unreduced,
    convergence_defect,
    positive_form,
)
from .colored import (
    BUILTIN_KNOTS,
    KnotData,
    build_colored_complex,
    colored_body,
    colored_euler_check,
    load_knot_file,
)
from .complexes import poincare
from .errors import HolofloerError, InvariantViolation
from .holonomy import certify, check_step_coherence, decategorify
from .weyl import (
    format_d_product,
    knot_annihilator,
    reduced_sequence,
    unreduced_annihilator,
    unreduced_sequence,
    verify_annihilation,
)

__all__ = ["main", "load_knot", "build_parser", "ORDER_ENV"]

ORDER_ENV = "HOLOFLOER_ORDER"
EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


class _InputError(HolofloerError):
    pass


def load_knot(name_or_path: str, validate: bool = True) -> KnotData:
    """A built-in knot by name, or a knot JSON file.

    Files are Euler-checked at r = 2, 3; with ``validate=False`` a mismatch
    only warns.
    """
    if name_or_path in BUILTIN_KNOTS:
        return BUILTIN_KNOTS[name_or_path]
    if Path(name_or_path).is_file():
        return load_knot_file(name_or_path, validate=True, strict=validate)
    raise _InputError(
        f"unknown knot {name_or_path!r}: not a built-in ({', '.join(BUILTIN_KNOTS)}) and not a readable file"
    )


def _default_order() -> int:
    raw = os.environ.get(ORDER_ENV)
    if raw is None:
        return DEFAULT_ORDER
    try:
        value = int(raw)
    except ValueError:
        raise _InputError(f"{ORDER_ENV}={raw!r} is not an integer") from None
    if value < 1:
        raise _InputError(f"{ORDER_ENV} must be positive, got {value}")
    return value


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("knot", nargs="?", help="built-in name (" + ", ".join(BUILTIN_KNOTS) + ") or knot JSON file")
    common.add_argument("--knot-file", help="read the knot from this JSON file")
    common.add_argument("--order", type=_positive, help=f"q-truncation order (default {DEFAULT_ORDER}, or ${ORDER_ENV})")
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--no-validate", action="store_true", help="only warn when a knot file fails the Euler check")

    parser = argparse.ArgumentParser(prog="holofloer", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("alex", parents=[common], help="Alexander polynomial or its r-coloured series")
    p.add_argument("--colored", action="store_true", help="print the r-coloured series instead")
    p.add_argument("--reduced", action="store_true", help="with --colored, the reduced polynomial")
    p.add_argument("--r", type=_positive, default=2)

    p = sub.add_parser("cable", parents=[common], help="Alexander polynomial of the (r, s)-cable")
    p.add_argument("--r", type=_positive, default=2)
    p.add_argument("--s", type=_positive, help="longitudinal winding (default r*n + 1)")
    p.add_argument("--n", type=_positive, default=1, help="twist count; s = r*n + 1 when --s is absent")

    p = sub.add_parser("annihilator", parents=[common], help="Weyl annihilator of the coloured sequence")
    p.add_argument("--unreduced", action="store_true", help="annihilate the unreduced series")
    p.add_argument("--verify", action="store_true", help="check annihilation numerically")
    p.add_argument("--r-max", type=_positive, default=12)

    p = sub.add_parser("srcfk", parents=[common], help="the r-coloured complex")
    p.add_argument("--r", type=_positive, default=2)

    p = sub.add_parser("poincare", parents=[common], help="Poincaré series of the r-coloured complex")
    p.add_argument("--r", type=_positive, default=2)

    p = sub.add_parser("euler-check", parents=[common], help="Euler characteristic against the coloured series")
    p.add_argument("--r", type=_positive, help="a single colour (default 2..r-max)")
    p.add_argument("--r-max", type=_positive, default=4)

    p = sub.add_parser("certify", parents=[common], help="holonomicity certificate and its decategorification")
    p.add_argument("--r-max", type=_positive, default=12)
    p.add_argument("--verify", action="store_true", help="also check concrete cones at r = 2, 3, 4")

    p = sub.add_parser("verify", parents=[common], help="run every check on the built-ins (or one knot)")
    p.add_argument("--r-max", type=_positive, default=12)
    return parser


def _resolve(args) -> KnotData:
    source = args.knot_file or args.knot
    if source is None:
        raise _InputError("no knot given; pass a name or --knot-file")
    if args.knot_file and args.knot:
        raise _InputError("pass either a knot name or --knot-file, not both")
    return load_knot(source, validate=not args.no_validate)


def _emit(args, payload: dict, text: str, out) -> None:
    if args.json:
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")


def _cmd_alex(args, k: KnotData, order: int, out) -> int:
    payload = {"knot": k.name, "alexander": k.alexander.to_json(), "positive_form": positive_form(k.alexander).to_json(),
               "deg": k.alexander.deg, "colored": None}
    text = str(k.alexander)
    if args.colored:
        if args.reduced:
            poly = colored_reduced(k.alexander, args.r)
            payload["colored"] = {"r": args.r, "reduced": True, "series": {"coeffs": poly.to_json(), "order": None}}
            text = str(poly)
        else:
            series = colored_unreduced(k.alexander, args.r, order)
            payload["colored"] = {"r": args.r, "reduced": False, "series": series.to_json()}
            text = str(series)
    _emit(args, payload, text, out)
    return EXIT_OK


def _cmd_cable(args, k: KnotData, order: int, out) -> int:
    s = args.s if args.s is not None else args.r * args.n + 1
    cable = cable_alexander(k.alexander, args.r, s)
    payload = {"knot": k.name, "r": args.r, "s": s, "alexander": cable.to_json(),
               "positive_form": positive_form(cable).to_json(), "convergence_defect": None}
    lines = [f"Δ = {cable}", f"positive form = {positive_form(cable)}"]
    if args.s is None:
        defect = convergence_defect(k.alexander, args.r, args.n, order)
        payload["convergence_defect"] = defect
        lines.append(f"agrees with the {args.r}-coloured series below q^{defect} (bound rn+1 = {args.r * args.n + 1})")
    _emit(args, payload, "\n".join(lines), out)
    return EXIT_OK


def _cmd_annihilator(args, k: KnotData, order: int, out) -> int:
    delta1 = positive_form(k.alexander)
    op = unreduced_annihilator(delta1) if args.unreduced else knot_annihilator(delta1)
    factors = format_d_product(delta1, args.unreduced)
    payload = {"knot": k.name, "unreduced": args.unreduced, "factors": factors, "operator": op.to_json(),
               "operator_text": str(op), "verification": None}
    lines = [factors, f"= {op}"]
    status = EXIT_OK
    if args.verify:
        seq = unreduced_sequence(k.alexander, order) if args.unreduced else reduced_sequence(k.alexander, order)
        report = verify_annihilation(op, seq, range(1, args.r_max + 1), order)
        payload["verification"] = report.to_json()
        lines.append(str(report))
        status = EXIT_OK if report.clean else EXIT_MISMATCH
    _emit(args, payload, "\n".join(lines), out)
    return status


def _cmd_srcfk(args, k: KnotData, order: int, out) -> int:
    c = build_colored_complex(k, args.r)
    payload = {"knot": k.name, "r": args.r, "complex": c.to_json(), "generators": c.generator_count()}
    lines = [f"S^{args.r} CFK({k.name}) = {c}"]
    if args.r >= 2:
        lines.append(f"for all r >= 2: {colored_body(k)}")
    for p in c.pairs:
        lines.append(f"  pair {p.label}: 1 at {p.base}, x at {p.partner}")
    for f in c.frees:
        lines.append(f"  cycle {f.label}: {f.degree}")
    if c.tail is not None:
        lines.append(f"  tail: theta {c.tail.theta}, |u| {c.tail.u_deg}, |ξ| {c.tail.xi_deg}")
    _emit(args, payload, "\n".join(lines), out)
    return EXIT_OK


def _cmd_poincare(args, k: KnotData, order: int, out) -> int:
    series = poincare(build_colored_complex(k, args.r), args.r, order)
    payload = {"knot": k.name, "r": args.r, **series.to_json()}
    _emit(args, payload, str(series), out)
    return EXIT_OK


def _cmd_euler(args, k: KnotData, order: int, out) -> int:
    rs = [args.r] if args.r is not None else list(range(2, args.r_max + 1))
    reports = [colored_euler_check(k, r, order) for r in rs]
    ok = all(rep.match for rep in reports)
    payload = {"knot": k.name, "order": order, "match": ok, "reports": [rep.to_json() for rep in reports]}
    _emit(args, payload, "\n".join(str(rep) for rep in reports), out)
    return EXIT_OK if ok else EXIT_MISMATCH


def _cmd_certify(args, k: KnotData, order: int, out) -> int:
    cert = certify(k)
    dec = decategorify(cert, k, order, args.r_max)
    payload = cert.to_json()
    payload["verified"] = dec.to_json()
    payload["coherent"] = None
    lines = [f"certificate for {k.name} (start index {cert.start_index}):"]
    for i, step in enumerate(cert.steps, 1):
        lines.append(f"  {i}. {step.kind:<13} shift {step.shift}  classes before: {step.classes_before}")
    lines.append(f"final object contractible: {'yes' if payload['final_contractible'] else 'no'}")
    lines.append(f"decategorified operator: {cert.decategorified}")
    lines.append(str(dec.report))
    ok = dec.verified
    if args.verify:
        coherent = all(flag for _, _, flag in check_step_coherence(cert))
        payload["coherent"] = coherent
        lines.append(f"concrete cones at r = 2, 3, 4 agree: {'yes' if coherent else 'no'}")
        ok = ok and coherent
    _emit(args, payload, "\n".join(lines), out)
    return EXIT_OK if ok else EXIT_MISMATCH


def _verify_one(k: KnotData, order: int, r_max: int) -> dict:
    delta1 = positive_form(k.alexander)
    rs = range(1, r_max + 1)
    reduced = verify_annihilation(knot_annihilator(delta1), reduced_sequence(k.alexander, order), rs, order).clean
    unreduced = verify_annihilation(unreduced_annihilator(delta1), unreduced_sequence(k.alexander, order), rs, order).clean
    euler_ok = all(colored_euler_check(k, r, order).match for r in (2, 3, 4))
    try:
        cert = certify(k)
    except InvariantViolation:
        return {"name": k.name, "reduced": reduced, "unreduced": unreduced, "euler": euler_ok,
                "certificate": False, "decategorified": False, "coherent": False}
    dec = decategorify(cert, k, order, r_max).verified
    coherent = all(flag for _, _, flag in check_step_coherence(cert))
    return {"name": k.name, "reduced": reduced, "unreduced": unreduced, "euler": euler_ok,
            "certificate": True, "decategorified": dec, "coherent": coherent}


def _cmd_verify(args, order: int, out) -> int:
    if args.knot or args.knot_file:
        knots = [_resolve(args)]
    else:
        knots = list(BUILTIN_KNOTS.values())
    rows = [_verify_one(k, order, args.r_max) for k in knots]
    checks = ("reduced", "unreduced", "euler", "certificate", "decategorified", "coherent")
    ok = all(row[c] for row in rows for c in checks)
    payload = {"order": order, "r_max": args.r_max, "ok": ok, "knots": rows}
    width = max(len(row["name"]) for row in rows)
    lines = [f"{'knot':<{width}}  " + "  ".join(checks)]
    for row in rows:
        cells = "  ".join(f"{'ok' if row[c] else 'FAIL':<{len(c)}}" for c in checks)
        lines.append(f"{row['name']:<{width}}  {cells}".rstrip())
    lines.append("all checks passed" if ok else "some checks FAILED")
    _emit(args, payload, "\n".join(lines), out)
    return EXIT_OK if ok else EXIT_MISMATCH


_COMMANDS = {
    "alex": _cmd_alex,
    "cable": _cmd_cable,
    "annihilator": _cmd_annihilator,
    "srcfk": _cmd_srcfk,
    "poincare": _cmd_poincare,
    "euler-check": _cmd_euler,
    "certify": _cmd_certify,
}


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        order = args.order if args.order is not None else _default_order()
        if args.verb == "verify":
            return _cmd_verify(args, order, out)
        k = _resolve(args)
        return _COMMANDS[args.verb](args, k, order, out)
    except InvariantViolation as exc:
        err.write(f"holofloer: invariant violated: {exc}\n")
        return EXIT_MISMATCH
    except HolofloerError as exc:
        err.write(f"holofloer: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
