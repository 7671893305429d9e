"""Command-line front end.

Exit status: 0 on pass / certified / found, 1 on fail / refuted / not found,
2 on usage, file or schema errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import axioms, convergence, fixed_point, spaces, transforms
from .core import EXACT, CarrierError, ContractionGauge, SequenceTrace, UnknownPointError, floating
from .documents import (
    DocumentError, dump_carrier, format_number, load_carrier, load_map, load_potential,
    parse_inline_map, parse_number, read_document,
)
from .reports import to_jsonable

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _policy(args):
    return floating(args.tolerance) if args.tolerance else EXACT


def _emit(args, verdict: str, report, text: str, ok: bool) -> int:
    if args.format == "json":
        print(json.dumps({"command": args.command, "verdict": verdict,
                          "report": to_jsonable(report)}, indent=2))
    else:
        print(text)
    return EXIT_OK if ok else EXIT_FAIL


def _write_doc(args, doc: dict):
    text = json.dumps(doc, indent=2)
    if getattr(args, "output", None):
        Path(args.output).write_text(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_validate(args) -> int:
    carrier = load_carrier(args.file, _policy(args))
    rep = axioms.validate(carrier, samples=args.sampled, seed=args.seed)
    text = rep.summary()
    result = {"axioms": rep}
    if carrier.kind == "g":
        sym = axioms.validate_g_symmetry(carrier, samples=args.sampled, seed=args.seed)
        result["symmetry"] = sym
        r = sym.results["symmetric"]
        text += "\n  symmetric: " + ("yes" if r.passed else f"no, witness {r.witness}")
    return _emit(args, rep.verdict, result, text, rep.passed)


_CONVERSIONS = {
    ("partial", "g"): transforms.partial_to_g,
    ("partial", "metric"): transforms.induced_metric_ps,
    ("gp", "partial"): transforms.gp_to_partial,
    ("gp", "g"): transforms.gp_to_g,
    ("g", "metric"): transforms.g_to_metric,
}


def _identity_text(checks) -> str:
    return "\n".join(f"{c.name}: max discrepancy {format_number(c.max_discrepancy)}"
                     + ("" if c.worst_key is None else f" at {c.worst_key}") for c in checks)


def cmd_convert(args) -> int:
    carrier = load_carrier(args.file, _policy(args))
    if args.check_identity:
        return _identities(args, carrier)
    fn = _CONVERSIONS.get((carrier.kind, args.to))
    if fn is None:
        raise UsageError(f"no construction from {carrier.kind!r} to {args.to!r}")
    try:
        out = fn(carrier, validate=True)
    except transforms.TransformError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _write_doc(args, dump_carrier(out))
    return EXIT_OK


def _identities(args, carrier) -> int:
    try:
        checks = transforms.check_identities(carrier)
    except transforms.TransformError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    tol = 0 if carrier.policy.exact else carrier.policy.tolerance
    ok = all(c.within(tol) for c in checks)
    return _emit(args, "holds" if ok else "violated", checks, _identity_text(checks), ok)


def cmd_check_identity(args) -> int:
    return _identities(args, load_carrier(args.file, _policy(args)))


def _load_trace(path, universe, policy) -> SequenceTrace:
    doc = read_document(path)
    points = doc.get("points")
    if not isinstance(points, list) or not points:
        raise DocumentError("trace needs a non-empty 'points' list")
    for p in points:
        if p not in universe:
            raise DocumentError(f"trace point {p!r} is not in the space")
    eps = parse_number(doc.get("epsilon", 0), policy)
    window = doc.get("window", 1)
    if not isinstance(window, int):
        raise DocumentError("'window' must be an integer")
    try:
        return SequenceTrace(tuple(points), window, eps)
    except ValueError as exc:
        raise DocumentError(str(exc)) from None


def cmd_certify(args) -> int:
    carrier = load_carrier(args.space, _policy(args))
    trace = _load_trace(args.trace, carrier.universe, carrier.policy)
    result = {"cauchy": convergence.cauchy(trace, carrier)}
    lines = [f"{carrier.kind}-Cauchy on window {result['cauchy'].window}: "
             f"{result['cauchy'].verdict} (L ~ {result['cauchy'].limit_estimate})"]
    ok = result["cauchy"].certified
    if args.limit is not None:
        if args.limit not in carrier.universe:
            raise UsageError(f"limit {args.limit!r} is not in the space")
        conv = {"partial": convergence.p_converges_to, "g": convergence.g_converges_to,
                "gp": convergence.gp_converges_to}[carrier.kind]
        result["convergence"] = c = conv(trace, args.limit, carrier)
        lines.append(f"converges to {args.limit}: {c.verdict} (residuals {c.residuals})")
        ok = ok and c.certified
    if args.harness:
        if carrier.kind == "g":
            raise UsageError("the equivalence harness takes a partial or GP space")
        result["harness"] = h = convergence.equivalence_harness(trace, carrier)
        lines.append(f"harness verdicts {h.verdicts}; "
                     + ("no disagreements" if h.agree else f"{len(h.disagreements)} disagreements"))
        ok = ok and h.agree
    verdict = "certified" if ok else result["cauchy"].verdict
    return _emit(args, verdict, result, "\n".join(lines), ok)


def cmd_ball(args) -> int:
    carrier = load_carrier(args.space, _policy(args))
    eps = parse_number(args.eps, carrier.policy)
    if not eps > 0:
        raise UsageError("--eps must be positive")
    if args.center not in carrier.universe:
        raise UsageError(f"unknown centre {args.center!r}")
    if args.point is not None:
        if args.point not in carrier.universe:
            raise UsageError(f"unknown point {args.point!r}")
        inside = convergence.ball_membership(args.center, eps, args.point, carrier)
        return _emit(args, "member" if inside else "not member",
                     {"center": args.center, "eps": eps, "point": args.point, "member": inside},
                     f"{args.point} {'in' if inside else 'not in'} B({args.center}, {args.eps})",
                     inside)
    members = convergence.ball(args.center, eps, carrier)
    return _emit(args, "enumerated", {"center": args.center, "eps": eps, "members": members},
                 f"B({args.center}, {args.eps}) = {{{', '.join(map(str, members))}}}", True)


def _load_selfmap(arg, universe):
    if Path(arg).is_file():
        return load_map(arg, universe)
    return parse_inline_map(arg, universe)


def cmd_fixedpoint(args) -> int:
    policy = _policy(args)
    carrier = load_carrier(args.space, policy)
    T = _load_selfmap(args.map or args.space, carrier.universe)
    phi_doc = args.phi or (args.space if "phi" in read_document(args.space) else None)
    phi = load_potential(phi_doc, carrier.universe, policy) if phi_doc else None
    x0 = args.x0 if args.x0 is not None else carrier.universe.points[0]
    if x0 not in carrier.universe:
        raise UsageError(f"unknown start point {x0!r}")
    check = not args.no_check
    if args.solver == "caristi-gp":
        if carrier.kind != "gp":
            raise UsageError("the caristi-gp solver needs a GP space")
        if not isinstance(phi, fixed_point.PairPotential):
            raise UsageError("the caristi-gp solver needs a pair potential (--phi)")
        rep = fixed_point.caristi_descent_solve(carrier, T, phi, x0, args.budget, check=check)
    else:
        gauge = ContractionGauge.linear(Fraction(args.gauge)) if args.gauge else None
        if phi is not None and not isinstance(phi, fixed_point.PointPotential):
            raise UsageError("picard takes a point potential")
        try:
            rep = fixed_point.picard_solve(carrier, T, x0, args.budget, gauge=gauge, phi=phi,
                                           check=check)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    text = f"{rep.verdict}: point {rep.point} after {rep.iterations} iterations"
    if rep.hypothesis is not None and not rep.hypothesis.passed:
        h = rep.hypothesis
        text += f"\n  {h.condition} fails at {h.witness}: lhs={h.lhs} rhs={h.rhs}"
    if rep.trace:
        text += "\n  trace: " + " -> ".join(map(str, rep.trace))
    return _emit(args, rep.verdict, rep, text, rep.found)


def _grid(args):
    if args.values:
        return spaces.rational_grid(Fraction(v) for v in args.values.split(","))
    return spaces.dyadic_grid(args.depth)


def cmd_example(args) -> int:
    name = args.name
    if name == "baire":
        carrier = spaces.baire_g(spaces.WordUniverse(list(args.alphabet), args.length))
    elif name == "random-p":
        carrier = spaces.random_partial(args.seed, args.n)
    elif name == "random-gp":
        carrier = spaces.random_gp(args.seed, args.n)
    else:
        build = {"maxg": spaces.max_combination_g, "maxp": spaces.max_partial,
                 "maxgp": spaces.max_gp}[name]
        carrier = build(_grid(args))
    if args.with_map and name not in ("maxg", "maxp", "maxgp"):
        raise UsageError("--with-map only applies to grid examples")
    selfmap = spaces.scaled_map(carrier.universe, Fraction(args.with_map)) if args.with_map else None
    phi = None
    if args.with_phi:
        if selfmap is None:
            raise UsageError("--with-phi needs --with-map")
        phi = spaces.linear_pair_potential(Fraction(args.with_phi))
    _write_doc(args, dump_carrier(carrier, selfmap, phi))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--tolerance", type=float, default=None,
                        help="floating mode with this tolerance (default: exact rationals)")

    parser = argparse.ArgumentParser(prog="gpmetric", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check the axioms of a table")
    p.add_argument("file")
    p.add_argument("--sampled", type=int, default=None, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("convert", parents=[common], help="build a derived structure")
    p.add_argument("file")
    p.add_argument("--to", choices=["g", "partial", "metric"], default="g")
    p.add_argument("--check-identity", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("check-identity", parents=[common], help="evaluate the exact identities")
    p.add_argument("file")
    p.set_defaults(func=cmd_check_identity)

    p = sub.add_parser("certify", parents=[common], help="Cauchy/convergence certificates")
    p.add_argument("space")
    p.add_argument("--trace", required=True)
    p.add_argument("--limit")
    p.add_argument("--harness", action="store_true")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("ball", parents=[common], help="open ball membership")
    p.add_argument("space")
    p.add_argument("--center", required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--point")
    p.set_defaults(func=cmd_ball)

    p = sub.add_parser("fixedpoint", parents=[common], help="fixed-point solvers")
    p.add_argument("--solver", choices=["picard", "caristi-gp"], required=True)
    p.add_argument("--space", required=True)
    p.add_argument("--map", help="map document, or inline 'x->y,...' (default: the space file)")
    p.add_argument("--phi",
                   help="document with a 'phi' list (default: the space file, if it has one)")
    p.add_argument("--gauge", help="linear gauge factor c in gauge(t) = c*t (picard)")
    p.add_argument("--x0")
    p.add_argument("--budget", type=int, default=1000)
    p.add_argument("--no-check", action="store_true", help="skip the hypothesis check")
    p.set_defaults(func=cmd_fixedpoint)

    p = sub.add_parser("example", parents=[common], help="emit a built-in table document")
    p.add_argument("name", choices=["baire", "maxg", "maxp", "maxgp", "random-p", "random-gp"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--depth", type=int, default=20, help="dyadic grid depth")
    p.add_argument("--values", help="comma-separated grid values instead of the dyadic grid")
    p.add_argument("--alphabet", default="ab")
    p.add_argument("--length", type=int, default=4)
    p.add_argument("--with-map", metavar="FACTOR", help="include x -> FACTOR*x clamped to the grid")
    p.add_argument("--with-phi", metavar="COEF", help="include phi(t,s) = COEF*(t+s)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_example)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, DocumentError, CarrierError, UnknownPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
