"""Command-line front end.  ``partreg <group> <command> [flags]``.

Every command prints one report: JSON (default) or a plain-text rendering of
the same data.  Exit codes: 0 verdict reached, 1 a re-verification failed,
2 budget or timeout, 64 usage error, 65 malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from . import __version__
from .algebra import (
    ParseError,
    PolySystem,
    as_fraction,
    has_constant_positive_solution,
    is_homogeneous,
    parse_polynomial,
    parse_system,
    substitute_system,
)
from .coloring import (
    TIMEOUT,
    GroundSet,
    NotHomogeneousError,
    TupleCapExceeded,
    enumerate_solutions,
    find_avoiding_coloring,
    near_zero_probe,
    rado_number,
    scaling_transfer_check,
)
from .lifter import LiftIdentityError, LiftInstance, find_lift_in_set, lift, random_lift_instance, verify_chain
from .rado import (
    ColumnsCertificate,
    RationalMatrix,
    certificate_errors,
    columns_condition,
    linear_pr_verdict,
    subset_sum_zero,
)
from .semigroup import (
    PI_STYLE,
    RATIONAL_UNIT,
    ExtendedElement,
    RefinementBudgetExceeded,
    SemigroupSpec,
    check_hl_axioms,
    check_q_infinitesimal,
    compare_to_one,
    membership,
)
from .transforms import (
    LevSpec,
    ap_system,
    fs_system,
    lev_family,
    lev_system,
    merge_systems,
    power_matrix_report,
    reciprocal_transform,
)

SCHEMA_VERSION = 1
EXIT_OK, EXIT_VERIFY_FAILED, EXIT_BUDGET, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 64, 65
THREADS_ENV = "PARTREG_THREADS"
# flags that never reach the input echo: they cannot change a result
NON_SEMANTIC = {"threads", "format"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive_int(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if n < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be positive")
    return n


def _positive_float(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number")
    if not x > 0:
        raise argparse.ArgumentTypeError(f"{text!r} must be positive")
    return x


# ---------------------------------------------------------------------------
# Option table: name -> (argparse kwargs).  Each command lists the options it uses.

OPTIONS = {
    "system": dict(help="polynomial system; '-' reads stdin"),
    "system2": dict(help="second system for merge"),
    "matrix": dict(help='JSON matrix such as "[[1,1,-1]]"; entries may be "p/q" strings'),
    "certificate": dict(help="JSON columns certificate"),
    "coeffs": dict(help='JSON list of coefficients, e.g. "[1,1,-2]"'),
    "power": dict(type=_positive_int, default=1, help="exponent r in A x^r = 0"),
    "at": dict(help='assignment such as "x=1, y=1/2"'),
    "mapping": dict(help='substitution such as "x=2*u; y=u+v"'),
    "link": dict(help="linking pair 'x,y' for merge"),
    "k": dict(type=_positive_int, default=1, help="progression length"),
    "m": dict(type=_positive_int, default=2, help="number of generators"),
    "spec": dict(help='JSON lev spec {"coeffs": [...], "subsets": [[...], ...], "m": m}'),
    "instance": dict(help='JSON lift instance {"spec": ..., "a": [...], "b": [...]}'),
    "chain": dict(help="JSON list of sets B_0, ..., B_m"),
    "a": dict(help="JSON list of linear-solution values"),
    "b": dict(help="JSON list of multipliers"),
    "set": dict(help="JSON list of positive rationals"),
    "count": dict(type=_positive_int, default=1000, help="number of random instances"),
    "element": dict(help='element such as "1/2 + 1/8*g"'),
    "samples": dict(help="';'-separated elements"),
    "pairs": dict(help="';'-separated 'q, x' pairs"),
    "kind": dict(default=PI_STYLE, choices=[PI_STYLE, RATIONAL_UNIT]),
    "max_rounds": dict(type=_positive_int, default=64, help="interval refinement budget"),
    "colors": dict(type=_positive_int, default=2),
    "max_n": dict(type=_positive_int, help="largest ground-set index"),
    "min_n": dict(type=_positive_int, default=1),
    "denominator": dict(type=_positive_int, help="grid denominator D"),
    "grid_size": dict(type=_positive_int, help="grid size M"),
    "epsilon": dict(help="comma-separated positive rationals"),
    "family": dict(default="linear", choices=["linear", "geometric"]),
    "scale": dict(help="positive rational scale factor"),
    "timeout": dict(type=_positive_float, help="seconds"),
    "cap": dict(type=_positive_int, default=10 ** 8, help="candidate tuple cap"),
    "seed": dict(type=int, default=0, help="seed for randomized suites"),
    "report": dict(help="JSON report file; '-' reads stdin"),
}

REQUIRED = {"system", "system2", "matrix", "certificate", "coeffs", "spec", "instance", "chain",
            "a", "b", "set", "element", "samples", "pairs", "report", "scale"}
STDIN_OK = {"system", "matrix", "spec", "instance", "report", "certificate"}


def _flag(name):
    return "--" + name.replace("_", "-")


# ---------------------------------------------------------------------------
# Input decoding


def _load_json(text, what):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{what} is not valid JSON: {exc}") from None


def _rational(x):
    if isinstance(x, (float, bool)):
        raise ValueError(f"{x!r} is not an exact rational")
    return as_fraction(x)


def _rational_list(text, what):
    data = _load_json(text, what)
    if not isinstance(data, list):
        raise ValueError(f"{what} must be a JSON list")
    return [_rational(x) for x in data]


def _assignment(text):
    out = {}
    for part in filter(None, (p.strip() for p in text.replace(";", ",").split(","))):
        name, sep, value = part.partition("=")
        if not sep:
            raise ValueError(f"expected name=value, got {part!r}")
        out[name.strip()] = Fraction(value.strip())
    return out


def _epsilons(text):
    return [Fraction(p.strip()) for p in text.split(",") if p.strip()]


def _ground(args) -> GroundSet:
    if args.denominator is not None:
        size = args.grid_size if args.grid_size is not None else args.max_n
        if size is None:
            raise UsageError("a grid needs --grid-size (or --max-n)")
        eps = None if args.epsilon is None else _single_epsilon(args.epsilon)
        return GroundSet.rational_grid(args.denominator, size, eps)
    if args.max_n is None:
        raise UsageError("give --max-n, or --denominator with --grid-size")
    return GroundSet.integer_range(args.max_n)


def _single_epsilon(text):
    eps = _epsilons(text)
    if len(eps) != 1:
        raise UsageError("this command takes one --epsilon value")
    return eps[0]


def _fmt(x):
    return str(x)


# ---------------------------------------------------------------------------
# Commands.  Each returns (result dict, exit code).


def cmd_parse(args):
    sys_ = parse_system(args.system)
    return {
        "system": sys_.format(),
        "variables": list(sys_.variables),
        "equations": [p.format(sys_.variables) for p in sys_.polynomials],
        "homogeneity": is_homogeneous(sys_).to_dict(),
        "constant_solution": has_constant_positive_solution(sys_).to_dict(),
    }, EXIT_OK


def cmd_eval(args):
    sys_ = parse_system(args.system)
    point = _assignment(args.at)
    values = sys_.evaluate(point)
    return {"values": [_fmt(v) for v in values], "solution": all(v == 0 for v in values)}, EXIT_OK


def cmd_check_columns(args):
    A = RationalMatrix.from_json(args.matrix)
    cert = columns_condition(A)
    return {"satisfied": cert is not None, "certificate": None if cert is None else cert.to_json()}, EXIT_OK


def cmd_check_subset_sum(args):
    J = subset_sum_zero(_rational_list(args.coeffs, "--coeffs"))
    return {"satisfied": J is not None, "J": None if J is None else list(J)}, EXIT_OK


def cmd_check_verdict(args):
    A = RationalMatrix.from_json(args.matrix)
    return linear_pr_verdict(A, args.power).to_json(), EXIT_OK


def cmd_check_verify(args):
    A = RationalMatrix.from_json(args.matrix)
    cert = ColumnsCertificate.from_json(args.certificate)
    errors = certificate_errors(A, cert)
    return {"valid": not errors, "errors": errors}, EXIT_OK if not errors else EXIT_VERIFY_FAILED


def cmd_transform_reciprocal(args):
    return reciprocal_transform(parse_system(args.system)).to_json(), EXIT_OK


def cmd_transform_power(args):
    return power_matrix_report(RationalMatrix.from_json(args.matrix), args.power).to_json(), EXIT_OK


def cmd_transform_lev(args):
    spec = LevSpec.from_json(_load_json(args.spec, "--spec"))
    sys_ = lev_system(spec)
    return {"spec": spec.to_json(), "polynomial": lev_family(spec).format(sys_.variables),
            "variables": list(sys_.variables)}, EXIT_OK


def cmd_transform_merge(args):
    link = None
    if args.link is not None:
        parts = [p.strip() for p in args.link.split(",")]
        if len(parts) != 2:
            raise UsageError("--link takes 'x,y'")
        link = (parts[0], parts[1])
    return merge_systems(parse_system(args.system), parse_system(args.system2), link).to_json(), EXIT_OK


def cmd_transform_ap(args):
    s = ap_system(args.k)
    return {"system": s.format(), "variables": list(s.variables)}, EXIT_OK


def cmd_transform_fs(args):
    s = fs_system(args.m)
    return {"system": s.format(), "variables": list(s.variables)}, EXIT_OK


def cmd_transform_substitute(args):
    sys_ = parse_system(args.system)
    mapping = {}
    for part in filter(None, (p.strip() for p in args.mapping.split(";"))):
        name, sep, expr = part.partition("=")
        if not sep:
            raise ValueError(f"expected name=expression, got {part!r}")
        mapping[name.strip()] = parse_polynomial(expr)
    out = substitute_system(sys_, mapping)
    return {"system": out.format(), "variables": list(out.variables)}, EXIT_OK


def cmd_lift_apply(args):
    inst = LiftInstance.from_json(_load_json(args.instance, "--instance"))
    try:
        return lift(inst).to_json(), EXIT_OK
    except LiftIdentityError as exc:  # pragma: no cover - the identity is a theorem
        return {"status": "identity_violation", "detail": str(exc)}, EXIT_VERIFY_FAILED


def cmd_lift_find(args):
    spec = LevSpec.from_json(_load_json(args.spec, "--spec"))
    w = find_lift_in_set(_rational_list(args.set, "--set"), spec)
    return {"found": w is not None, "witness": None if w is None else w.to_json()}, EXIT_OK


def cmd_lift_chain(args):
    chain = _load_json(args.chain, "--chain")
    if not isinstance(chain, list):
        raise ValueError("--chain must be a JSON list of lists")
    sets = [[_rational(x) for x in B] for B in chain]
    report = verify_chain(sets, _rational_list(args.a, "--a"), _rational_list(args.b, "--b"))
    return report.to_json(), EXIT_OK


def cmd_lift_random(args):
    rng = random.Random(args.seed)
    failures = 0
    for _ in range(args.count):
        if lift(random_lift_instance(rng)).value != 0:  # pragma: no cover - lift raises first
            failures += 1
    return {"instances": args.count, "failures": failures}, EXIT_OK


def _enclosure_budget(fn):
    try:
        return fn(), EXIT_OK
    except RefinementBudgetExceeded as exc:
        return {"status": "budget", "detail": str(exc)}, EXIT_BUDGET


def cmd_semigroup_member(args):
    x = ExtendedElement.parse(args.element)

    def run():
        m = membership(x, SemigroupSpec(args.kind), max_rounds=args.max_rounds)
        return {"element": str(x), "member": m.member, "reason": m.reason}

    return _enclosure_budget(run)


def cmd_semigroup_compare(args):
    x = ExtendedElement.parse(args.element)
    return _enclosure_budget(lambda: {"element": str(x), "compare_to_one": compare_to_one(x, max_rounds=args.max_rounds)})


def cmd_semigroup_hl(args):
    samples = [ExtendedElement.parse(t) for t in args.samples.split(";") if t.strip()]
    return _enclosure_budget(
        lambda: check_hl_axioms(samples, s=SemigroupSpec(args.kind), max_rounds=args.max_rounds).to_json())


def cmd_semigroup_qinf(args):
    pairs = []
    for part in filter(None, (p.strip() for p in args.pairs.split(";"))):
        q, sep, x = part.partition(",")
        if not sep:
            raise ValueError(f"expected 'q, x', got {part!r}")
        pairs.append((Fraction(q.strip()), ExtendedElement.parse(x)))
    return _enclosure_budget(
        lambda: check_q_infinitesimal(SemigroupSpec(args.kind), pairs, max_rounds=args.max_rounds).to_json())


def _budgeted(fn):
    try:
        return fn()
    except TupleCapExceeded as exc:
        return {"status": "budget", "detail": str(exc), "needed": exc.needed, "cap": exc.cap}, EXIT_BUDGET


def cmd_search_avoid(args):
    def run():
        sys_ = parse_system(args.system)
        h = enumerate_solutions(sys_, _ground(args), cap=args.cap)
        res = find_avoiding_coloring(h, args.colors, timeout=args.timeout, workers=args.threads)
        out = res.to_json()
        out["edges"] = len(h.edges)
        return out, EXIT_BUDGET if res.status == TIMEOUT else EXIT_OK

    return _budgeted(run)


def cmd_search_rado_number(args):
    def run():
        if args.max_n is None:
            raise UsageError("--max-n is required")
        rep = rado_number(parse_system(args.system), args.colors, args.max_n, args.min_n,
                          denominator=args.denominator, timeout=args.timeout, workers=args.threads, cap=args.cap)
        return rep.to_json(), EXIT_OK if rep.status == "threshold" else EXIT_BUDGET

    return _budgeted(run)


def cmd_search_near_zero(args):
    def run():
        if args.epsilon is None or args.denominator is None or args.grid_size is None:
            raise UsageError("--epsilon, --denominator and --grid-size are required")
        rep = near_zero_probe(parse_system(args.system), args.colors, _epsilons(args.epsilon),
                              args.denominator, args.grid_size, family=args.family,
                              timeout=args.timeout, workers=args.threads)
        timed_out = any(res is not None and res.status == TIMEOUT for _, res in rep.entries)
        return rep.to_json(), EXIT_BUDGET if timed_out else EXIT_OK

    return _budgeted(run)


def cmd_search_scaling(args):
    def run():
        ok = scaling_transfer_check(parse_system(args.system), Fraction(args.scale), _ground(args))
        return {"transfer": ok}, EXIT_OK

    return _budgeted(run)


def cmd_verify(args):
    text = args.report
    if not text.lstrip().startswith("{"):
        try:
            with open(text, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ValueError(f"cannot read report: {exc}") from None
    report = _load_json(text, "--report")
    args.report = report  # echo the parsed report, not the raw text
    return verify_report(report)


COMMON = ["format", "threads"]
COMMANDS = {
    ("parse",): (cmd_parse, ["system"], "parse and normalise a system"),
    ("eval",): (cmd_eval, ["system", "at"], "evaluate a system at a point"),
    ("check", "columns"): (cmd_check_columns, ["matrix"], "columns condition with certificate"),
    ("check", "subset-sum"): (cmd_check_subset_sum, ["coeffs"], "zero-sum subset of coefficients"),
    ("check", "verdict"): (cmd_check_verdict, ["matrix", "power"], "partition regularity of A x^r = 0"),
    ("check", "verify"): (cmd_check_verify, ["matrix", "certificate"], "check a columns certificate"),
    ("transform", "reciprocal"): (cmd_transform_reciprocal, ["system"], "x_i -> 1/x_i, denominators cleared"),
    ("transform", "power"): (cmd_transform_power, ["matrix", "power"], "the system A x^r = 0"),
    ("transform", "lev"): (cmd_transform_lev, ["spec"], "lev-family polynomial"),
    ("transform", "merge"): (cmd_transform_merge, ["system", "system2", "link"], "join two systems"),
    ("transform", "ap"): (cmd_transform_ap, ["k"], "arithmetic progression system"),
    ("transform", "fs"): (cmd_transform_fs, ["m"], "finite sums system"),
    ("transform", "substitute"): (cmd_transform_substitute, ["system", "mapping"], "substitute variables"),
    ("lift", "apply"): (cmd_lift_apply, ["instance"], "lift a linear solution"),
    ("lift", "find"): (cmd_lift_find, ["spec", "set"], "search a finite set for a lift"),
    ("lift", "chain"): (cmd_lift_chain, ["chain", "a", "b"], "check chain membership claims"),
    ("lift", "random"): (cmd_lift_random, ["count", "seed"], "randomized lifting-identity suite"),
    ("semigroup", "member"): (cmd_semigroup_member, ["element", "kind", "max_rounds"], "membership test"),
    ("semigroup", "compare"): (cmd_semigroup_compare, ["element", "max_rounds"], "compare an element with 1"),
    ("semigroup", "hl"): (cmd_semigroup_hl, ["samples", "kind", "max_rounds"], "sample HL-axiom check"),
    ("semigroup", "qinf"): (cmd_semigroup_qinf, ["pairs", "kind", "max_rounds"], "sample Q-infinitesimal check"),
    ("search", "avoid"): (cmd_search_avoid, ["system", "colors", "max_n", "denominator", "grid_size",
                                             "epsilon", "timeout", "cap"], "find an avoiding coloring"),
    ("search", "rado-number"): (cmd_search_rado_number, ["system", "colors", "max_n", "min_n", "denominator",
                                                         "timeout", "cap"], "threshold over growing ground sets"),
    ("search", "near-zero"): (cmd_search_near_zero, ["system", "colors", "epsilon", "denominator", "grid_size",
                                                     "family", "timeout"], "probe grids inside (0, eps)"),
    ("search", "scaling"): (cmd_search_scaling, ["system", "scale", "max_n", "denominator", "grid_size",
                                                 "epsilon"], "scaling transfer check"),
    ("verify",): (cmd_verify, ["report"], "re-verify a JSON report"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="partreg", description="Exact partition-regularity experiments.")
    parser.add_argument("--version", action="version", version=f"partreg {__version__}")
    top = parser.add_subparsers(dest="group", metavar="command", parser_class=_Parser)
    top.required = True
    groups = {}
    for words, (_, options, help_) in COMMANDS.items():
        if len(words) == 1:
            sub = top.add_parser(words[0], help=help_)
        else:
            if words[0] not in groups:
                g = top.add_parser(words[0], help=f"{words[0]} commands")
                sp = g.add_subparsers(dest="command", metavar="subcommand", parser_class=_Parser)
                sp.required = True
                groups[words[0]] = sp
            sub = groups[words[0]].add_parser(words[1], help=help_)
        sub.set_defaults(words=words)
        for name in options:
            kwargs = dict(OPTIONS[name])
            if name in REQUIRED:
                kwargs["required"] = True
            sub.add_argument(_flag(name), dest=name, **kwargs)
        sub.add_argument("--format", choices=["json", "text"], default="json")
        sub.add_argument("--threads", type=_positive_int, default=None,
                         help=f"worker processes (default ${THREADS_ENV} or 1)")
    return parser


def _read_stdin_values(args, options):
    dashed = [n for n in options if n in STDIN_OK and getattr(args, n) == "-"]
    if len(dashed) > 1:
        raise UsageError("only one flag may read stdin")
    for n in dashed:
        setattr(args, n, sys.stdin.read().strip())


def _threads(args):
    if args.threads is not None:
        return args.threads
    env = os.environ.get(THREADS_ENV)
    if env is None:
        return 1
    try:
        return _positive_int(env)
    except argparse.ArgumentTypeError:
        raise UsageError(f"${THREADS_ENV} must be a positive integer, got {env!r}") from None


def input_echo(words, args) -> dict:
    _, options, _ = COMMANDS[words]
    return {n: getattr(args, n) for n in options if n not in NON_SEMANTIC}


def make_report(words, echo, result) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": " ".join(words), "input": echo, "result": result}


def dumps(report) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False)


def render_text(data, indent=0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(data, dict):
        for k, v in data.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(data, list):
        for v in data:
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(data))
    return "\n".join(lines)


def _scalar(v):
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (dict, list)):
        return "{}" if isinstance(v, dict) else "[]"
    return str(v)


def _dispatch(words, args):
    handler = COMMANDS[words][0]
    try:
        return handler(args)
    except (ParseError, ValueError, KeyError, ZeroDivisionError, NotHomogeneousError) as exc:
        raise _DataError(str(exc)) from exc


class _DataError(Exception):
    pass


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        words = args.words
        _read_stdin_values(args, COMMANDS[words][1])
        args.threads = _threads(args)
        result, code = _dispatch(words, args)
    except UsageError as exc:
        print(str(exc), file=stderr)
        return EXIT_USAGE
    except _DataError as exc:
        print(f"partreg: input error: {exc}", file=stderr)
        return EXIT_DATA
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    report = make_report(words, input_echo(words, args), result)
    if args.format == "text":
        print(render_text(report), file=stdout)
    else:
        print(dumps(report), file=stdout)
    return code


def main(argv=None) -> int:
    return run(argv)


# ---------------------------------------------------------------------------
# Report re-verification


class ReportError(ValueError):
    pass


def _namespace_for(words, echo) -> argparse.Namespace:
    _, options, _ = COMMANDS[words]
    unknown = set(echo) - set(options)
    if unknown:
        raise ReportError(f"unknown input fields {sorted(unknown)}")
    ns = argparse.Namespace(words=words, format="json", threads=1)
    for n in options:
        setattr(ns, n, OPTIONS[n].get("default"))
    for n, v in echo.items():
        setattr(ns, n, v)
    return ns


def _check_avoiding(args, result) -> list[str]:
    """Independent check of an avoiding certificate: no solution tuple is monochromatic."""
    g = _ground(args)
    return _check_coloring(parse_system(args.system), g, result)


def _check_coloring(sys_: PolySystem, g: GroundSet, result) -> list[str]:
    cert = result.get("certificate")
    if cert is None:
        return ["avoiding result without certificate"]
    colors = {Fraction(x): c for x, c in cert["colors"]}
    if set(colors) != set(g.elements):
        return ["certificate does not color exactly the ground set"]
    if any(not 1 <= c <= cert["r"] for c in colors.values()):
        return ["color out of range"]
    h = enumerate_solutions(sys_, g)
    bad = [t for t in h.tuples if len({colors[x] for x in h.values(t)}) == 1]
    return [f"monochromatic solution {[str(x) for x in h.values(t)]}" for t in bad[:5]]


def verify_report(report) -> tuple[dict, int]:
    """Re-run the command recorded in ``report`` and check its certificates.

    Returns a result dict and exit code 0 when the report reproduces exactly
    and every certificate checks out, else exit code 1.
    """
    if not isinstance(report, dict):
        raise ValueError("report must be a JSON object")
    fields = {"schema_version", "command", "input", "result"}
    if set(report) != fields:
        raise ValueError(f"report fields must be exactly {sorted(fields)}; got {sorted(report)}")
    if report["schema_version"] != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {report['schema_version']!r}")
    words = tuple(str(report["command"]).split())
    if words not in COMMANDS or words == ("verify",):
        raise ValueError(f"unknown command {report['command']!r}")
    if not isinstance(report["input"], dict):
        raise ValueError("input must be a JSON object")
    args = _namespace_for(words, report["input"])
    result = report["result"]
    problems = []

    if words == ("check", "columns") and result.get("certificate") is not None:
        A = RationalMatrix.from_json(args.matrix)
        problems += certificate_errors(A, ColumnsCertificate.from_json(result["certificate"]))
    if words == ("check", "verdict") and result.get("certificate") is not None:
        A = RationalMatrix.from_json(args.matrix)
        problems += certificate_errors(A, ColumnsCertificate.from_json(result["certificate"]))
    if words == ("search", "avoid") and result.get("status") == "avoiding":
        problems += _check_avoiding(args, result)
    if words == ("search", "rado-number") and result.get("avoiding"):
        prev = result["avoiding"]
        N = result["lower_bound"] - 1
        g = GroundSet.integer_range(N) if args.denominator is None else GroundSet.rational_grid(args.denominator, N)
        problems += _check_coloring(parse_system(args.system), g, prev)

    try:
        fresh, _ = COMMANDS[words][0](args)
    except UsageError as exc:
        raise ValueError(str(exc)) from None
    if fresh != result:
        problems.append("re-running the recorded input gives a different result")
    out = {"command": " ".join(words), "valid": not problems, "problems": problems}
    return out, EXIT_OK if not problems else EXIT_VERIFY_FAILED


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
