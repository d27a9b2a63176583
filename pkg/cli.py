"""
Command-line surface. Every subcommand prints one canonical JSON document
on stdout; diagnostics go to stderr as ``error: <Name>: <message>``.

Exit codes: 0 success, 1 and 2 for negative or inconclusive verdicts of
``conjugate`` and ``module similar``, 64 for unparseable input, 65 for
every other afinv error, 70 for anything unexpected.
"""

import argparse
import re
import sys
from typing import Any, Dict, List, Optional, TextIO, Tuple

from config import BRATTELI_DEPTH
from errors import AfinvError, ParseError, UsageError
from exactnum import charpoly
from logger import get_logger, log_event
from parsing import (format_rational, parse_int_list, parse_matrix, parse_numbers,
                     read_matrix, to_field_elements)
from report import invariant_report, to_json, write_atomic

logger = get_logger("cli")

EXIT_OK = 0
EXIT_PARSE = 64
EXIT_DOMAIN = 65
EXIT_INTERNAL = 70

NUMBER_LITERAL = re.compile(r"^-(\d|\.\d|sqrt\()")

Result = Tuple[Any, int]


class _ArgumentParser(argparse.ArgumentParser):
    """argparse that raises instead of printing usage and exiting"""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # option values such as "-1+sqrt(2)" or "-sqrt(3) 1" are numbers, not flags
        self._negative_number_matcher = NUMBER_LITERAL

    def error(self, message):
        raise ParseError(message)


def _add_matrix_options(parser: argparse.ArgumentParser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--matrix", help='row-major integers, e.g. "5 2 2 1"')
    group.add_argument("--json", help='{"rows": n, "entries": [...]}')


# ----- handlers -----

def cmd_invariants(args) -> Result:
    report = invariant_report(read_matrix(args.matrix, args.json))
    return report, EXIT_OK


def cmd_conjugate(args) -> Result:
    from torusbundle import TorusMonodromy, Verdict, conjugacy_test

    m1 = TorusMonodromy(parse_matrix(args.a))
    m2 = TorusMonodromy(parse_matrix(args.b))
    result = conjugacy_test(m1, m2, args.bound)
    if result.verdict == Verdict.CONJUGATE:
        verdict, code = "conjugate", 0
    elif result.verdict == Verdict.UNDETERMINED:
        verdict, code = "undetermined", 2
    else:
        verdict, code = "distinct", 1
    payload = {
        "verdict": verdict,
        "reason": result.verdict.value,
        "certificate": result.certificate.to_rows() if result.certificate is not None else None,
        "periods": [list(p) for p in result.periods],
    }
    return payload, code


def cmd_alexander(args) -> Result:
    a = read_matrix(args.matrix, args.json)
    if not a.is_square:
        raise UsageError(f"square matrix required, got {a.rows}x{a.cols}")
    return charpoly(a), EXIT_OK


def _expansion_payload(e) -> Dict[str, Any]:
    return {
        "dimension": e.dimension,
        "digits": [list(d.b) for d in e.digits],
        "preperiod": [list(d.b) for d in e.preperiod],
        "period": [list(d.b) for d in e.period],
        "periodic": e.periodic is not None,
        "terminating": e.terminating,
    }


def cmd_jp_expand(args) -> Result:
    from jacobiperron import jp_convergents, jp_expand

    theta = to_field_elements(parse_numbers(args.theta))
    e = jp_expand(theta, args.steps)
    payload = _expansion_payload(e)
    if args.convergent is not None:
        payload["convergent"] = [format_rational(x) for x in jp_convergents(e, args.convergent)]
    return payload, EXIT_OK


def cmd_jp_factor(args) -> Result:
    from jacobiperron import jp_factorize

    digits = jp_factorize(read_matrix(args.matrix, args.json))
    return {"digits": [list(d.b) for d in digits]}, EXIT_OK


def cmd_bratteli(args) -> Result:
    from bratteli import (diagram_from_jp, dimension_vector, dot_export,
                          stationary_diagram)
    from jacobiperron import jp_expand

    depth = BRATTELI_DEPTH if args.depth is None else args.depth
    if args.theta is not None:
        expansion = jp_expand(to_field_elements(parse_numbers(args.theta)), depth)
        diagram = diagram_from_jp(expansion)
        source = "jacobi-perron"
    else:
        diagram = stationary_diagram(read_matrix(args.matrix, args.json), depth)
        source = "stationary"
    if args.dot:
        write_atomic(args.dot, dot_export(diagram))
    payload = {
        "source": source,
        "depth": diagram.depth,
        "levels": [m.to_rows() for m in diagram.levels],
        "labels": list(diagram.labels),
        "dimension_vectors": [list(dimension_vector(diagram, k)) for k in range(diagram.depth + 1)],
        "periodic_tail": list(diagram.periodic_tail) if diagram.periodic_tail else None,
        "terminal": diagram.terminal,
        "dot": args.dot,
    }
    return payload, EXIT_OK


def cmd_order(args) -> Result:
    from traceform import order_form_closed

    closed = order_form_closed(args.d, args.f)
    payload = {
        "d": closed.d,
        "f": closed.f,
        "form": str(closed),
        "coefficients": [format_rational(c) for c in closed.coefficients],
        "delta": format_rational(closed.invariants.delta),
        "sigma": closed.invariants.sigma,
        "cross_checked": True,
    }
    return payload, EXIT_OK


def cmd_module_similar(args) -> Result:
    from pfdata import Similarity, jacobian_from_periods, module_similar

    first, second = parse_numbers(args.m1), parse_numbers(args.m2)
    elements = to_field_elements(first + second)
    field = elements[0].field
    m1 = jacobian_from_periods(field, elements[:len(first)])
    m2 = jacobian_from_periods(field, elements[len(first):])
    verdict = module_similar(m1, m2)
    code = {Similarity.SIMILAR: 0, Similarity.DISTINCT: 1, Similarity.UNSUPPORTED: 2}[verdict]
    return {"verdict": verdict.value, "rank": [m1.rank, m2.rank]}, code


def cmd_formulas(args) -> Result:
    from pfdata import foliation_formulas

    if args.formula == "zippered-genus":
        genus, cycles = foliation_formulas("zippered_genus", parse_int_list(args.perm))
        return {"genus": genus, "cycles": cycles}, EXIT_OK
    if args.formula == "index-check":
        ok = foliation_formulas("index_check", parse_int_list(args.orders), args.genus)
        return {"consistent": ok}, EXIT_OK
    if args.formula == "riemann-hurwitz":
        return {"genus": foliation_formulas("riemann_hurwitz", args.genus, args.ramified)}, EXIT_OK
    if args.formula == "relative-homology":
        rank = foliation_formulas("relative_homology_rank", args.genus, args.singular)
        return {"rank": rank}, EXIT_OK
    orders, genus = foliation_formulas("covering_flow", parse_int_list(args.orders), args.genus)
    return {"orders": orders, "genus": genus}, EXIT_OK


# ----- parser -----

def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="afinv", description="Exact invariants of AF-algebras of surface bundles")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("invariants", help="full invariant report of a monodromy matrix")
    _add_matrix_options(p)
    p.set_defaults(handler=cmd_invariants)

    p = commands.add_parser("conjugate", help="SL(2,Z) conjugacy of two hyperbolic matrices")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--bound", type=int, default=None, help="certificate search radius")
    p.set_defaults(handler=cmd_conjugate)

    p = commands.add_parser("alexander", help="characteristic polynomial")
    _add_matrix_options(p)
    p.set_defaults(handler=cmd_alexander)

    jp = commands.add_parser("jp", help="Jacobi-Perron expansions")
    jp_commands = jp.add_subparsers(dest="jp_command", required=True)
    p = jp_commands.add_parser("expand")
    p.add_argument("--theta", required=True, help='rationals or surds, e.g. "1+sqrt(2)"')
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--convergent", type=int, default=None, help="also print convergent K")
    p.set_defaults(handler=cmd_jp_expand)
    p = jp_commands.add_parser("factor")
    _add_matrix_options(p)
    p.set_defaults(handler=cmd_jp_factor)

    p = commands.add_parser("bratteli", help="Bratteli diagram summary and DOT export")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--matrix")
    source.add_argument("--json")
    source.add_argument("--theta")
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--dot", default=None, metavar="PATH")
    p.set_defaults(handler=cmd_bratteli)

    p = commands.add_parser("order", help="closed-form trace form of Z + f*omega*Z")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--f", type=int, required=True)
    p.set_defaults(handler=cmd_order)

    module = commands.add_parser("module", help="Jacobian modules")
    module_commands = module.add_subparsers(dest="module_command", required=True)
    p = module_commands.add_parser("similar")
    p.add_argument("--m1", required=True)
    p.add_argument("--m2", required=True)
    p.set_defaults(handler=cmd_module_similar)

    formulas = commands.add_parser("formulas", help="numeric identities for measured foliations")
    kinds = formulas.add_subparsers(dest="formula", required=True)
    p = kinds.add_parser("zippered-genus")
    p.add_argument("--perm", required=True)
    p = kinds.add_parser("index-check")
    p.add_argument("--orders", required=True)
    p.add_argument("--genus", type=int, required=True)
    p = kinds.add_parser("riemann-hurwitz")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--ramified", type=int, required=True)
    p = kinds.add_parser("relative-homology")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--singular", type=int, required=True)
    p = kinds.add_parser("covering-flow")
    p.add_argument("--orders", required=True)
    p.add_argument("--genus", type=int, required=True)
    formulas.set_defaults(handler=cmd_formulas)

    return parser


def run_command(argv: List[str], stdout: Optional[TextIO] = None,
                stderr: Optional[TextIO] = None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        payload, code = args.handler(args)
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else EXIT_OK
    except ParseError as e:
        stderr.write(f"error: {e.name}: {e}\n")
        return EXIT_PARSE
    except AfinvError as e:
        stderr.write(f"error: {e.name}: {e}\n")
        return EXIT_DOMAIN
    except Exception as e:
        logger.exception("unexpected failure for %s", argv)
        stderr.write(f"error: InternalError: {e}\n")
        return EXIT_INTERNAL
    stdout.write(to_json(payload) + "\n")
    log_event(f"{' '.join(argv[:2])} -> exit {code}")
    return code
