"""
Command-line interface.

``eulerq eval``, ``table``, ``check``, ``zeta`` and ``compare-log``.
Exit codes: 0 success, 1 a failed identity check, 2 a usage or domain
error, 3 a series that did not converge within ``--max-terms``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, TextIO, Union

import numpy as np
from pydantic import ValidationError

from eulerq import __version__
from eulerq.errors import (
    DivergentSeries,
    DomainError,
    MaxTermsExceeded,
    PoleError,
    QSeriesError,
    UnknownIdentity,
)
from eulerq.formatting import (
    fixed_digits,
    format_complex,
    format_number,
    indented,
    render_table,
    wrapped,
)
from eulerq.identities import registry_list, run_checks
from eulerq.qcore import E_q, EvalConfig, SeriesValue, e_q, qpochhammer_inf
from eulerq.qdilog import ClassicalDilog, QDilog
from eulerq.qlambert import FqFunction
from eulerq.qlog import SqFunction
from eulerq.qzeta import QZeta
from eulerq.variants import (
    borwein_lnq,
    kirillov_li2,
    kirillov_logq,
    tsallis_lnq,
    zudilin_l,
)

logger = logging.getLogger(__name__)

EXIT_FAILED_CHECK = 1
EXIT_USAGE = 2
EXIT_MAX_TERMS = 3

INTEGER = re.compile(r"^-?\d+$")


def parse_complex(text: str) -> complex:
    """
    Read a number written ``re`` or ``re,im``.

    >>> parse_complex("1.5,-2")
    (1.5-2j)
    """
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected a number 're' or 're,im', not {text!r}")


def parse_point(text: str) -> Union[int, complex, str]:
    """Read a grid point: an integer index, ``q^-n``, or a number ``re[,im]``."""
    if INTEGER.match(text.strip()):
        return int(text)
    if text.strip().startswith("q^"):
        return text.strip()
    return parse_complex(text)


Evaluator = Callable[[argparse.Namespace, EvalConfig], SeriesValue]


def _t_or_q(args: argparse.Namespace) -> complex:
    return args.t if args.t is not None else args.q


def _needs_t(args: argparse.Namespace) -> complex:
    if args.t is None:
        raise DomainError(f"{args.fn} needs --t.")
    return args.t


def _exact(value: float) -> SeriesValue:
    return SeriesValue.exact(value, terms_used=1)


FUNCTIONS: Dict[str, Evaluator] = {
    "s_q": lambda a, c: SqFunction(q=a.q, cfg=c).s_q(a.x),
    "s_q_taylor": lambda a, c: SqFunction(q=a.q, cfg=c).s_q_taylor(a.x),
    "s_q_onemxk": lambda a, c: SqFunction(q=a.q, cfg=c).s_q_onemxk(a.x),
    "s_q_via_qintegral": lambda a, c: SqFunction(q=a.q, cfg=c).s_q_via_qintegral(a.x),
    "f_q": lambda a, c: FqFunction(q=a.q, cfg=c).f_q(a.x, _t_or_q(a)),
    "f_q_divisor": lambda a, c: FqFunction(q=a.q, cfg=c).f_q_divisor_expansion(a.x, _t_or_q(a)),
    "f_q_x": lambda a, c: FqFunction(q=a.q, cfg=c).f_q_x_expansion(a.x, _t_or_q(a)),
    "f_q_via_qintegral": lambda a, c: FqFunction(q=a.q, cfg=c).f_q_via_qintegral(
        a.x, a.p if a.p is not None else a.q
    ),
    "li2q": lambda a, c: QDilog(q=a.q, cfg=c).li2q(a.x),
    "li2q_taylor": lambda a, c: QDilog(q=a.q, cfg=c).li2q_taylor(a.x),
    "li2q_via_qintegral": lambda a, c: QDilog(q=a.q, cfg=c).li2q_via_qintegral(a.x),
    "classical_li2": lambda a, c: ClassicalDilog(cfg=c).classical_li2(a.x),
    "zeta_q": lambda a, c: QZeta(q=a.q, cfg=c).zeta_q(a.s),
    "g_kernel": lambda a, c: SqFunction(q=a.q, cfg=c).g_kernel(a.x, _needs_t(a)),
    "e_q": lambda a, c: e_q(a.x, a.q, c),
    "E_q": lambda a, c: E_q(a.x, a.q, c),
    "qpochhammer_inf": lambda a, c: qpochhammer_inf(a.x, a.q, c),
    "tsallis_lnq": lambda a, c: _exact(tsallis_lnq(_real(a.x), a.q)),
    "borwein_lnq": lambda a, c: borwein_lnq(a.x, a.q, c),
    "kirillov_logq": lambda a, c: kirillov_logq(a.x, a.q, c),
    "kirillov_li2": lambda a, c: kirillov_li2(a.x, a.q, c),
    "zudilin_l1": lambda a, c: zudilin_l(a.x, a.q, 1, c),
    "zudilin_l2": lambda a, c: zudilin_l(a.x, a.q, 2, c),
}


def _real(x: complex) -> float:
    if x.imag != 0:
        raise DomainError(f"This function needs a real argument, not {format_complex(x)}.")
    return x.real


def _open_out(path: Optional[str]) -> TextIO:
    if path is None or path == "-":
        return sys.stdout
    return open(path, "w", newline="", encoding="utf-8")


def _write(text: str, path: Optional[str]) -> None:
    stream = _open_out(path)
    try:
        stream.write(text)
    finally:
        if stream is not sys.stdout:
            stream.close()


def _evaluate(args: argparse.Namespace, cfg: EvalConfig, x: complex) -> SeriesValue:
    point = argparse.Namespace(**{**vars(args), "x": x})
    return FUNCTIONS[args.fn](point, cfg)


def cmd_eval(args: argparse.Namespace, cfg: EvalConfig) -> int:
    """Print one value with its error estimate."""
    result = _evaluate(args, cfg, args.x)
    if args.json:
        record = {
            "fn": args.fn,
            "q": args.q,
            "x": [args.x.real, args.x.imag],
            "value": [result.real, result.imag],
            "err": result.err_estimate,
            "terms": result.terms_used,
        }
        print(json.dumps(record))
    else:
        print(format_complex(result.value))
        print(f"err_estimate={format_number(result.err_estimate)} terms_used={result.terms_used}")
    return 0


TABLE_HEADER = ["x", "value_re", "value_im", "err", "terms"]


def table_rows(args: argparse.Namespace, cfg: EvalConfig) -> List[Dict[str, float]]:
    """Evaluate a function on an evenly spaced real grid, keeping grid order."""
    grid = np.linspace(args.x_start, args.x_end, args.steps)

    def row(x: float) -> Dict[str, float]:
        result = _evaluate(args, cfg, complex(x))
        return {
            "x": float(x),
            "value_re": result.real,
            "value_im": result.imag,
            "err": result.err_estimate,
            "terms": result.terms_used,
        }

    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            return list(pool.map(row, grid))
    return [row(x) for x in grid]


def cmd_table(args: argparse.Namespace, cfg: EvalConfig) -> int:
    """Write a table of values as CSV or JSON."""
    rows = table_rows(args, cfg)
    if args.format == "json":
        text = json.dumps(rows, indent=2) + "\n"
    else:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(TABLE_HEADER)
        for row in rows:
            writer.writerow(
                [fixed_digits(row[name]) for name in TABLE_HEADER[:-1]] + [row["terms"]]
            )
        text = buffer.getvalue()
    _write(text, args.out)
    return 0


def cmd_check(args: argparse.Namespace, cfg: EvalConfig) -> int:
    """Run identity checks and write the report."""
    if args.list:
        for case in registry_list():
            flag = " (informational)" if case.informational else ""
            print(f"{case.id}{flag}")
            print(indented(wrapped(case.description, width=66)))
        return 0
    selection = _split_ids(args.only)
    report = run_checks(
        selection=selection or None,
        workers=args.workers,
        q_values=args.q_values,
        points=args.points,
    )
    _write(report.to_json() + "\n", args.out)
    summary = report.summary
    print(
        f"{summary.passed} of {summary.total - summary.informational} checks passed",
        file=sys.stderr,
    )
    return 0 if summary.failed == 0 else EXIT_FAILED_CHECK


def _split_ids(only: Optional[Sequence[str]]) -> List[str]:
    ids: List[str] = []
    for item in only or []:
        ids.extend(part.strip() for part in item.split(",") if part.strip())
    return ids


def cmd_zeta(args: argparse.Namespace, cfg: EvalConfig) -> int:
    """Print a q-zeta value, and its alternating series for s = 1 or 2."""
    Z = QZeta(q=args.q, cfg=cfg)
    value = Z.zeta_q(args.s)
    print(format_complex(value.value))
    if args.alternating:
        alternating = {1: Z.zeta1_alternating, 2: Z.zeta2_alternating}.get(args.s)
        if alternating is None:
            raise DomainError(f"An alternating series is only known for s = 1 or 2, not {args.s}.")
        print(f"alternating={format_complex(alternating().value)}")
    return 0


def compare_log_rows(q: float, xs: Sequence[float], cfg: EvalConfig) -> List[Dict[str, float]]:
    """Compare log x with -log(q) S_q(x)."""
    S = SqFunction(q=q, cfg=cfg)
    rows = []
    for x in xs:
        if not x > 0:
            raise DomainError(f"compare-log needs x > 0, not {x}.")
        scaled = -math.log(q) * S.s_q(x).real
        ln_x = math.log(x)
        rows.append({"x": x, "ln_x": ln_x, "scaled_s_q": scaled, "abs_err": abs(scaled - ln_x)})
    return rows


def cmd_compare_log(args: argparse.Namespace, cfg: EvalConfig) -> int:
    """Print the interpolation of the logarithm by the q-logarithm."""
    rows = compare_log_rows(args.q, args.x, cfg)
    header = ["x", "ln_x", "scaled_s_q", "abs_err"]
    if args.format == "json":
        print(json.dumps(rows, indent=2))
    elif args.format == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fixed_digits(row[name]) for name in header])
    else:
        print(render_table(header, [[format_number(row[name]) for name in header] for row in rows]))
    return 0


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, not {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with its subcommands."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eps", type=float, default=None, help="target tolerance (EULERQ_EPS)")
    common.add_argument(
        "--max-terms", type=int, default=None, help="term limit (EULERQ_MAX_TERMS)"
    )
    common.add_argument(
        "-v", "--verbose", action="count", default=0, help="log more; repeat for debug output"
    )

    parser = argparse.ArgumentParser(
        prog="eulerq", description="Evaluate and check Euler's q-logarithm and its relatives."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    def add_function_options(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("fn", choices=sorted(FUNCTIONS), help="function to evaluate")
        sub.add_argument("--q", type=float, required=True, help="the base")
        sub.add_argument("--t", type=parse_complex, default=None, help="second variable t")
        sub.add_argument("--p", type=float, default=None, help="Jackson base p")
        sub.add_argument("--s", type=int, default=1, help="argument of zeta_q")

    evaluate = commands.add_parser("eval", parents=[common], help="evaluate at one point")
    add_function_options(evaluate)
    evaluate.add_argument("--x", type=parse_complex, default=complex(0), help="the point")
    evaluate.add_argument("--json", action="store_true", help="print a JSON record")
    evaluate.set_defaults(handler=cmd_eval)

    table = commands.add_parser("table", parents=[common], help="tabulate on a real grid")
    add_function_options(table)
    table.add_argument("--from", dest="x_start", type=float, required=True)
    table.add_argument("--to", dest="x_end", type=float, required=True)
    table.add_argument("--steps", type=int, required=True, help="number of grid points, at least 2")
    table.add_argument("--format", choices=["csv", "json"], default="csv")
    table.add_argument("--out", default=None, help="output file, standard output if absent")
    table.add_argument("--workers", type=_positive_int, default=1)
    table.set_defaults(handler=cmd_table)

    check = commands.add_parser("check", parents=[common], help="check registered identities")
    check.add_argument("--only", action="append", help="ids of cases to run, comma separated")
    check.add_argument("--q", dest="q_values", type=float, nargs="+", default=None)
    check.add_argument("--points", type=parse_point, nargs="+", default=None)
    check.add_argument("--out", default=None, help="report file, standard output if absent")
    check.add_argument("--workers", type=_positive_int, default=1)
    check.add_argument("--list", action="store_true", help="list the registered cases")
    check.set_defaults(handler=cmd_check)

    zeta = commands.add_parser("zeta", parents=[common], help="evaluate zeta_q(s)")
    zeta.add_argument("--q", type=float, required=True)
    zeta.add_argument("--s", type=int, default=1)
    zeta.add_argument("--alternating", action="store_true")
    zeta.set_defaults(handler=cmd_zeta)

    compare = commands.add_parser(
        "compare-log", parents=[common], help="compare -log(q) S_q(x) with log x"
    )
    compare.add_argument("--q", type=float, required=True)
    compare.add_argument("--x", type=float, nargs="+", required=True)
    compare.add_argument("--format", choices=["text", "csv", "json"], default="text")
    compare.set_defaults(handler=cmd_compare_log)
    return parser


def configure_logging(verbosity: int) -> None:
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(verbosity, 2)]
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.command == "table" and args.steps < 2:
        parser.print_usage(sys.stderr)
        print("eulerq table: error: --steps must be at least 2", file=sys.stderr)
        return EXIT_USAGE
    configure_logging(args.verbose)
    try:
        cfg = EvalConfig.from_env(eps=args.eps, max_terms=args.max_terms)
        return args.handler(args, cfg)
    except MaxTermsExceeded as e:
        print(f"eulerq: {e}", file=sys.stderr)
        return EXIT_MAX_TERMS
    except ValidationError as e:
        print(f"eulerq: {e.errors()[0]['msg']}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, DivergentSeries, PoleError, UnknownIdentity, QSeriesError) as e:
        print(f"eulerq: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as e:
        print(f"eulerq: {e}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())
