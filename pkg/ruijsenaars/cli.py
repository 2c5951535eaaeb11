"""Command line front end.

    $ ruijsenaars eval hyp-gamma u=0.4+0.1i w1=1 w2=1.41421356 --json
    $ ruijsenaars verify --all --exclude q-commutativity --workers 4
    $ ruijsenaars verify --list
    $ ruijsenaars limits gamma-lim1 --deltas 0.04,0.02,0.01,0.005,0.0025
    $ ruijsenaars sweep gamma-lim1 delta=0.05:0.005:8 --format csv
    $ ruijsenaars sweep weight.SP_cr u=-2:2:41 k=0 l=0 h=-1.2i

Data goes to stdout (JSON lines, CSV or a table); logging and progress bars go
to stderr. Exit codes: 0 success, 2 domain error, 3 numerical failure or a
failing check, 64 usage error.
"""
import re
import sys
import csv
import json
import math
import time
import logging
import argparse
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import numpy as np
from tqdm import tqdm
from edflow import get_logger
from edflow.util import retrieve

from ruijsenaars import get_function
from ruijsenaars.config import load_config
from ruijsenaars.errors import DomainError, NumericalError, RuijsenaarsException
from ruijsenaars.functions.evaluators import PARAMETERS, TEXT_KEYS
from ruijsenaars.numerics import QuadSpec
from ruijsenaars.report import jsonable
from ruijsenaars.verify.catalog import CATALOG
from ruijsenaars.verify.limits import LIMITS, limit_ratio, limit_schedule
from ruijsenaars.verify.runner import run_suite

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_NUMERICAL = 3
EXIT_USAGE = 64

# sweep targets that fix a string parameter: weight.SP_cr, hamiltonian-apply.hyp
SELECTORS = {"weight": "w", "hamiltonian-apply": "model"}

_NUMBER = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_INTEGER = re.compile(r"^[+-]?\d+$")
_REAL = re.compile(r"^[+-]?{}$".format(_NUMBER))
_IMAGINARY = re.compile(r"^([+-]?(?:{})?)i$".format(_NUMBER))
_COMPLEX = re.compile(r"^([+-]?{0})([+-](?:{0})?)i$".format(_NUMBER))


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _imaginary_part(text):
    if text in ("", "+"):
        return 1.0
    if text == "-":
        return -1.0
    return float(text)


def parse_literal(text):
    """Number literal: ``a``, ``bi``, ``a+bi`` or ``a-bi``; integers stay int."""
    text = text.strip()
    if _INTEGER.match(text):
        return int(text)
    if _REAL.match(text):
        return float(text)
    match = _IMAGINARY.match(text)
    if match:
        return complex(0.0, _imaginary_part(match.group(1)))
    match = _COMPLEX.match(text)
    if match:
        return complex(float(match.group(1)), _imaginary_part(match.group(2)))
    raise UsageError("malformed number '{}', expected a, bi, a+bi or a-bi".format(text))


def parse_value(key, text):
    if key in TEXT_KEYS:
        return text
    return parse_literal(text)


def _split(assignment):
    if "=" not in assignment:
        raise UsageError("expected key=value, got '{}'".format(assignment))
    key, text = assignment.split("=", 1)
    if not key:
        raise UsageError("missing key in '{}'".format(assignment))
    return key, text


def parse_assignments(assignments, allowed):
    params = {}
    for assignment in assignments:
        key, text = _split(assignment)
        if key not in allowed:
            raise UsageError("unknown parameter '{}', expected one of {}".format(key, ", ".join(allowed)))
        params[key] = parse_value(key, text)
    return params


def parse_axis(key, text):
    """``start:stop:steps`` as an array of ``steps`` evenly spaced values."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError("axis '{}' must read start:stop:steps".format(key))
    start, stop = parse_literal(parts[0]), parse_literal(parts[1])
    steps = parse_literal(parts[2])
    if not isinstance(steps, int):
        raise UsageError("axis '{}' needs an integer step count".format(key))
    if steps < 1:
        raise UsageError("axis '{}' is empty".format(key))
    values = np.linspace(complex(start), complex(stop), steps)
    if np.all(values.imag == 0):
        values = values.real
    return values


def format_literal(z):
    z = complex(z)
    if z.imag == 0:
        return repr(z.real)
    if z.real == 0:
        return "{!r}i".format(z.imag)
    return "{!r}{}{!r}i".format(z.real, "-" if z.imag < 0 else "+", abs(z.imag))


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, (complex, np.complexfloating)):
        return format_literal(value)
    if isinstance(value, (list, tuple, dict)):
        return json.dumps(jsonable(value))
    return str(value)


def emit(rows, fmt, columns=None, out=None):
    out = out if out is not None else sys.stdout
    rows = list(rows)
    if fmt == "json":
        for row in rows:
            out.write(json.dumps(jsonable(row)) + "\n")
        return
    columns = columns or (list(rows[0]) if rows else [])
    cells = [[_cell(row.get(c)) for c in columns] for row in rows]
    if fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(cells)
        return
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]
    out.write("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip() + "\n")
    for r in cells:
        out.write("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() + "\n")


def _quad(args, config):
    if args.abs_tol is None and args.rel_tol is None:
        return None
    quad = QuadSpec.from_config(config)
    if args.abs_tol is not None:
        quad = replace(quad, abs_tol=args.abs_tol)
    if args.rel_tol is not None:
        quad = replace(quad, rel_tol=args.rel_tol)
    return quad


def _with_periods(function, params, config):
    if "w1" in PARAMETERS[function]:
        for key in ("w1", "w2"):
            params.setdefault(key, retrieve(config, "periods/{}".format(key)))
    return params


def _progress(args):
    return not args.no_progress and sys.stderr.isatty()


def _check_ids(ids):
    known = list(CATALOG) + list(LIMITS)
    unknown = [i for i in ids if i not in known]
    if unknown:
        raise UsageError("unknown check(s) {}; known ids: {}".format(", ".join(unknown), ", ".join(known)))


REPORT_COLUMNS = ["id", "pass", "lhs", "rhs", "abs_residual", "rel_residual", "tolerance", "ms", "warnings"]


def _report_rows(reports, fmt):
    if fmt == "json":
        return [r.to_dict() for r in reports]
    return [{"id": r.id, "pass": r.passed, "lhs": r.lhs, "rhs": r.rhs, "abs_residual": r.abs_residual,
             "rel_residual": r.rel_residual, "tolerance": r.tolerance, "ms": round(r.ms, 3),
             "warnings": "; ".join(r.warnings)} for r in reports]


def _finish_suite(suite, fmt):
    emit(_report_rows(suite.reports, fmt), fmt, REPORT_COLUMNS)
    sys.stderr.write("{} passed, {} failed (seed {}, {:.0f} ms)\n".format(
        suite.passed, suite.failed, suite.seed, suite.ms))
    return EXIT_OK if suite.ok else EXIT_NUMERICAL


def cmd_eval(args):
    if args.function not in PARAMETERS:
        raise UsageError("unknown function '{}', expected one of {}".format(
            args.function, ", ".join(PARAMETERS)))
    config = load_config(args.config)
    params = parse_assignments(args.params, PARAMETERS[args.function])
    params = _with_periods(args.function, params, config)
    start = time.time()
    value, abs_err = get_function(args.function)(params, _quad(args, config))
    value = complex(value)
    row = {"value_re": value.real, "value_im": value.imag, "abs_err": float(abs_err),
           "ms": round(1000 * (time.time() - start), 3)}
    emit([row], args.format)
    return EXIT_OK


def catalog_rows():
    rows = [{"id": i.id, "kind": "identity", "family": i.family, "anchor": i.anchor,
             "flags": ",".join(f for f, on in (("slow", i.slow), ("shared", i.shared), ("optional", i.optional))
                               if on)}
            for i in CATALOG.values()]
    rows += [{"id": limit.id, "kind": "limit", "family": "limit", "anchor": limit.anchor, "flags": ""}
             for limit in LIMITS.values()]
    return rows


def cmd_verify(args):
    if args.list:
        emit(catalog_rows(), args.format, ["id", "kind", "family", "anchor", "flags"])
        return EXIT_OK
    if not args.ids and not args.all:
        raise UsageError("name the checks to run or pass --all")
    _check_ids(list(args.ids) + list(args.exclude))
    config = load_config(args.config)
    seed = args.seed if args.seed is not None else int(retrieve(config, "seed", default=0))
    workers = args.workers if args.workers is not None else int(retrieve(config, "workers", default=1))
    if args.points < 1:
        raise UsageError("--points must be positive")
    suite = run_suite(selection=None if args.all else args.ids, workers=workers, seed=seed, points=args.points,
                      exclude=args.exclude, include_optional=args.include_optional, quad=_quad(args, config),
                      tolerance=args.tol, config=config, progress=_progress(args))
    return _finish_suite(suite, args.format)


def _deltas(text):
    try:
        deltas = [float(d) for d in text.split(",") if d.strip()]
    except ValueError:
        raise UsageError("--deltas must be comma separated floats, got '{}'".format(text))
    if not deltas:
        raise UsageError("--deltas is empty")
    return deltas


def cmd_limits(args):
    ids = args.ids or list(LIMITS)
    unknown = [i for i in ids if i not in LIMITS]
    if unknown:
        raise UsageError("unknown limit(s) {}; known limits: {}".format(", ".join(unknown), ", ".join(LIMITS)))
    config = load_config(args.config)
    if args.deltas:
        deltas = _deltas(args.deltas)
        for id in ids:
            config["limits"][id] = deltas
    workers = args.workers if args.workers is not None else int(retrieve(config, "workers", default=1))
    suite = run_suite(selection=ids, workers=workers, tolerance=args.tol, config=config,
                      progress=_progress(args))
    return _finish_suite(suite, args.format)


def _sweep_target(target):
    """(kind, name, fixed params, accepted keys) for a sweep target."""
    if target in LIMITS:
        return "limit", target, {}, ("delta", "psi") + tuple(LIMITS[target].defaults)
    name, _, selector = target.partition(".")
    if name in PARAMETERS:
        fixed = {}
        if selector:
            if name not in SELECTORS:
                raise UsageError("'{}' takes no selector".format(name))
            fixed[SELECTORS[name]] = selector
        return "function", name, fixed, PARAMETERS[name]
    raise UsageError("unknown sweep target '{}'; expected a limit id or one of {}".format(
        target, ", ".join(PARAMETERS)))


def evaluate_point(task):
    """One sweep row; failures at a point are recorded in the row."""
    kind, name, params, schedule, quad = task
    start = time.time()
    err, message, code = None, "", EXIT_OK
    try:
        if kind == "limit":
            rest = {k: v for k, v in params.items() if k != "delta"}
            value = limit_ratio(name, float(params["delta"]), rest, schedule)
        else:
            value, err = get_function(name)(params, quad)
            err = float(err)
    except RuijsenaarsException as exc:
        value = complex(math.nan, math.nan)
        message = "{}: {}".format(type(exc).__name__, exc)
        code = EXIT_NUMERICAL if isinstance(exc, NumericalError) else EXIT_DOMAIN
    value = complex(value)
    return {"value_re": value.real, "value_im": value.imag, "abs_err": err,
            "ms": round(1000 * (time.time() - start), 3), "message": message}, code


def cmd_sweep(args):
    kind, name, fixed, allowed = _sweep_target(args.target)
    config = load_config(args.config)
    axes, assignments = [], []
    for assignment in args.params:
        key, text = _split(assignment)
        (axes if ":" in text else assignments).append((key, text))
    if len(axes) != 1:
        raise UsageError("a sweep needs exactly one axis name=start:stop:steps, got {}".format(len(axes)))
    axis, axis_text = axes[0]
    if axis not in allowed or axis in fixed:
        raise UsageError("unknown axis '{}', expected one of {}".format(axis, ", ".join(allowed)))
    if kind == "limit" and axis != "delta":
        raise UsageError("limit sweeps run along delta")
    values = parse_axis(axis, axis_text)
    if kind == "limit" and np.iscomplexobj(values):
        raise UsageError("delta must be real")
    params = dict(fixed, **parse_assignments(["{}={}".format(k, t) for k, t in assignments], allowed))
    if kind == "function":
        params = _with_periods(name, params, config)
        schedule = None
    else:
        schedule = limit_schedule(name, params)
    quad = _quad(args, config)
    tasks = [(kind, name, dict(params, **{axis: v.item()}), schedule, quad) for v in values]
    workers = args.workers if args.workers is not None else int(retrieve(config, "workers", default=1))
    logger.info("Sweeping {} over {} points of {} with {} worker(s)".format(name, len(tasks), axis, workers))

    bar = tqdm(total=len(tasks), desc="sweep", file=sys.stderr, disable=not _progress(args))
    results = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            for result in executor.map(evaluate_point, tasks):
                results.append(result)
                bar.update(1)
    else:
        for task in tasks:
            results.append(evaluate_point(task))
            bar.update(1)
    bar.close()

    if np.iscomplexobj(values):
        axis_columns = ["{}_re".format(axis), "{}_im".format(axis)]
        axis_cells = [{axis_columns[0]: v.real, axis_columns[1]: v.imag} for v in values]
    else:
        axis_columns = [axis]
        axis_cells = [{axis: float(v)} for v in values]
    rows = [dict(cell, **row) for cell, (row, _) in zip(axis_cells, results)]
    emit(rows, args.format, axis_columns + ["value_re", "value_im", "abs_err", "ms", "message"])
    return max(code for _, code in results)


def cmd_list(args):
    rows = []
    if args.what in ("all", "functions"):
        rows += [{"kind": "function", "name": f, "detail": " ".join(keys)} for f, keys in PARAMETERS.items()]
    if args.what in ("all", "identities"):
        rows += [{"kind": "identity", "name": i.id, "detail": i.anchor} for i in CATALOG.values()]
    if args.what in ("all", "limits"):
        rows += [{"kind": "limit", "name": limit.id, "detail": limit.anchor} for limit in LIMITS.values()]
    emit(rows, args.format, ["kind", "name", "detail"])
    return EXIT_OK


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG on stderr")
    common.add_argument("--config", default=None, help="YAML file overriding configs/defaults.yaml")
    common.add_argument("--format", choices=("json", "csv", "table"), default="table")
    common.add_argument("--json", dest="format", action="store_const", const="json", help="Same as --format json")
    common.add_argument("--no-progress", action="store_true", help="Disable the progress bar")

    quad = _Parser(add_help=False)
    quad.add_argument("--abs-tol", type=float, default=None, help="Quadrature absolute tolerance")
    quad.add_argument("--rel-tol", type=float, default=None, help="Quadrature relative tolerance")

    parallel = _Parser(add_help=False)
    parallel.add_argument("--workers", type=int, default=None, help="Worker processes (default from config)")

    parser = _Parser(prog="ruijsenaars", description="Special functions of the relativistic Calogero-Moser "
                                                     "models: evaluation, identity checks and limits.")
    commands = parser.add_subparsers(dest="name", metavar="command")
    commands.required = True

    p = commands.add_parser("eval", parents=[common, quad], help="Evaluate one function")
    p.add_argument("function", help=", ".join(PARAMETERS))
    p.add_argument("params", nargs="*", metavar="key=value")
    p.set_defaults(command=cmd_eval)

    p = commands.add_parser("verify", parents=[common, quad, parallel], help="Run identity and limit checks")
    p.add_argument("ids", nargs="*", metavar="id")
    p.add_argument("--all", action="store_true", help="Run the whole catalog")
    p.add_argument("--exclude", nargs="+", default=[], metavar="id")
    p.add_argument("--include-optional", action="store_true", help="With --all, also run optional checks")
    p.add_argument("--list", action="store_true", help="Print the catalog and exit")
    p.add_argument("--tol", type=float, default=None, help="Tolerance for every check")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--points", type=int, default=1, help="Parameter draws per identity")
    p.set_defaults(command=cmd_verify)

    p = commands.add_parser("limits", parents=[common, parallel], help="Run degeneration limits")
    p.add_argument("ids", nargs="*", metavar="id")
    p.add_argument("--deltas", default=None, help="Comma separated delta schedule")
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(command=cmd_limits)

    p = commands.add_parser("sweep", parents=[common, quad, parallel], help="Tabulate along one axis")
    p.add_argument("target", help="limit id, function, weight.<name> or hamiltonian-apply.<model>")
    p.add_argument("params", nargs="*", metavar="key=value")
    p.set_defaults(command=cmd_sweep)

    p = commands.add_parser("list", parents=[common], help="List functions, identities and limits")
    p.add_argument("what", nargs="?", choices=("all", "functions", "identities", "limits"), default="all")
    p.set_defaults(command=cmd_list)
    return parser


def configure_logging(verbosity):
    """Send every package logger to stderr at the level chosen by -v; stdout carries data only."""
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(asctime)s %(name)s %(levelname)s: %(message)s"))
    names = [n for n in logging.root.manager.loggerDict if n.split(".")[0] == "ruijsenaars"]
    for name in names + ["ruijsenaars"]:
        package_logger = logging.getLogger(name)
        package_logger.handlers = [handler]
        package_logger.propagate = False
        package_logger.setLevel(level)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        configure_logging(args.verbose)
        return args.command(args)
    except UsageError as exc:
        sys.stderr.write("ruijsenaars: {}\n".format(exc))
        return EXIT_USAGE
    except DomainError as exc:
        sys.stderr.write("ruijsenaars: {}: {}\n".format(type(exc).__name__, exc))
        return EXIT_DOMAIN
    except NumericalError as exc:
        sys.stderr.write("ruijsenaars: {}: {}\n".format(type(exc).__name__, exc))
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
