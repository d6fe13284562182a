"""Command-line interface.

Exit codes: 0 success, 1 selftest failure, 2 input validation error,
3 trade-off inequality violation.
"""

import argparse
import csv
import io
import json
import math
import re
import sys
import warnings

import numpy as np

from . import geometry, metrology
from .errors import GridSpecError
from .linalg import load_matrix
from .models import MODEL_NAMES, DiffScheme, build_model
from .selftest import run_selftest
from .states import load_povm

EXIT_OK, EXIT_SELFTEST, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2, 3
SLACK_TOL = 1e-9


def fmt(x):
    return format(float(x), ".17g")


def dump_json(obj):
    """JSON text with every float written to 17 significant digits."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError(f"cannot serialize non-finite value {x}")
        return fmt(x)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{dump_json(str(k))}: {dump_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dump_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _key_value(text):
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    key, value = text.split("=", 1)
    return key.strip(), value.strip()


def _add_model_args(p):
    p.add_argument("--model", required=True, choices=MODEL_NAMES)
    p.add_argument("--model-arg", action="append", type=_key_value, default=[], metavar="KEY=VALUE")
    p.add_argument("--rho0", help="base state file (unitary-family)")
    p.add_argument("--g1", help="first generator file (unitary-family)")
    p.add_argument("--g2", help="second generator file (unitary-family)")
    for name in ("theta", "phi", "alpha", "beta"):
        p.add_argument(f"--{name}", type=float, help="coordinate in radians")
    p.add_argument("--scheme", choices=("central", "richardson"), help="finite-difference method")
    p.add_argument("--step", type=float, help="finite-difference step")


def _model(args):
    files = {}
    for key in ("rho0", "g1", "g2"):
        path = getattr(args, key)
        files[key] = load_matrix(path) if path else None
    return build_model(args.model, dict(args.model_arg), **files)


def _scheme(args, default=DiffScheme()):
    return DiffScheme(args.scheme or default.method, args.step or default.step)


def _coordinates(args, model, skip=()):
    values = {}
    for name in model.param_names:
        if name in skip:
            continue
        v = getattr(args, name, None)
        if v is None:
            raise ValueError(f"--{name} is required for model {model.name}")
        values[name] = v
    return values


def _point(model, values):
    return np.array([values[name] for name in model.param_names], dtype=float)


def cmd_report(args, out):
    model = _model(args)
    theta = _point(model, _coordinates(args, model))
    report = geometry.geometry_report(model, theta, _scheme(args))
    out.write(dump_json(report.to_json()) + "\n")
    return EXIT_OK


def parse_grid(spec):
    """``name=lo:hi:count`` items separated by commas."""
    axes = []
    for item in spec.split(","):
        m = re.fullmatch(r"\s*(\w+)\s*=\s*([^:]+):([^:]+):(\d+)\s*", item)
        if not m:
            raise GridSpecError(f"malformed grid item {item!r}; expected name=lo:hi:count")
        try:
            lo, hi = float(m.group(2)), float(m.group(3))
        except ValueError:
            raise GridSpecError(f"grid item {item!r} has non-numeric bounds") from None
        name, count = m.group(1), int(m.group(4))
        if count < 1:
            raise GridSpecError(f"grid axis {name} has no points")
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise GridSpecError(f"grid axis {name} has non-finite bounds")
        axes.append((name, lo, hi, count))
    if len({a[0] for a in axes}) != len(axes):
        raise GridSpecError("grid axis repeated")
    return axes


def grid_values(lo, hi, count, sampling):
    if sampling == "mid":
        return lo + (np.arange(count) + 0.5) * (hi - lo) / count
    return np.linspace(lo, hi, count)


_QUANTITY = re.compile(r"(qfi|qgt_re|qgt_im|curvature)\[(\d+)\]\[(\d+)\]")


def _quantity(report, quantity):
    m = _QUANTITY.fullmatch(quantity)
    if not m:
        raise ValueError(f"unknown quantity {quantity!r}")
    table = {
        "qfi": report.qfi,
        "qgt_re": report.qgt.real,
        "qgt_im": report.qgt.imag,
        "curvature": report.curvature,
    }[m.group(1)]
    i, j = int(m.group(2)), int(m.group(3))
    if i >= table.shape[0] or j >= table.shape[1]:
        raise ValueError(f"index out of range in {quantity!r}")
    return table[i, j]


def cmd_scan(args, out):
    model = _model(args)
    axes = parse_grid(args.grid)
    names = [a[0] for a in axes]
    unknown = set(names) - set(model.param_names)
    if unknown:
        raise GridSpecError(f"grid names {sorted(unknown)} are not parameters of {model.name}")
    fixed = _coordinates(args, model, skip=names)
    scheme = _scheme(args)
    if not _QUANTITY.fullmatch(args.quantity):
        raise ValueError(f"unknown quantity {args.quantity!r}")
    grids = [grid_values(lo, hi, n, args.sampling) for _, lo, hi, n in axes]
    rows = []
    for combo in np.array(np.meshgrid(*grids, indexing="ij")).reshape(len(grids), -1).T:
        values = dict(fixed, **dict(zip(names, combo)))
        report = geometry.geometry_report(model, _point(model, values), scheme)
        rows.append([fmt(v) for v in combo] + [fmt(_quantity(report, args.quantity))])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(names + ["value"])
    writer.writerows(rows)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        out.write(buf.getvalue())
    return EXIT_OK


def chern_integral(model, resolution, scheme=None):
    """Midpoint-rule integral of the (theta, phi) curvature over the sphere chart, over 2 pi."""
    if model.param_count != 2 or tuple(model.param_names) != ("theta", "phi"):
        raise ValueError(f"model {model.name} is not a (theta, phi) family")
    if resolution < 1:
        raise ValueError("resolution must be positive")
    d_theta = math.pi / resolution
    d_phi = 2 * math.pi / resolution
    thetas = (np.arange(resolution) + 0.5) * d_theta
    phis = (np.arange(resolution) + 0.5) * d_phi
    total = 0.0
    for th in thetas:
        row = geometry.curvature_batch(model, [(th, ph) for ph in phis], scheme=scheme)
        total += math.fsum(row)
    return total * d_theta * d_phi / (2 * math.pi)


def cmd_chern(args, out):
    model = _model(args)
    value = chern_integral(model, args.resolution, _scheme(args))
    if args.json:
        out.write(dump_json({"chern": value, "resolution": args.resolution}) + "\n")
    else:
        out.write(fmt(value) + "\n")
    return EXIT_OK


def cmd_tradeoff(args, out):
    model = _model(args)
    povm = load_povm(args.povm)
    theta = _point(model, _coordinates(args, model))
    axes = tuple(int(a) for a in args.axes.split(","))
    if len(axes) != 2:
        raise ValueError("--axes takes two comma-separated indices")
    scheme = _scheme(args, metrology.DEFAULT_SCHEME)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            audit = metrology.tradeoff_audit(model, povm, theta, axes, scheme)
        except ArithmeticError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_VIOLATION
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    for flag in audit.flags:
        print(f"warning: {flag}", file=sys.stderr)
    out.write(dump_json(audit.to_json()) + "\n")
    return EXIT_VIOLATION if audit.min_slack < -SLACK_TOL else EXIT_OK


def cmd_selftest(args, out):
    if args.trials == 0:
        print("warning: zero trials requested; all checks pass vacuously", file=sys.stderr)
    results = run_selftest(args.seed, args.trials, args.tol)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        out.write(f"{status}  {r.name:<{width}}  worst={r.worst:.3e}  tol={r.tol:.1e}\n")
    failed = sum(not r.passed for r in results)
    out.write(f"{len(results) - failed}/{len(results)} checks passed (seed {args.seed}, trials {args.trials})\n")
    return EXIT_SELFTEST if failed else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="mixcurv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("report", help="geometry report at one parameter point")
    _add_model_args(p)
    p.add_argument("--json", action="store_true", help="JSON output (the default)")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("scan", help="tabulate a quantity over a parameter grid")
    _add_model_args(p)
    p.add_argument("--grid", required=True, help="e.g. theta=0:3.14159:64,phi=0:6.28318:64")
    p.add_argument("--quantity", default="curvature[0][1]")
    p.add_argument("--sampling", choices=("mid", "node"), default="mid")
    p.add_argument("--out", help="CSV output path (default: standard output)")
    p.add_argument("--csv", action="store_true", help="CSV output (the default)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("chern", help="integrate the curvature over the Bloch-sphere chart")
    _add_model_args(p)
    p.add_argument("--resolution", type=int, default=200)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_chern)

    p = sub.add_parser("tradeoff", help="audit the regret trade-off for a POVM")
    _add_model_args(p)
    p.add_argument("--povm", required=True)
    p.add_argument("--axes", default="0,1")
    p.add_argument("--json", action="store_true", help="JSON output (the default)")
    p.set_defaults(func=cmd_tradeoff)

    p = sub.add_parser("selftest", help="randomized cross-checks between independent routes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--tol", type=float, help="override every check tolerance")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (ValueError, OSError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
