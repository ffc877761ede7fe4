"""Command-line interface: ``rmdom solve | converge | compare``.

Exit codes: 0 success (and a clean comparison), 1 comparison found
discrepancies, 2 usage or data error, 3 numerical failure.
"""

import argparse
import logging
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from ._kernels import BACKEND
from .accel import DEFAULT_SCHEDULE, converge, relative_change
from .bench.runner import PRESETS, BenchmarkConfig, default_start, make_problem, preset
from .bench.tables import ReferenceTable, as_reference, compare, emit, load_reference
from .core import SolverError
from .phase import from_name
from .solver import solve

EXIT_OK, EXIT_DIFF, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

log = logging.getLogger("rmdom")


def _floats(text):
    return tuple(float(v) for v in text.split(",") if v.strip())


def _labels(text):
    return tuple(v.strip() for v in text.split(",") if v.strip())


def _problem_args(p):
    p.add_argument("--preset", choices=sorted(PRESETS), help="published benchmark setup (table name)")
    p.add_argument("--tau1", type=float, help="optical thickness (default 64)")
    p.add_argument("--omega", type=float, help="single-scatter albedo (default 1)")
    p.add_argument("--phase", help="isotropic | linear:<beta1> | cloudc1 | coefficient file")
    p.add_argument("--quad", choices=("radau", "gauss"), help="half-range rule (default radau)")
    p.add_argument("--incident", choices=("beam", "isotropic"),
                   help="beam: I(0,mu)=delta(mu-1)/2; isotropic: I(0,mu)=1")
    p.add_argument("--mu-edits", type=_floats, help="comma-separated cosine magnitudes in [0,1]")
    p.add_argument("--tau-edits", type=_labels,
                   help="comma-separated depths; 'a/b' is a fraction of tau1")
    p.add_argument("--tau-fractions", action="store_true",
                   help="read every --tau-edits entry as a fraction of tau1")
    p.add_argument("--component", choices=("diffuse", "total"), default="diffuse")
    p.add_argument("--places", type=int, help="significant digits (default 8, or the reference's)")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--reference", help="compare against Ia | Ib | IIa | IIb or a reference CSV")
    p.add_argument("-o", "--output", help="write the table here instead of stdout")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rmdom",
        description="Response-matrix discrete-ordinates slab solver and benchmark harness.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND})")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve at a single quadrature order")
    _problem_args(p)
    p.add_argument("--n", type=int, help="half-range quadrature order")

    p = sub.add_parser("converge", help="sweep the quadrature order until edits settle")
    _problem_args(p)
    p.add_argument("--n-start", type=int)
    p.add_argument("--n-step", type=int, default=DEFAULT_SCHEDULE[1])
    p.add_argument("--n-max", type=int, default=DEFAULT_SCHEDULE[2])
    p.add_argument("--tol", type=float, default=5e-8)
    p.add_argument("--accelerated", action="store_true",
                   help="print Wynn-epsilon extrapolated edits instead of the last order")

    p = sub.add_parser("compare", help="compare a computed CSV with a reference table")
    p.add_argument("computed", help="CSV written by 'rmdom solve --format csv'")
    p.add_argument("--reference", required=True, help="Ia | Ib | IIa | IIb or a reference CSV")
    p.add_argument("--places", type=int)
    return parser


def _config(args):
    if args.preset:
        cfg = preset(args.preset)
    else:
        cfg = BenchmarkConfig()
    changes = {}
    for name, field in (("tau1", "tau1"), ("omega", "omega"), ("phase", "phase_source"),
                        ("quad", "quad"), ("incident", "incident"), ("mu_edits", "edit_mus")):
        value = getattr(args, name)
        if value is not None:
            changes[field] = value
    if args.tau_edits is not None:
        changes["edit_taus"] = args.tau_edits
        changes["taus_are_fractions"] = args.tau_fractions
    changes["component"] = args.component
    if getattr(args, "n", None) is not None:
        changes["n"] = args.n
    return replace(cfg, **changes)


def _write(text, path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _finish(table, args, component):
    ref = load_reference(args.reference) if args.reference else None
    places = args.places or (ref.places if ref is not None else 8)
    _write(emit(table, args.format, args.places or 8, component), args.output)
    if ref is None:
        return EXIT_OK
    result = compare(table, ref, places, component)
    print(result.summary(), file=sys.stderr)
    return EXIT_OK if result.clean else EXIT_DIFF


def _describe(table):
    note = f"N={table.order} directions={table.info.get('directions')} rcond={table.info.get('rcond', float('nan')):.2e}"
    if table.clamped:
        note += f" omega clamped {table.omega} -> {table.omega_used!r}"
    print(note, file=sys.stderr)


def cmd_solve(args):
    cfg = _config(args)
    if cfg.n is None:
        raise ValueError("solve needs --n (or a --preset)")
    problem = make_problem(cfg)
    table = solve(problem, cfg.n, cfg.edit_mus, cfg.depths(), quad=cfg.quad,
                  depth_labels=cfg.labels())
    _describe(table)
    return _finish(table, args, cfg.component)


def cmd_converge(args):
    cfg = _config(args)
    phase = from_name(cfg.phase_source)
    n_start = args.n_start if args.n_start is not None else default_start(phase, DEFAULT_SCHEDULE[0])
    schedule = (n_start, args.n_step, args.n_max)
    problem = make_problem(cfg, phase)
    report = converge(problem, cfg.edit_mus, cfg.depths(), args.tol, schedule=schedule,
                      quad=cfg.quad, component=cfg.component, depth_labels=cfg.labels())
    for n, grid, prev in zip(report.orders[1:], report.edit_snapshots[1:], report.edit_snapshots):
        print(f"N={n:4d}  max relative change {relative_change(grid, prev):.3e}", file=sys.stderr)
    table = report.final
    _describe(table)
    status = "converged" if report.converged else "NOT converged"
    print(f"{status}: final relative change {report.final_rel_err:.3e} (tol {args.tol:g})",
          file=sys.stderr)
    out = table
    if args.accelerated and report.accelerated is None:
        print("fewer than 3 orders in the sweep; printing the last order unaccelerated",
              file=sys.stderr)
    elif args.accelerated:
        base = as_reference(table, cfg.component)
        out = ReferenceTable(base.mus, base.depths, report.accelerated, base.places, base.tau1,
                             base.depth_labels, "wynn-epsilon", dict(base.meta))
    code = _finish(out, args, cfg.component)
    if not report.converged:
        return EXIT_NUMERIC
    return code


def cmd_compare(args):
    ref = load_reference(args.reference)
    computed = load_reference(args.computed, default_tau1=ref.tau1)
    places = args.places or ref.places
    result = compare(computed, ref, places)
    print(result.summary())
    return EXIT_OK if result.clean else EXIT_DIFF


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    handler = {"solve": cmd_solve, "converge": cmd_converge, "compare": cmd_compare}[args.command]
    try:
        with np.errstate(over="raise", invalid="raise"):
            return handler(args)
    except SolverError as exc:
        print(f"rmdom: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except FloatingPointError as exc:
        print(f"rmdom: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, KeyError, OSError) as exc:
        print(f"rmdom: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
