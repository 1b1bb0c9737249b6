"""Command line entry point: ``spinladder simulate|sweep|check|plot-script``.

Exit codes: 0 success, 1 validation error, 2 convergence failure,
3 acceptance failure, 4 I/O error.  Failures also print one
``spinladder-error code=<n> kind=<kind> message=<text>`` line on stderr.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from datetime import datetime
from pathlib import Path

from . import __version__
from .analysis import observables, reversal_period, sweep
from .config import ConfigError, config_to_dict, load_config, run_simulation
from .integrator import ConvergenceError, convergence_report
from .io import emit_plot_script, write_csv, write_manifest, write_sweep_csv
from .spin import make_operators

EXIT_OK, EXIT_VALIDATION, EXIT_CONVERGENCE, EXIT_ACCEPTANCE, EXIT_IO = 0, 1, 2, 3, 4
CONVERGENCE_TOL = 1e-6


class _Failure(Exception):
    def __init__(self, code, kind, message):
        super().__init__(message)
        self.code, self.kind = code, kind


def _out_dir(arg, config, label) -> Path:
    if arg:
        out = Path(arg)
    elif config.output_dir:
        out = Path(config.output_dir)
    else:
        stamp = datetime.now().strftime("%Y%m%d-%H%M%S")
        safe = "".join(ch if ch.isalnum() or ch in "-_" else "_" for ch in label)
        out = Path("runs") / f"{stamp}-{safe}"
    out.mkdir(parents=True, exist_ok=True)
    return out


def _derived(series, protocol) -> dict:
    s = protocol.model.s
    out = {"min_sz": float(series.sz.min()), "min_sz_reduced": float(series.sz.min() / s),
           "max_abs_sx": float(abs(series.sx).max())}
    try:
        est = reversal_period(series, protocol.effective_amplitude)
        out.update(period=est.period, first_minimum_time=est.first_minimum_time)
    except ValueError as exc:
        out.update(period=None, period_error=str(exc))
    return out


def cmd_simulate(args) -> int:
    config = load_config(args.config)
    start = time.perf_counter()
    protocol, traj = run_simulation(config)
    series = observables(traj, make_operators(config.spin))
    conv = None
    if not args.no_convergence:
        conv = convergence_report(protocol, config.initial_state(), traj.config, reference=traj)
    out = _out_dir(args.out, config, protocol.label)
    csv_path = out / "trajectory.csv"
    write_csv(series, csv_path, populations=args.populations)
    manifest = {
        "config": config_to_dict(config),
        "protocol": protocol.label,
        "frequencies": list(protocol.frequency_list),
        "dt": traj.config.dt,
        "record_stride": traj.config.record_stride,
        "version": __version__,
        "wall_time_s": time.perf_counter() - start,
        "convergence_report": conv,
        "derived": _derived(series, protocol),
    }
    write_manifest(out / "manifest.json", manifest, [csv_path])
    print(f"wrote {csv_path} and {out / 'manifest.json'}")
    if conv is not None and conv > CONVERGENCE_TOL:
        raise _Failure(EXIT_CONVERGENCE, "convergence",
                       f"dt vs dt/2 deviation {conv:.3e} exceeds {CONVERGENCE_TOL:g}; pin a smaller dt")
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = load_config(args.config)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"--values: malformed number list {args.values!r}") from None
    if not values:
        raise ConfigError("--values is empty")
    start = time.perf_counter()
    rows = sweep(config, args.axis, values, max_workers=args.workers)
    out = _out_dir(args.out, config, f"sweep-{args.axis}")
    table = out / "sweep.csv"
    write_sweep_csv(rows, args.axis, table)
    for i, row in enumerate(rows):
        row_dir = out / f"row{i:03d}"
        row_dir.mkdir(exist_ok=True)
        payload = {"axis": args.axis, "value": row.value, "base_config": config_to_dict(config),
                   "version": __version__, "period": row.period.__dict__ if row.period else None,
                   "min_sz_reduced": row.min_sz_reduced, "max_norm_error": row.max_norm_error,
                   "max_s_total_error": row.max_s_total_error, "error": row.error}
        write_manifest(row_dir / "manifest.json", payload, [])
    write_manifest(out / "manifest.json", {"axis": args.axis, "values": values, "version": __version__,
                                           "wall_time_s": time.perf_counter() - start,
                                           "base_config": config_to_dict(config)}, [table])
    for row in rows:
        period = f"{row.period.period:.4f}" if row.period else "-"
        print(f"{args.axis}={row.value:g} period={period} min_sz/S={row.min_sz_reduced} error={row.error}")
    print(f"wrote {table}")
    return EXIT_OK


def cmd_check(args) -> int:
    from .acceptance import run_suite

    only = {int(x) for x in args.only.split(",")} if args.only else None
    results = run_suite(quick=args.quick, only=only)
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    if failed:
        raise _Failure(EXIT_ACCEPTANCE, "acceptance", f"failed criteria {','.join(map(str, failed))}")
    return EXIT_OK


def cmd_plot_script(args) -> int:
    columns = [c.strip() for c in args.columns.split(",") if c.strip()]
    text = emit_plot_script(args.csv, columns, normalize_by_s=not args.raw, s=args.s)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spinladder", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true", help="log step-size adjustments")
    sub = p.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one configuration; writes trajectory.csv and manifest.json")
    sim.add_argument("--config", required=True)
    sim.add_argument("--out")
    sim.add_argument("--populations", action="store_true", help="add p_<m> columns")
    sim.add_argument("--no-convergence", action="store_true", help="skip the dt/2 comparison run")
    sim.set_defaults(func=cmd_simulate)

    sw = sub.add_parser("sweep", help="vary one parameter; writes sweep.csv and per-row manifests")
    sw.add_argument("--config", required=True)
    sw.add_argument("--axis", required=True, choices=["h_ac", "d", "hz", "s", "s_prime"])
    sw.add_argument("--values", required=True, help="comma-separated list")
    sw.add_argument("--out")
    sw.add_argument("--workers", type=int, default=1)
    sw.set_defaults(func=cmd_sweep)

    chk = sub.add_parser("check", help="run the acceptance criteria")
    chk.add_argument("--quick", action="store_true", help="only the fast criteria")
    chk.add_argument("--only", help="comma-separated criterion numbers")
    chk.set_defaults(func=cmd_check)

    plot = sub.add_parser("plot-script", help="emit a gnuplot script for a trajectory CSV")
    plot.add_argument("--csv", required=True)
    plot.add_argument("--columns", default="sx,sz")
    plot.add_argument("--raw", action="store_true", help="do not divide by S or S^2")
    plot.add_argument("--s", type=float, help="spin S (default: read manifest.json next to the CSV)")
    plot.add_argument("--output")
    plot.set_defaults(func=cmd_plot_script)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_VALIDATION
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except _Failure as exc:
        code, kind, msg = exc.code, exc.kind, str(exc)
    except ConvergenceError as exc:
        code, kind, msg = EXIT_CONVERGENCE, "convergence", str(exc)
    except OSError as exc:
        code, kind, msg = EXIT_IO, "io", str(exc)
    except ValueError as exc:
        code, kind, msg = EXIT_VALIDATION, "validation", str(exc)
    print(f"spinladder-error code={code} kind={kind} message={json.dumps(msg)}", file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
