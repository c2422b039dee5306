"""Command-line front end.

    ctcbeam run <preset|config> --out DIR [--set key=value]... [--csv]
    ctcbeam sweep <preset> --param KEY --values v1,v2,... --out DIR [--jobs N]
    ctcbeam presets

Exit codes: 0 ok, 2 usage/config error, 3 diverged, 4 max-iterations,
5 numeric blowup.  CTCBEAM_THREADS caps sweep parallelism.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import io as ctcio
from .ctc import STATUS_CONVERGED, STATUS_DIVERGED, STATUS_MAX_ITERATIONS, solve_fixed_point
from .diagnostics import density_map, difference_map
from .errors import ConfigParseError, NumericBlowupError, PresetLookupError
from .scenarios import (
    CONFIG_SCHEMA,
    PRESET_OVERRIDES,
    preset_names,
    resolve_config,
    scenario_from_config,
)
from .solver import evolve

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DIVERGED = 3
EXIT_MAX_ITERATIONS = 4
EXIT_BLOWUP = 5

_STATUS_EXIT = {
    STATUS_CONVERGED: EXIT_OK,
    STATUS_DIVERGED: EXIT_DIVERGED,
    STATUS_MAX_ITERATIONS: EXIT_MAX_ITERATIONS,
}

# bare sweep-parameter names accepted as shorthand for dotted keys
SWEEP_ALIASES = {
    "alpha_mod": "ctc.alpha_mod",
    "alpha_phase": "ctc.alpha_phase",
    "w": "ctc.w",
    "y_out": "ctc.y_out",
    "y_in": "ctc.y_in",
    "g": "physics.g",
    "mass": "physics.mass",
    "sigma": "initial.sigma",
    "ky": "initial.ky",
    "y0": "initial.y0",
    "depth": "initial.depth",
    "width": "initial.width",
    "tol": "run.tol",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctcbeam",
        description="Fixed-point histories of a beam with a feedback loop from t=T to t=0.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one preset or config file")
    run.add_argument("target", help="preset name or path to a config file")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a config key (repeatable)",
    )
    run.add_argument("--csv", action="store_true", help="also emit CSV maps for small grids")

    sweep = sub.add_parser("sweep", help="run one preset across a list of parameter values")
    sweep.add_argument("target", help="preset name")
    sweep.add_argument("--param", required=True, help="parameter to sweep (e.g. alpha_mod)")
    sweep.add_argument("--values", required=True, help="comma-separated values")
    sweep.add_argument("--out", required=True, help="output directory")
    sweep.add_argument("--jobs", type=int, default=1, help="parallel workers")
    sweep.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a config key for every point (repeatable)",
    )

    sub.add_parser("presets", help="list registered presets")
    return parser


def _parse_overrides(pairs: list[str]) -> dict[str, str]:
    out: dict[str, str] = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigParseError("override must look like key=value", key=pair)
        key, _, value = pair.partition("=")
        out[key.strip()] = value.strip()
    return out


def _resolve_target_config(target: str) -> dict[str, str]:
    """A run target is either a preset name or a config file path."""
    if target in PRESET_OVERRIDES:
        return {k: v for k, v in PRESET_OVERRIDES[target].items()}
    path = Path(target)
    if path.exists():
        return ctcio.parse_config_file(path)
    raise PresetLookupError(target, preset_names())


def _execute(cfg: dict[str, object]):
    """Build the scenario and run the fixed-point search plus reference pass."""
    scenario = scenario_from_config(cfg)
    rec, report = solve_fixed_point(
        scenario,
        tol=scenario.config["run.tol"],
        max_iter=scenario.config["run.max_iter"],
    )
    return scenario, rec, report


def cmd_run(args: argparse.Namespace) -> int:
    try:
        overrides = _parse_overrides(args.overrides)
        cfg = _resolve_target_config(args.target)
        cfg.update(overrides)
        cfg = resolve_config(cfg)
    except (ConfigParseError, PresetLookupError) as exc:
        print(f"ctcbeam: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"ctcbeam: cannot read config: {exc}", file=sys.stderr)
        return EXIT_USAGE

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    try:
        scenario, rec, report = _execute(cfg)
        reference = evolve(scenario.base_initial, scenario.params, scenario.grid, scenario.T)
    except NumericBlowupError as exc:
        print(f"ctcbeam: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    except ConfigParseError as exc:
        print(f"ctcbeam: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    converged_map = density_map(rec)
    reference_map = density_map(reference)
    diff = difference_map(rec, reference)

    ctcio.write_field_map(out_dir / "converged_density.ctcb", converged_map)
    ctcio.write_field_map(out_dir / "reference_density.ctcb", reference_map)
    ctcio.write_field_map(out_dir / "difference_map.ctcb", diff)
    if args.csv:
        for name, arr in (
            ("converged_density.csv", converged_map),
            ("reference_density.csv", reference_map),
            ("difference_map.csv", diff),
        ):
            if not ctcio.write_field_map_csv(out_dir / name, arr):
                print(f"ctcbeam: skipped {name} (grid too large for CSV)", file=sys.stderr)

    with open(out_dir / "convergence.json", "w") as fh:
        json.dump(
            {
                "status": report.status,
                "iterations": report.iterations,
                "tolerance": scenario.config["run.tol"],
                "residuals": report.residuals.tolist(),
                "window_norms": report.window_norms.tolist(),
                "total_densities": report.total_densities.tolist(),
            },
            fh,
            indent=2,
        )
        fh.write("\n")
    ctcio.write_manifest(out_dir / "manifest.cfg", scenario.config)

    print(f"{scenario.name}: {report.status} after {report.iterations} iterations")
    return _STATUS_EXIT[report.status]


def _sweep_point(payload: tuple[dict[str, object], str, float]) -> tuple:
    cfg, key, value = payload
    cfg = dict(cfg)
    cfg[key] = value
    _, _, report = _execute(resolve_config(cfg))
    return (
        value,
        report.status,
        report.iterations,
        float(report.window_norms[-1]),
        float(report.total_densities[-1]),
    )


def _worker_cap() -> int:
    env = os.environ.get("CTCBEAM_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def cmd_sweep(args: argparse.Namespace) -> int:
    key = SWEEP_ALIASES.get(args.param, args.param)
    if key not in CONFIG_SCHEMA or CONFIG_SCHEMA[key][0] not in (float, int):
        print(f"ctcbeam: '{args.param}' is not a sweepable scalar", file=sys.stderr)
        return EXIT_USAGE
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError as exc:
        print(f"ctcbeam: bad sweep values: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not values:
        print("ctcbeam: sweep needs at least one value", file=sys.stderr)
        return EXIT_USAGE

    try:
        overrides = _parse_overrides(args.overrides)
        cfg = _resolve_target_config(args.target)
        cfg.update(overrides)
        base_cfg = resolve_config(cfg)
    except (ConfigParseError, PresetLookupError) as exc:
        print(f"ctcbeam: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    jobs = max(1, min(args.jobs, _worker_cap(), len(values)))
    payloads = [(base_cfg, key, v) for v in values]
    exit_code = EXIT_OK
    try:
        if jobs == 1:
            rows = [_sweep_point(p) for p in payloads]
        else:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                rows = list(pool.map(_sweep_point, payloads))
    except NumericBlowupError as exc:
        print(f"ctcbeam: {exc}", file=sys.stderr)
        return EXIT_BLOWUP

    with open(out_dir / "summary.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["value", "status", "iterations", "window_norm", "total_density"])
        for row in rows:
            writer.writerow([repr(row[0]), row[1], row[2], repr(row[3]), repr(row[4])])

    for row in rows:
        print(f"{key}={row[0]:g}: {row[1]} after {row[2]} iterations")
    return exit_code


def cmd_presets(_: argparse.Namespace) -> int:
    for name in preset_names():
        print(f"{name}: {PRESET_OVERRIDES[name]['description']}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if args.command == "run":
        return cmd_run(args)
    if args.command == "sweep":
        return cmd_sweep(args)
    return cmd_presets(args)


if __name__ == "__main__":
    sys.exit(main())
