"""Command line entry point: ``oamswipt <command> [options]``.

Exit codes: 0 on success, 2 on a configuration error, 3 when the harvest
floor is infeasible at any run (the rows are still written).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .channel import build_channels, dump_channels_csv
from .config import ExperimentConfig, load_config
from .errors import ConfigError, OamSwiptError
from .experiments import run_convergence, run_distance_sweep, run_power_sweep, run_single
from .geometry import element_layout

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3

_SWEEPS = {
    "convergence": run_convergence,
    "power-sweep": run_power_sweep,
    "distance-sweep": run_distance_sweep,
}


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="INI configuration file")
    common.add_argument("--seed", type=_u64, default=0, help="top-level seed (default 0)")
    common.add_argument("--out", type=Path, help="output directory (default from config)")
    common.add_argument("--set", dest="overrides", action="append", default=[], metavar="SECTION.KEY=VALUE",
                        help="override a config value; repeatable")
    common.add_argument("--jobs", type=int, help="worker processes, 0 = all cores")

    parser = argparse.ArgumentParser(prog="oamswipt", description="RIS-assisted OAM SWIPT experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("convergence", parents=[common], help="capacity trace per outer iteration")
    sub.add_parser("power-sweep", parents=[common], help="capacity and harvested power vs transmit power")
    sub.add_parser("distance-sweep", parents=[common], help="capacity vs Tx-RIS distance")
    opt = sub.add_parser("optimize", parents=[common], help="single run, JSON report")
    opt.add_argument("--scheme", default="ris", help="scheme name, e.g. ris, ris-8x8, mimo-ris-4x4")
    sub.add_parser("dump-channel", parents=[common], help="write the channel matrices as CSV")
    return parser


def _load(args) -> ExperimentConfig:
    config = load_config(args.config, args.overrides)
    if args.out is not None:
        config = replace(config, out=str(args.out))
    if args.jobs is not None:
        config = replace(config, jobs=args.jobs)
    return config


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _load(args)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = Path(config.out)

    try:
        if args.command in _SWEEPS:
            name = args.command.replace("-", "_")
            table = _SWEEPS[args.command](config, seed=args.seed)
            path = table.write(out / f"{name}.csv", report_dir=out / f"{name}_runs")
            print(f"wrote {len(table.rows)} rows to {path}")
            return EXIT_INFEASIBLE if table.any_infeasible else EXIT_OK

        if args.command == "optimize":
            report = run_single(config, args.scheme, seed=args.seed)
            out.mkdir(parents=True, exist_ok=True)
            text = report.to_json(indent=2)
            (out / "optimize.json").write_text(text, encoding="utf-8")
            print(text)
            return EXIT_INFEASIBLE if report.termination == "infeasible" else EXIT_OK

        channels = build_channels(element_layout(config.geometry), config.propagation)
        out.mkdir(parents=True, exist_ok=True)
        path = out / "channels.csv"
        dump_channels_csv(channels, path)
        print(f"wrote {path}")
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OamSwiptError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
