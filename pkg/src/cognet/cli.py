"""Command line entry: run sweeps, validate, list presets.

Exit codes: 0 success, 1 configuration error, 2 numerical non-convergence
in any output row, 3 validation tolerance failure.
"""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, list_presets, loads_config, \
    resolve_config_path
from .numerics import NonConvergence
from .sweeps import run_sweep, validate_battery

__all__ = ["main"]


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="cognet",
        description="Analytic and simulated performance of a primary ad hoc "
                    "network underlaid with a wireless-powered cognitive "
                    "secondary network.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser(
        "run", help="execute a sweep given a preset name or a config file",
    )
    run_p.add_argument("config", help="preset name or path to a config file")
    run_p.add_argument("--simulate", action="store_true",
                       help="add Monte Carlo columns alongside the analytics")
    run_p.add_argument("--replicates", type=int, metavar="N",
                       help="override the sample count for --simulate")
    run_p.add_argument("--seed", type=int, metavar="S",
                       help="override the master seed")
    run_p.add_argument("--out", metavar="PATH",
                       help="CSV output path (default <kind>.csv)")
    run_p.add_argument("--no-plot", action="store_true",
                       help="skip rendering the PNG next to the CSV")

    val_p = sub.add_parser(
        "validate", help="run the analytic-vs-simulation consistency battery",
    )
    val_p.add_argument("--seed", type=int, default=0, metavar="S")
    val_p.add_argument("--out", metavar="PATH",
                       help="also write the check table as CSV")

    sub.add_parser("list-presets", help="show the bundled sweep presets")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1

    try:
        if args.command == "list-presets":
            for name in list_presets():
                print(name)
            return 0
        if args.command == "validate":
            result = validate_battery(master_seed=args.seed,
                                      out_path=args.out)
            return 3 if result.failed_checks else 0
        text, origin = resolve_config_path(args.config)
        _, spec = loads_config(text, origin=origin)
        result = run_sweep(
            spec,
            simulate=args.simulate,
            replicates=args.replicates,
            master_seed=args.seed,
            out_path=args.out,
            make_plots=not args.no_plot,
        )
        if spec.name == "validate":
            return 3 if result.failed_checks else 0
        return 2 if result.nonconverged else 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NonConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
