"""
pwlab - command-line front end of the pilot-wave consistency lab
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from src.core.errors import ConfigError

from .config import SCENARIOS, load_config, parse_domain
from .scenarios import run_scenario

# Configure logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_METRIC_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pwlab", description="Pilot-wave consistency lab")
    parser.add_argument("scenario", choices=SCENARIOS, help="Experiment to run")
    parser.add_argument("--config", type=Path, default=None, help="key=value configuration file")
    parser.add_argument("--seed", type=int, default=None, help="Random seed")
    parser.add_argument("--grid-n", type=int, default=None, help="Number of grid points")
    parser.add_argument("--domain", type=str, default=None, help="Grid domain as MIN,MAX")
    parser.add_argument("--nmax", type=int, default=None, help="Highest oscillator level kept")
    parser.add_argument("--tau-frac", type=float, default=None, help="Measurement separation as a fraction of T")
    parser.add_argument("--samples", type=int, default=None, help="Ensemble or sample count")
    parser.add_argument("--out", type=str, default=None, help="Output directory")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="Log numerical detail")
    verbosity.add_argument("--quiet", action="store_true", help="Only log warnings and errors")
    return parser


def overrides_from(args: argparse.Namespace) -> dict:
    overrides = {
        "seed": args.seed,
        "grid_n": args.grid_n,
        "nmax": args.nmax,
        "tau_frac": args.tau_frac,
        "samples": args.samples,
        "output_dir": args.out,
    }
    if args.domain is not None:
        overrides["domain_min"], overrides["domain_max"] = parse_domain(args.domain)
    return overrides


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one scenario.

    Returns:
        0 if every metric passes, 1 if a metric fails, 2 on an invalid
        configuration (nothing is written), 3 on a numerical failure
        (report.json still carries the error)
    """
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    elif args.quiet:
        logging.getLogger().setLevel(logging.WARNING)

    try:
        config = load_config(args.scenario, args.config, overrides_from(args))
    except (ConfigError, ValidationError) as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_CONFIG

    try:
        report = run_scenario(config)
    except OSError as e:
        logger.error(str(e))
        return EXIT_NUMERICAL

    if report.error is not None:
        return EXIT_NUMERICAL
    if not report.passed:
        logger.warning(f"Failed metrics: {', '.join(report.failed_metrics())}")
        return EXIT_METRIC_FAILED
    logger.info(f"All {len(report.metrics)} metrics passed; outputs in {config.output_path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
