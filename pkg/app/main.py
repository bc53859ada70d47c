import argparse
import sys
from typing import List, Optional

from loguru import logger

from app.cli.commands import cmd_oracle, cmd_run, cmd_sweep, cmd_weighting
from app.cli.dependencies import parse_bounds
from app.config import settings


def configure_logging(level: str) -> None:
    """Single stderr sink at the requested level"""
    logger.remove()
    logger.add(sys.stderr, level=level.upper(),
               format="<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | {message}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="Output table path")
    common.add_argument("--workers", type=int, default=settings.default_workers,
                        help="Concurrent sweep members (default: available parallelism)")
    common.add_argument("--seed", type=int, default=0, help="Reserved; every algorithm is deterministic")
    common.add_argument("--log-level", default=settings.log_level, help="DEBUG, INFO, WARNING or ERROR")

    parser = argparse.ArgumentParser(prog="mbm", description=settings.app_name)
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", parents=[common], help="Barrier-method run from a JSON config")
    run.add_argument("--config", required=True, help="Run config (JSON)")
    run.set_defaults(handler=cmd_run)

    sweep = commands.add_parser("sweep", parents=[common], help="One run per member of the sweep family")
    sweep.add_argument("--config", required=True, help="Run config with a sweep section (JSON)")
    sweep.set_defaults(handler=cmd_sweep)

    oracle = commands.add_parser("oracle", parents=[common], help="Grid nondominance oracle")
    oracle.add_argument("--problem", required=True, help="Registry name")
    oracle.add_argument("--param", action="append", help="Problem parameter key=value (repeatable)")
    oracle.add_argument("--bounds", action="append", type=parse_bounds,
                        help="low:high per dimension (repeat per dimension; use --bounds=-2:3)")
    oracle.add_argument("--counts", type=int, nargs="+", help="Point count per dimension")
    oracle.add_argument("--candidates", help="Table with columns x_1..x_n to classify")
    oracle.add_argument("--tol", type=float, default=1e-3, help="Classification tolerance")
    oracle.set_defaults(handler=cmd_oracle)

    weighting = commands.add_parser("weighting", parents=[common], help="Weighting-method baseline")
    weighting.add_argument("--problem", required=True, help="Registry name")
    weighting.add_argument("--param", action="append", help="Problem parameter key=value (repeatable)")
    weighting.add_argument("--alpha", type=float, nargs="+", help="Single weight on the unit simplex")
    weighting.add_argument("--grid", type=int, help="Number of alpha_1 values on [0, 1] (biobjective)")
    weighting.add_argument("--start", type=float, nargs="+", help="Strictly feasible start point")
    weighting.add_argument("--budget", type=int, default=settings.weighting_budget, help="Iteration budget")
    weighting.set_defaults(handler=cmd_weighting)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    logger.debug(f"{settings.app_name} {settings.app_version}: {args.command}")
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
