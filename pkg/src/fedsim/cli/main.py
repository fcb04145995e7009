"""fedsim command line: run campaigns, trace one federation, list profiles."""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence

import yaml

from fedsim import __version__
from fedsim.cli.config_loader import load_settings, parse_config
from fedsim.cli.report import (
    print_profiles,
    print_summary_table,
    print_trace,
    print_written,
)
from fedsim.config import constants
from fedsim.exceptions import ConfigurationError, ExportError
from fedsim.harness.campaign import check_config, run_campaign
from fedsim.harness.export import export
from fedsim.harness.metrics import aggregate
from fedsim.harness.scenario import FederationScenario
from fedsim.ledger.profiles import builtin_profile, builtin_profile_names
from fedsim.ledger.trace_export import write_chain_trace
from fedsim.models.schemas import CampaignConfig
from fedsim.observability.logger import get_logger, setup_logging
from fedsim.observability.metrics import log_campaign_metrics
from fedsim.sim.rng import derive_run_seed

logger = get_logger("cli")


def _add_campaign_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="YAML campaign configuration file")
    parser.add_argument(
        "--profile",
        metavar="NAME[,NAME]",
        help=f"network profiles to run (built-in: {', '.join(builtin_profile_names())})",
    )
    parser.add_argument(
        "--block-periods", metavar="CSV", help="private block periods in seconds, e.g. 1,2,5,10,20"
    )
    parser.add_argument("--reps", type=int, metavar="N", help="replications per run point")
    parser.add_argument("--seed", type=int, metavar="U64", help="base seed (overrides FEDSIM_SEED)")
    parser.add_argument("--providers", type=int, metavar="N", help="number of provider domains")
    parser.add_argument(
        "--deploy-latency",
        metavar="SPEC",
        help="deployment latency law, e.g. 36, normal:36,2,0 or uniform:30,42",
    )
    parser.add_argument("--out", metavar="DIR", help="output directory for result files")
    parser.add_argument("--jobs", type=int, metavar="N", help="parallel worker processes")
    parser.add_argument("--timeout", type=float, metavar="S", help="per-run timeout in seconds")
    parser.add_argument(
        "--arrival-phase",
        choices=["uniform", "aligned"],
        help="consumer start offset within a block period",
    )
    parser.add_argument(
        "--complete-tx",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="finish with an on-chain complete_federation call (default: measurement only)",
    )
    parser.add_argument(
        "--log-level",
        metavar="LEVEL",
        help="structured log level on stderr (overrides FEDSIM_LOG_LEVEL)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fedsim",
        description="Discrete-event simulator of blockchain-based multi-cloud service federation",
    )
    parser.add_argument("--version", action="version", version=f"fedsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a benchmark campaign and write result files")
    _add_campaign_flags(run_p)
    run_p.add_argument(
        "--dry-run", action="store_true", help="print the resolved configuration and exit"
    )

    trace_p = sub.add_parser("trace", help="narrate a single federation run event by event")
    _add_campaign_flags(trace_p)
    trace_p.add_argument(
        "--block-period", type=float, metavar="S", help="block period of the traced run"
    )
    trace_p.add_argument(
        "--run-index", type=int, default=0, metavar="R", help="replication index to replay"
    )
    trace_p.add_argument("--chain-trace", metavar="PATH", help="write the chain as JSON-lines")

    sub.add_parser("profiles", help="list built-in network profiles and their provenance")
    return parser


def cmd_run(config: CampaignConfig, dry_run: bool = False) -> int:
    if dry_run:
        print(yaml.safe_dump(config.model_dump(mode="json"), sort_keys=False), end="")
        return constants.EXIT_OK
    timelines = run_campaign(config)
    stats = aggregate(timelines)
    log_campaign_metrics(stats, len(timelines), sum(1 for t in timelines if t.failed))
    paths = export(stats, timelines, config)
    print_summary_table(stats)
    print_written(paths)
    return constants.EXIT_OK


def cmd_trace(
    config: CampaignConfig,
    block_period_s: float | None = None,
    run_index: int = 0,
    chain_trace: str | None = None,
) -> int:
    check_config(config)
    if run_index < 0:
        raise ConfigurationError([f"--run-index: must be >= 0, got {run_index}"])
    profile = config.profiles[0]
    points = [bp for p, bp in config.run_points() if p.name == profile.name]
    bp = block_period_s if block_period_s is not None else points[0]
    try:
        profile = profile.with_block_period(bp)
    except ValueError as e:
        raise ConfigurationError([f"--block-period: {e}"]) from e

    seed = derive_run_seed(config.base_seed, profile.name, bp, run_index)
    result = FederationScenario(config, profile, run_index, seed, narrate=True).run()
    print_trace(result)
    if chain_trace is not None:
        count = write_chain_trace(result.ledger.blocks, chain_trace)
        print(f"\n  wrote {count} blocks to {chain_trace}")
    return constants.EXIT_OK


def cmd_profiles() -> int:
    print_profiles([builtin_profile(name) for name in builtin_profile_names()])
    return constants.EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = load_settings()
        setup_logging(getattr(args, "log_level", None) or settings.log_level, settings.log_format)
        if args.command == "profiles":
            return cmd_profiles()
        config = parse_config(args.config, vars(args), settings)
        if args.command == "run":
            return cmd_run(config, dry_run=args.dry_run)
        return cmd_trace(config, args.block_period, args.run_index, args.chain_trace)
    except ConfigurationError as e:
        print(f"fedsim: {e}", file=sys.stderr)
        return constants.EXIT_CONFIG_ERROR
    except (ExportError, OSError) as e:
        logger.error("output_failed", error=str(e))
        print(f"fedsim: {e}", file=sys.stderr)
        return constants.EXIT_IO_ERROR


def run() -> None:
    sys.exit(main())
