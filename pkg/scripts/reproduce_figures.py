"""Reproduce the block-period benchmark and compare it with the reference measurements.

Usage:
    python scripts/reproduce_figures.py [--reps N] [--seed U64] [--jobs N] [--out DIR]

Runs the private sweep (BP 1, 2, 5, 10, 20 s) and the public profile, writes the
usual result files, then prints measured totals next to the reference totals.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

# Add src to path so the script runs from a plain checkout
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from fedsim.cli.report import print_header, print_summary_table, print_written
from fedsim.config import constants
from fedsim.config.settings import DEFAULT_SEED
from fedsim.harness.campaign import run_campaign
from fedsim.harness.export import export
from fedsim.harness.metrics import aggregate, find_stat
from fedsim.ledger.profiles import builtin_profile
from fedsim.models.domain import Phase
from fedsim.models.schemas import CampaignConfig
from fedsim.observability.logger import setup_logging

TOLERANCE = 0.10

CHECKS = [
    ("private best case (BP=1)", "private", 1.0, constants.REFERENCE_PRIVATE_BEST_S),
    ("private worst case (BP=20)", "private", 20.0, constants.REFERENCE_PRIVATE_WORST_S),
    ("public testnet", "public", constants.PUBLIC_BLOCK_PERIOD_S, constants.REFERENCE_PUBLIC_S),
]


def print_comparison(stats) -> bool:
    print_header("MEASURED vs REFERENCE TOTALS")
    print(f"  {'Case':<28} {'Measured':>10} {'Reference':>10} {'Delta':>8}  Within 10%")
    all_ok = True
    for label, profile, bp, reference in CHECKS:
        stat = find_stat(stats, profile, bp, Phase.FEDERATION_COMPLETED)
        if stat is None or stat.mean_s is None:
            print(f"  {label:<28} {'-':>10} {reference:>10.1f} {'-':>8}  no")
            all_ok = False
            continue
        delta = (stat.mean_s - reference) / reference
        ok = abs(delta) <= TOLERANCE
        all_ok &= ok
        print(
            f"  {label:<28} {stat.mean_s:>10.2f} {reference:>10.1f} "
            f"{delta:>+8.1%}  {'yes' if ok else 'NO'}"
        )

    print()
    for bp in constants.REFERENCE_BLOCK_PERIODS_S:
        stat = find_stat(stats, "private", bp, Phase.SERVICE_DEPLOYED)
        if stat is not None and stat.mean_s is not None:
            print(f"  Service Deployed at BP={bp:<4g} {stat.mean_s:>8.2f} s")
    return all_ok


def main(reps: int, seed: int, jobs: int, output_dir: Path) -> int:
    setup_logging("WARNING")
    config = CampaignConfig(
        profiles=[builtin_profile("private"), builtin_profile("public")],
        block_periods_s=list(constants.REFERENCE_BLOCK_PERIODS_S),
        replications=reps,
        base_seed=seed,
        jobs=jobs,
        output_dir=output_dir,
    )
    timelines = run_campaign(config)
    stats = aggregate(timelines)
    paths = export(stats, timelines, config)

    print_summary_table(stats)
    ok = print_comparison(stats)
    print_written(paths)
    return 0 if ok else 1


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Reproduce the block-period benchmark")
    parser.add_argument("--reps", type=int, default=constants.REFERENCE_REPLICATIONS)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out", type=Path, default=Path("results/reproduction"))
    args = parser.parse_args()
    sys.exit(main(args.reps, args.seed, args.jobs, args.out))
