"""User-facing stdout reports for the CLI and the reproduction script."""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path

from fedsim.harness.metrics import find_stat, phase_durations
from fedsim.harness.scenario import ScenarioResult
from fedsim.ledger.analysis import expected_inclusion_wait
from fedsim.models.domain import PHASE_ORDER, Phase, PhaseStats
from fedsim.models.schemas import NetworkProfile

_SHORT = {
    Phase.SERVICE_ANNOUNCED: "SA",
    Phase.BID_OFFERED: "BO",
    Phase.WINNER_CHOSEN: "WC",
    Phase.SERVICE_DEPLOYED: "SD",
    Phase.CONFIRM_DEPLOYMENT: "CD",
    Phase.FEDERATION_COMPLETED: "Total",
}


def print_header(title: str) -> None:
    print(f"\n{'=' * 72}")
    print(f"  {title}")
    print(f"{'=' * 72}")


def _cell(value: float | None) -> str:
    return f"{value:>8.2f}" if value is not None else f"{'-':>8}"


def print_summary_table(stats: Sequence[PhaseStats]) -> None:
    print_header("MEAN PHASE DURATIONS (s)")
    header = f"  {'Profile':<10} {'BP':>5} " + "".join(f"{_SHORT[p]:>8}" for p in PHASE_ORDER)
    print(header + f"{'Runs':>7}")
    print(f"  {'-' * (len(header) + 5)}")
    groups = sorted({(s.profile_name, s.block_period_s) for s in stats})
    for profile_name, bp in groups:
        row = f"  {profile_name:<10} {bp:>5g} "
        n_runs = 0
        for phase in PHASE_ORDER:
            stat = find_stat(stats, profile_name, bp, phase)
            row += _cell(stat.mean_s if stat else None)
            n_runs = stat.n_runs if stat else n_runs
        print(row + f"{n_runs:>7}")


def print_written(paths: Sequence[Path]) -> None:
    print()
    for path in paths:
        print(f"  wrote {path}")


def print_trace(result: ScenarioResult) -> None:
    timeline = result.timeline
    print_header(
        f"TRACE {timeline.run_id} (profile={timeline.profile_name}, "
        f"BP={timeline.block_period_s:g}s, seed={timeline.seed})"
    )
    if result.trace is not None:
        for line in result.trace.lines():
            print(f"  {line}")

    print_header("PHASES")
    if timeline.failed:
        print(f"  run failed: {timeline.failure_reason}")
        return
    for phase, duration in phase_durations(timeline).items():
        print(f"  {phase.value:<22} {duration:>9.3f} s")
    if timeline.deployment_breakdown:
        parts = ", ".join(f"{k}={v:.3f}" for k, v in timeline.deployment_breakdown.items())
        print(f"  deployment breakdown:  {parts}")
    print(f"  winner={timeline.winner}  agreed_price={timeline.agreed_price}")
    print(f"  blocks sealed: {result.ledger.height}")


def print_profiles(profiles: Sequence[NetworkProfile]) -> None:
    for profile in profiles:
        print_header(f"PROFILE {profile.name} ({profile.kind.value})")
        values = {
            "block_period_s": f"{profile.block_period_s:g}",
            "block_jitter": profile.block_jitter.describe(),
            "inclusion_extra_blocks": profile.inclusion_extra_blocks.describe(),
            "api_latency_s": profile.api_latency_s.describe(),
        }
        for key, value in values.items():
            print(f"  {key:<24} {value:<18} {profile.provenance.get(key, '')}")
        print(f"  {'expected inclusion wait':<24} {expected_inclusion_wait(profile):.3f} s")
