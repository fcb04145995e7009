"""Metric recording helpers for runs and campaigns."""

from __future__ import annotations

from collections.abc import Mapping

from fedsim.models.domain import Phase, PhaseStats, PhaseTimeline
from fedsim.observability.logger import get_logger

logger = get_logger("metrics")


def log_run_metrics(timeline: PhaseTimeline, durations: Mapping[Phase, float]) -> None:
    if timeline.failed:
        logger.warning(
            "run_failed",
            run_id=timeline.run_id,
            profile=timeline.profile_name,
            block_period_s=timeline.block_period_s,
            reason=timeline.failure_reason,
        )
        return
    logger.info(
        "run_metrics",
        run_id=timeline.run_id,
        profile=timeline.profile_name,
        block_period_s=timeline.block_period_s,
        durations={k.value: round(v, 4) for k, v in durations.items()},
    )


def log_campaign_metrics(stats: list[PhaseStats], n_timelines: int, n_failed: int) -> None:
    totals = {
        f"{s.profile_name}@{s.block_period_s:g}": round(s.mean_s, 3)
        for s in stats
        if s.phase == Phase.FEDERATION_COMPLETED.value and s.mean_s is not None
    }
    logger.info(
        "campaign_metrics",
        runs=n_timelines,
        failed=n_failed,
        mean_totals_s=totals,
    )
