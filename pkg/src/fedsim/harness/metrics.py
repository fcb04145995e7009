"""Per-run phase durations and per-group statistics."""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable

import numpy as np

from fedsim.models.domain import PHASE_ORDER, Phase, PhaseStats, PhaseTimeline


def phase_durations(timeline: PhaseTimeline) -> dict[Phase, float]:
    """Delta from the previous milestone for the first five phases.

    ServiceAnnounced is measured from run start; FederationCompleted is the
    accumulated total. Failed or unfinished runs yield an empty map.
    """
    if not timeline.completed or timeline.started_at is None:
        return {}
    durations: dict[Phase, float] = {}
    previous = timeline.started_at
    for phase in PHASE_ORDER[:-1]:
        at = timeline.milestones.get(phase)
        if at is None:
            return {}
        durations[phase] = at - previous
        previous = at
    durations[Phase.FEDERATION_COMPLETED] = (
        timeline.milestones[Phase.FEDERATION_COMPLETED] - timeline.started_at
    )
    return durations


def completion_gap(timeline: PhaseTimeline) -> float | None:
    """Time between ConfirmDeployment and FederationCompleted."""
    if not timeline.completed:
        return None
    return (
        timeline.milestones[Phase.FEDERATION_COMPLETED]
        - timeline.milestones[Phase.CONFIRM_DEPLOYMENT]
    )


def group_key(timeline: PhaseTimeline) -> tuple[str, float]:
    return (timeline.profile_name, timeline.block_period_s)


def aggregate(timelines: Iterable[PhaseTimeline]) -> list[PhaseStats]:
    """Mean, population stddev, p50 and p95 per (profile, BP, phase).

    Failed runs are excluded; a group with no successful run still gets a
    row per phase with n_runs=0 and null aggregates.
    """
    groups: dict[tuple[str, float], list[dict[Phase, float]]] = defaultdict(list)
    for t in timelines:
        bucket = groups[group_key(t)]
        durations = phase_durations(t)
        if durations:
            bucket.append(durations)

    stats: list[PhaseStats] = []
    for (profile_name, block_period_s), runs in sorted(groups.items()):
        for phase in PHASE_ORDER:
            if not runs:
                stats.append(
                    PhaseStats(
                        profile_name=profile_name,
                        block_period_s=block_period_s,
                        phase=phase.value,
                        mean_s=None,
                        stddev_s=None,
                        p50_s=None,
                        p95_s=None,
                        n_runs=0,
                    )
                )
                continue
            samples = np.array([r[phase] for r in runs], dtype=float)
            stats.append(
                PhaseStats(
                    profile_name=profile_name,
                    block_period_s=block_period_s,
                    phase=phase.value,
                    mean_s=float(np.mean(samples)),
                    stddev_s=float(np.std(samples)),
                    p50_s=float(np.percentile(samples, 50, method="linear")),
                    p95_s=float(np.percentile(samples, 95, method="linear")),
                    n_runs=len(samples),
                )
            )
    return stats


def find_stat(
    stats: Iterable[PhaseStats], profile_name: str, block_period_s: float, phase: Phase
) -> PhaseStats | None:
    for s in stats:
        if (
            s.profile_name == profile_name
            and s.block_period_s == block_period_s
            and s.phase == phase.value
        ):
            return s
    return None
