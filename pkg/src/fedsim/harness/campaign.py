"""Replicated federation runs across profiles and block periods."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor

from fedsim.exceptions import ConfigurationError
from fedsim.harness.metrics import phase_durations
from fedsim.harness.scenario import FederationScenario
from fedsim.models.domain import PhaseTimeline
from fedsim.models.schemas import CampaignConfig, NetworkProfile
from fedsim.observability.logger import get_logger
from fedsim.observability.metrics import log_run_metrics
from fedsim.sim.rng import derive_run_seed

logger = get_logger("campaign")

RunTask = tuple[CampaignConfig, NetworkProfile, int, int]


def check_config(config: CampaignConfig) -> None:
    """Re-check the invariants a campaign relies on, reporting all of them."""
    violations: list[str] = []
    if not config.profiles:
        violations.append("profiles: at least one profile is required")
    if config.replications < 1:
        violations.append(f"replications: must be >= 1, got {config.replications}")
    bad_periods = [p for p in config.block_periods_s if not p > 0]
    if not config.block_periods_s or bad_periods:
        violations.append(f"block_periods_s: every period must be > 0, got {bad_periods}")
    n_providers = config.topology.n_providers
    if n_providers < 1:
        violations.append(f"topology.n_providers: must be >= 1, got {n_providers}")
    if not 0 <= config.base_seed < 2**64:
        violations.append(f"base_seed: must be a 64-bit unsigned integer, got {config.base_seed}")
    if violations:
        raise ConfigurationError(violations)


def plan_runs(config: CampaignConfig) -> list[RunTask]:
    tasks: list[RunTask] = []
    for profile, bp in config.run_points():
        for rep in range(config.replications):
            seed = derive_run_seed(config.base_seed, profile.name, bp, rep)
            tasks.append((config, profile, rep, seed))
    return tasks


def _execute(task: RunTask) -> PhaseTimeline:
    config, profile, rep, seed = task
    return FederationScenario(config, profile, rep, seed).run().timeline


def run_campaign(config: CampaignConfig) -> list[PhaseTimeline]:
    """Run every (profile, BP, replication) point; sorted by (profile, BP, run_id)."""
    check_config(config)
    tasks = plan_runs(config)
    logger.info(
        "campaign_started",
        runs=len(tasks),
        profiles=[p.name for p in config.profiles],
        block_periods_s=config.block_periods_s,
        jobs=config.jobs,
    )
    started = time.perf_counter()

    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            chunksize = max(1, len(tasks) // (4 * config.jobs))
            timelines = list(pool.map(_execute, tasks, chunksize=chunksize))
    else:
        timelines = [_execute(task) for task in tasks]

    timelines.sort(key=lambda t: (t.profile_name, t.block_period_s, t.run_id))
    for t in timelines:
        log_run_metrics(t, phase_durations(t))

    failed = sum(1 for t in timelines if t.failed)
    logger.info(
        "campaign_finished",
        runs=len(timelines),
        failed=failed,
        elapsed_s=round(time.perf_counter() - started, 3),
    )
    return timelines
