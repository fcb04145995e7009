"""Analytic helpers over network profiles."""

from __future__ import annotations

from fedsim.models.schemas import NetworkProfile


def expected_inclusion_wait(profile: NetworkProfile) -> float:
    """Mean wait from a uniformly random mempool arrival to inclusion.

    Residual block life E[X^2] / (2 E[X]) plus the mean number of extra
    blocks times the mean interval. With a fixed interval this is BP/2
    (+ mean(extra) * BP).
    """
    mean_interval = profile.block_period_s + profile.block_jitter.expected()
    second_moment = profile.block_jitter.variance() + mean_interval**2
    residual = second_moment / (2 * mean_interval)
    return residual + profile.inclusion_extra_blocks.expected() * mean_interval
