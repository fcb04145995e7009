"""Single federation runs wired end to end."""

import pytest

from fedsim.harness.metrics import phase_durations
from fedsim.harness.scenario import FederationScenario
from fedsim.ledger.profiles import builtin_profile
from fedsim.models.domain import PHASE_ORDER, EventKind, Phase, RecordState
from fedsim.models.schemas import ArrivalPhase, CampaignConfig, CompletionMode, NetworkProfile


def _run(bp=1.0, seed=5, replication=0, narrate=False, **overrides):
    config = CampaignConfig(**overrides)
    profile = builtin_profile("private").with_block_period(bp)
    return FederationScenario(config, profile, replication, seed, narrate=narrate).run()


def _assert_strict_order(t):
    times = [t.milestones[p] for p in PHASE_ORDER]
    assert t.started_at < times[0]
    assert all(a < b for a, b in zip(times[:5], times[1:5]))
    assert times[4] <= times[5]


@pytest.mark.parametrize("bp", [1.0, 2.0, 5.0, 10.0, 20.0])
def test_milestones_are_ordered(bp):
    t = _run(bp=bp).timeline
    assert t.completed
    _assert_strict_order(t)


def test_aligned_one_second_hand_trace():
    t = _run(arrival_phase=ArrivalPhase.ALIGNED).timeline
    durations = {p.value: round(d, 6) for p, d in phase_durations(t).items()}
    assert t.started_at == pytest.approx(1.1)
    assert durations == {
        "ServiceAnnounced": 3.0,
        "BidOffered": 3.0,
        "WinnerChosen": 3.0,
        "ServiceDeployed": 36.0,
        "ConfirmDeployment": 3.0,
        "FederationCompleted": 48.1,
    }


def test_winner_phase_tracks_long_block_periods():
    for bp in (10.0, 20.0):
        t = _run(bp=bp, arrival_phase=ArrivalPhase.ALIGNED).timeline
        assert phase_durations(t)[Phase.WINNER_CHOSEN] == pytest.approx(bp)


def test_no_transaction_reverts():
    result = _run(bp=2.0, complete_tx_mode=CompletionMode.ON_CHAIN)
    kinds = [event.kind for _, _, event in result.ledger.delivery_log]
    assert EventKind.CALL_REVERTED not in kinds
    result.ledger.verify_chain()


def test_on_chain_completion_closes_the_record():
    result = _run(complete_tx_mode=CompletionMode.ON_CHAIN)
    assert result.timeline.completed
    record = result.ledger.contract.read_record(result.consumer.service_id)
    assert record.state == RecordState.COMPLETED
    assert result.consumer.sent[-1] == "complete_federation"


def test_on_chain_completion_costs_at_least_one_block():
    measured = _run(arrival_phase=ArrivalPhase.ALIGNED).timeline
    on_chain = _run(
        arrival_phase=ArrivalPhase.ALIGNED, complete_tx_mode=CompletionMode.ON_CHAIN
    ).timeline
    assert on_chain.total_s >= measured.total_s + 1.0


def test_several_providers_single_winner():
    result = _run(topology={"n_providers": 4}, provider_policy={"pricing": "uniform:5,15"})
    t = result.timeline
    assert t.completed
    winners = [p for p in result.providers if p.won]
    assert len(winners) == 1
    assert winners[0].address == t.winner
    assert all(p.bids_sent for p in result.providers)
    lowest = min(price for p in result.providers for price in p.bids_sent.values())
    assert t.agreed_price == lowest


def test_narrated_trace_counts():
    result = _run(narrate=True, arrival_phase=ArrivalPhase.ALIGNED)
    trace = result.trace
    assert trace.count("milestone") == len(PHASE_ORDER)
    assert trace.count("deployment_started") == 1
    assert trace.count("deployment_finished") == 1
    assert trace.count("block_sealed") == result.ledger.height
    times = [e.at for e in trace.entries]
    assert times == sorted(times)


def test_same_seed_same_run():
    a = _run(seed=11, narrate=True)
    b = _run(seed=11, narrate=True)
    assert a.timeline.milestones == b.timeline.milestones
    assert a.trace.lines() == b.trace.lines()


def test_unmatchable_requirements_fail_the_run():
    t = _run(
        consumer_policy={"requirements_template": {"cpu_cores": 64}},
        provider_policy={"capacity": {"cpu_cores": 8}},
        timeout_s=60.0,
    ).timeline
    assert t.failed
    assert "timed out" in t.failure_reason
    assert phase_durations(t) == {}


def test_random_api_latency_runs_complete():
    profile = NetworkProfile.model_validate(
        {**builtin_profile("private").model_dump(), "api_latency_s": "exponential:1.0"}
    )
    config = CampaignConfig(timeout_s=120.0)
    failed = []
    for rep in range(100):
        t = FederationScenario(config, profile, rep, seed=1000 + rep).run().timeline
        if t.failed:
            failed.append((t.run_id, t.failure_reason))
        else:
            _assert_strict_order(t)
    assert failed == []
