"""Tests for the consumer, provider and orchestrator agents."""

from dataclasses import dataclass

import numpy as np
import pytest

from fedsim.contract.federation import FederationContract
from fedsim.domains.client import ChainClient
from fedsim.domains.consumer import ConsumerAgent
from fedsim.domains.orchestrator import Orchestrator, synthesize_endpoint
from fedsim.domains.provider import ProviderAgent
from fedsim.ledger.chain import Ledger
from fedsim.ledger.profiles import builtin_profile
from fedsim.models.domain import PHASE_ORDER, Phase, PhaseTimeline
from fedsim.models.schemas import (
    CompletionMode,
    ConsumerPolicy,
    DeploymentModel,
    ProviderPolicy,
)
from fedsim.sim.engine import SimEngine
from fedsim.sim.rng import RngStreams

OVERHEAD = 2.0


@dataclass
class World:
    engine: SimEngine
    ledger: Ledger
    timeline: PhaseTimeline
    consumer: ConsumerAgent
    providers: list[ProviderAgent]


def _world(
    policies: list[ProviderPolicy],
    *,
    deployment: DeploymentModel | None = None,
    consumer_policy: ConsumerPolicy | None = None,
    completion: CompletionMode = CompletionMode.MEASUREMENT_ONLY,
    timeout_s: float = 300.0,
    bp: float = 1.0,
) -> World:
    engine = SimEngine()
    streams = RngStreams(42)
    ledger = Ledger(engine, builtin_profile("private").with_block_period(bp),
                    FederationContract(), streams)
    timeline = PhaseTimeline(run_id="t-0", profile_name="private", block_period_s=bp)
    consumer = ConsumerAgent(
        ChainClient("consumer-1", ledger, engine),
        timeline,
        consumer_policy or ConsumerPolicy(),
        overhead_s=OVERHEAD,
        timeout_s=timeout_s,
        completion=completion,
        on_finished=lambda _: engine.stop(),
    )
    providers = []
    for i, policy in enumerate(policies):
        address = f"provider-{i + 1}"
        providers.append(
            ProviderAgent(
                ChainClient(address, ledger, engine),
                timeline,
                policy,
                Orchestrator(engine, deployment or DeploymentModel(), streams, address),
                streams.stream(f"bid_pricing:{address}"),
                overhead_s=OVERHEAD,
            )
        )
    ledger.start()
    consumer.start()
    for p in providers:
        p.start()
    return World(engine, ledger, timeline, consumer, providers)


def _sent_txs(ledger: Ledger, sender: str):
    return [tx for b in ledger.blocks for tx in b.txs if tx.sender == sender]


def test_single_provider_happy_path():
    world = _world([ProviderPolicy()])
    world.engine.run_until(500.0)
    t = world.timeline
    assert t.completed
    assert world.consumer.sent == ["register", "announce_service", "choose_winner"]
    sa, bo, wc, sd, cd, fc = (t.milestones[p] for p in PHASE_ORDER)
    assert t.started_at < sa < bo < wc < sd < cd <= fc
    assert t.winner == "provider-1"
    assert t.agreed_price == 10


def test_choose_winner_follows_first_bid_after_overhead():
    world = _world([ProviderPolicy()])
    world.engine.run_until(500.0)
    choose = next(
        tx for tx in _sent_txs(world.ledger, "consumer-1") if tx.payload.method == "choose_winner"
    )
    assert choose.submitted_at == pytest.approx(
        world.timeline.milestones[Phase.BID_OFFERED] + OVERHEAD
    )


def test_bid_wait_extends_winner_phase():
    quick = _world([ProviderPolicy()])
    slow = _world([ProviderPolicy()], consumer_policy=ConsumerPolicy(bid_wait_s=5.0))
    quick.engine.run_until(500.0)
    slow.engine.run_until(500.0)

    def winner_phase(w):
        m = w.timeline.milestones
        return m[Phase.WINNER_CHOSEN] - m[Phase.BID_OFFERED]

    assert winner_phase(slow) == pytest.approx(winner_phase(quick) + 5.0)


def test_no_providers_times_out():
    world = _world([], timeout_s=300.0)
    world.engine.run_until(1000.0)
    t = world.timeline
    assert t.failed
    assert "timed out" in t.failure_reason
    assert world.engine.now == pytest.approx(t.started_at + 300.0)
    assert Phase.BID_OFFERED not in t.milestones


def test_lowest_price_provider_wins():
    world = _world([ProviderPolicy(pricing=p) for p in (7, 5, 9)])
    world.engine.run_until(500.0)
    assert world.timeline.winner == "provider-2"
    assert world.timeline.agreed_price == 5
    assert [p.won for p in world.providers] == [[], ["svc-0001"], []]
    assert [p.orchestrator.deployments for p in world.providers] == [0, 1, 0]


def test_losers_send_no_further_transactions():
    world = _world([ProviderPolicy(pricing=p) for p in (7, 5, 9)])
    world.engine.run_until(500.0)
    for provider in (world.providers[0], world.providers[2]):
        methods = [tx.payload.method for tx in _sent_txs(world.ledger, provider.address)]
        assert methods == ["register", "place_bid"]


def test_filter_rejects_announcement():
    picky = ProviderPolicy(capacity={"cpu_cores": 8})
    world = _world(
        [picky],
        consumer_policy=ConsumerPolicy(requirements_template={"cpu_cores": 64}),
        timeout_s=60.0,
    )
    world.engine.run_until(500.0)
    assert world.providers[0].bids_sent == {}
    assert world.timeline.failed


def test_on_chain_completion_sends_complete():
    world = _world([ProviderPolicy()], completion=CompletionMode.ON_CHAIN)
    world.engine.run_until(500.0)
    assert world.timeline.completed
    assert world.consumer.sent[-1] == "complete_federation"
    record = world.ledger.contract.read_record("svc-0001")
    assert record.state.value == "Completed"


def test_no_agent_transaction_reverts():
    world = _world([ProviderPolicy(pricing=p) for p in (4, 6)], completion=CompletionMode.ON_CHAIN)
    world.engine.run_until(500.0)
    assert not any(
        event.kind.value == "CallReverted" for _, _, event in world.ledger.delivery_log
    )


def test_deployment_failure_makes_consumer_time_out():
    world = _world([ProviderPolicy()], deployment=DeploymentModel(failure_probability=1.0),
                   timeout_s=120.0)
    world.engine.run_until(1000.0)
    assert world.timeline.failed
    assert world.providers[0].failed_deployments
    assert Phase.SERVICE_DEPLOYED not in world.timeline.milestones


def test_orchestrator_constant_latency():
    engine = SimEngine()
    orchestrator = Orchestrator(engine, DeploymentModel(), RngStreams(1), "provider-1")
    done = []
    engine.schedule(10.0, "deploy", lambda: orchestrator.deploy_service(
        "svc-0001", {"image": "nginx"}, on_done=lambda o: done.append((engine.now, o)),
        on_failed=pytest.fail,
    ))
    engine.run_until(100.0)
    (at, outcome), = done
    assert at == 46.0
    assert outcome.latency_s == 36.0
    assert outcome.endpoint == synthesize_endpoint("svc-0001", 1)


def test_orchestrator_breakdown_sums_to_draw():
    engine = SimEngine()
    model = DeploymentModel(latency="normal:36,2,0", onboarding_share=0.25)
    orchestrator = Orchestrator(engine, model, RngStreams(3), "provider-1")
    outcomes = []
    for i in range(20):
        orchestrator.deploy_service(f"svc-{i:04d}", {}, outcomes.append, pytest.fail)
    engine.run_until(500.0)
    for o in outcomes:
        assert o.onboarding_s + o.k8s_create_s == pytest.approx(o.latency_s)
        assert o.onboarding_s == pytest.approx(0.25 * o.latency_s)
    assert len({o.latency_s for o in outcomes}) > 1


def test_truncated_normal_deployment_mean():
    engine = SimEngine()
    orchestrator = Orchestrator(
        engine, DeploymentModel(latency="normal:36,2,0"), RngStreams(9), "provider-1"
    )
    outcomes = []
    for i in range(10_000):
        orchestrator.deploy_service(f"svc-{i}", {}, outcomes.append, pytest.fail)
    engine.run_until(1000.0)
    assert np.mean([o.latency_s for o in outcomes]) == pytest.approx(36.0, abs=0.1)


def test_endpoint_is_deterministic():
    a = synthesize_endpoint("svc-0003", 11)
    assert a == synthesize_endpoint("svc-0003", 11)
    assert a.external_ip == "10.0.3.1"
    assert a.port == 80
    assert a != synthesize_endpoint("svc-0003", 12)
