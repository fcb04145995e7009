"""One end-to-end federation: engine, ledger, contract and agents wired together."""

from __future__ import annotations

from dataclasses import dataclass, field

from fedsim.config import constants
from fedsim.contract.federation import FederationContract
from fedsim.domains.client import ChainClient
from fedsim.domains.consumer import ConsumerAgent
from fedsim.domains.orchestrator import Orchestrator
from fedsim.domains.provider import ProviderAgent
from fedsim.ledger.chain import Ledger
from fedsim.models.domain import PhaseTimeline
from fedsim.models.schemas import ArrivalPhase, CampaignConfig, NetworkProfile
from fedsim.observability.tracing import RunTrace
from fedsim.sim.engine import SimEngine
from fedsim.sim.rng import RngStreams

CONSUMER_ADDRESS = "consumer-1"


def provider_address(index: int) -> str:
    return f"provider-{index + 1}"


def make_run_id(profile_name: str, block_period_s: float, replication: int) -> str:
    return f"{profile_name}-bp{block_period_s:g}-r{replication:04d}"


@dataclass
class ScenarioResult:
    timeline: PhaseTimeline
    ledger: Ledger
    consumer: ConsumerAgent
    providers: list[ProviderAgent] = field(default_factory=list)
    trace: RunTrace | None = None


class FederationScenario:
    """Builds a fresh simulation for one (profile, BP, replication) point."""

    def __init__(
        self,
        config: CampaignConfig,
        profile: NetworkProfile,
        replication: int,
        seed: int,
        *,
        n_providers: int | None = None,
        narrate: bool = False,
    ) -> None:
        self.config = config
        self.profile = profile
        self.replication = replication
        self.seed = seed
        self.n_providers = config.topology.n_providers if n_providers is None else n_providers
        self.narrate = narrate

    def run(self) -> ScenarioResult:
        config = self.config
        profile = self.profile
        engine = SimEngine(record_trace=self.narrate)
        rng = RngStreams(self.seed)
        trace = RunTrace() if self.narrate else None
        ledger = Ledger(engine, profile, FederationContract(), rng, trace)

        timeline = PhaseTimeline(
            run_id=make_run_id(profile.name, profile.block_period_s, self.replication),
            profile_name=profile.name,
            block_period_s=profile.block_period_s,
            seed=self.seed,
        )

        consumer = ConsumerAgent(
            ChainClient(CONSUMER_ADDRESS, ledger, engine, trace),
            timeline,
            config.consumer_policy,
            overhead_s=config.client_overhead_s,
            timeout_s=config.timeout_s,
            completion=config.complete_tx_mode,
            start_delay_s=self._arrival_offset(rng),
            on_finished=lambda _: engine.stop(),
        )
        providers = []
        for i in range(self.n_providers):
            address = provider_address(i)
            providers.append(
                ProviderAgent(
                    ChainClient(address, ledger, engine, trace),
                    timeline,
                    config.provider_policy,
                    Orchestrator(engine, config.deployment, rng, address, trace),
                    rng.stream(f"{constants.STREAM_BID_PRICING}:{address}"),
                    overhead_s=config.client_overhead_s,
                )
            )

        ledger.start()
        consumer.start()
        for provider in providers:
            provider.start()

        engine.run_until(self._horizon())
        if not consumer.finished:
            timeline.fail("simulation horizon reached before the run finished")
        return ScenarioResult(
            timeline=timeline,
            ledger=ledger,
            consumer=consumer,
            providers=providers,
            trace=trace,
        )

    def _arrival_offset(self, rng: RngStreams) -> float:
        if self.config.arrival_phase == ArrivalPhase.ALIGNED:
            return 0.0
        stream = rng.stream(constants.STREAM_ARRIVAL_PHASE)
        return float(stream.uniform(0.0, self.profile.block_period_s))

    def _horizon(self) -> float:
        period = self.profile.block_period_s + max(0.0, self.profile.block_jitter.expected())
        return constants.RUN_HORIZON_FACTOR * (self.config.timeout_s + 10 * period)
