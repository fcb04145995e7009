"""Provider domain agent: bids on announcements and deploys what it wins."""

from __future__ import annotations

from typing import Any

import numpy as np

from fedsim.domains.client import ChainClient
from fedsim.domains.orchestrator import DeploymentOutcome, Orchestrator
from fedsim.exceptions import DeploymentError
from fedsim.models.domain import (
    ChainEvent,
    ContractCall,
    EventKind,
    Phase,
    PhaseTimeline,
    Role,
)
from fedsim.models.schemas import ProviderPolicy
from fedsim.observability.logger import get_logger

logger = get_logger("provider")

_WATCHED = (
    EventKind.OPERATOR_REGISTERED,
    EventKind.SERVICE_ANNOUNCED,
    EventKind.WINNER_CHOSEN,
    EventKind.CALL_REVERTED,
)


class ProviderAgent:
    def __init__(
        self,
        client: ChainClient,
        timeline: PhaseTimeline,
        policy: ProviderPolicy,
        orchestrator: Orchestrator,
        pricing_rng: np.random.Generator,
        *,
        overhead_s: float,
    ) -> None:
        self.client = client
        self.timeline = timeline
        self.policy = policy
        self.orchestrator = orchestrator
        self._pricing_rng = pricing_rng
        self._overhead = overhead_s

        self._registered = False
        self._backlog: list[ChainEvent] = []
        self._requirements: dict[str, dict[str, Any]] = {}
        self.bids_sent: dict[str, int] = {}
        self.won: list[str] = []
        self.failed_deployments: list[str] = []

    @property
    def address(self) -> str:
        return self.client.address

    def start(self) -> None:
        self.client.subscribe(_WATCHED, self._on_event)
        self.client.send(ContractCall.register(Role.PROVIDER))

    def _on_event(self, event: ChainEvent) -> None:
        if event.kind == EventKind.OPERATOR_REGISTERED:
            self._on_registered(event)
        elif event.kind == EventKind.SERVICE_ANNOUNCED:
            if self._registered:
                self._on_announced(event)
            else:
                self._backlog.append(event)
        elif event.kind == EventKind.WINNER_CHOSEN:
            self._on_winner(event)
        elif event.payload.get("sender") == self.address:
            logger.warning(
                "provider_call_reverted",
                provider=self.address,
                method=event.payload.get("method"),
                reason=event.payload.get("reason"),
            )

    def _on_registered(self, event: ChainEvent) -> None:
        if event.payload.get("address") != self.address or self._registered:
            return
        self._registered = True
        backlog, self._backlog = self._backlog, []
        for announcement in backlog:
            self._on_announced(announcement)

    def _on_announced(self, event: ChainEvent) -> None:
        service_id = event.payload["service_id"]
        requirements = event.payload.get("requirements", {})
        if event.payload.get("consumer") == self.address or service_id in self.bids_sent:
            return
        if not self.policy.accepts(requirements):
            self.client.narrate("announcement_rejected", service_id=service_id)
            return
        self._requirements[service_id] = dict(requirements)
        price = self._draw_price()
        self.bids_sent[service_id] = price
        self.client.after(
            self._overhead,
            "provider_bid",
            lambda: self.client.send(ContractCall.place_bid(service_id, price)),
        )

    def _on_winner(self, event: ChainEvent) -> None:
        service_id = event.payload["service_id"]
        if event.payload.get("winner") != self.address or service_id not in self.bids_sent:
            return
        self.won.append(service_id)
        self.client.stamp(self.timeline, Phase.WINNER_CHOSEN)
        self.orchestrator.deploy_service(
            service_id,
            self._requirements.get(service_id, {}),
            on_done=self._on_deployed,
            on_failed=self._on_deploy_failed,
        )

    def _on_deployed(self, outcome: DeploymentOutcome) -> None:
        self.client.stamp(self.timeline, Phase.SERVICE_DEPLOYED)
        self.timeline.deployment_breakdown = outcome.breakdown()
        self.client.after(
            self._overhead,
            "provider_confirm",
            lambda: self.client.send(
                ContractCall.confirm_deployment(outcome.service_id, outcome.endpoint)
            ),
        )

    def _on_deploy_failed(self, error: DeploymentError) -> None:
        self.failed_deployments.append(str(error))
        logger.warning("deployment_not_confirmed", provider=self.address, error=str(error))

    def _draw_price(self) -> int:
        return max(0, int(round(self.policy.pricing.sample(self._pricing_rng))))
