"""Consumer domain agent: announces a service and drives the federation to completion."""

from __future__ import annotations

from collections.abc import Callable

from fedsim.domains.client import ChainClient
from fedsim.models.domain import (
    ChainEvent,
    ContractCall,
    EventKind,
    FederationRecord,
    Phase,
    PhaseTimeline,
    RecordState,
    Role,
)
from fedsim.models.schemas import CompletionMode, ConsumerPolicy
from fedsim.observability.logger import get_logger
from fedsim.sim.engine import EventHandle

logger = get_logger("consumer")

_WATCHED = (
    EventKind.OPERATOR_REGISTERED,
    EventKind.SERVICE_ANNOUNCED,
    EventKind.BID_OFFERED,
    EventKind.DEPLOYMENT_CONFIRMED,
    EventKind.FEDERATION_COMPLETED,
    EventKind.CALL_REVERTED,
)


class ConsumerAgent:
    """Event-driven consumer.

    Sequence: register, wait for its own registration, wait ``start_delay``
    (the arrival offset), then announce. The first BidOffered starts the
    bid window; when it closes the consumer picks the winner. A confirmed
    deployment is checked with a record read, then completed on-chain or
    only measured, depending on the completion mode.
    """

    def __init__(
        self,
        client: ChainClient,
        timeline: PhaseTimeline,
        policy: ConsumerPolicy,
        *,
        overhead_s: float,
        timeout_s: float,
        completion: CompletionMode = CompletionMode.MEASUREMENT_ONLY,
        start_delay_s: float = 0.0,
        on_finished: Callable[[PhaseTimeline], None] | None = None,
    ) -> None:
        self.client = client
        self.timeline = timeline
        self.policy = policy
        self._overhead = overhead_s
        self._timeout = timeout_s
        self._completion = completion
        self._start_delay = start_delay_s
        self._on_finished = on_finished

        self.service_id: str | None = None
        self._announce_tx: str | None = None
        self._registered = False
        self._choosing = False
        self._completing = False
        self._finished = False
        self._timeout_handle: EventHandle | None = None
        self.sent: list[str] = []

    @property
    def address(self) -> str:
        return self.client.address

    @property
    def finished(self) -> bool:
        return self._finished

    def start(self) -> None:
        self.client.subscribe(_WATCHED, self._on_event)
        self._send(ContractCall.register(Role.CONSUMER))

    # -- event handling ------------------------------------------------------

    def _on_event(self, event: ChainEvent) -> None:
        if self._finished:
            return
        handler = {
            EventKind.OPERATOR_REGISTERED: self._on_registered,
            EventKind.SERVICE_ANNOUNCED: self._on_announced,
            EventKind.BID_OFFERED: self._on_bid,
            EventKind.DEPLOYMENT_CONFIRMED: self._on_confirmed,
            EventKind.FEDERATION_COMPLETED: self._on_completed,
            EventKind.CALL_REVERTED: self._on_reverted,
        }[event.kind]
        handler(event)

    def _on_registered(self, event: ChainEvent) -> None:
        if event.payload.get("address") != self.address or self._registered:
            return
        self._registered = True
        self.client.after(self._start_delay, "consumer_begin", self._begin)

    def _begin(self) -> None:
        self.timeline.started_at = self.client.now
        self.client.narrate("federation_started")
        self._timeout_handle = self.client.after(self._timeout, "consumer_timeout", self._time_out)
        requirements = dict(self.policy.requirements_template)
        self.client.after(
            self._overhead,
            "consumer_announce",
            lambda: self._announce(requirements),
        )

    def _announce(self, requirements: dict) -> None:
        self._announce_tx = self._send(ContractCall.announce_service(requirements))

    def _on_announced(self, event: ChainEvent) -> None:
        if event.tx_id != self._announce_tx:
            return
        self.service_id = event.payload["service_id"]
        self.timeline.service_id = self.service_id
        self.client.stamp(self.timeline, Phase.SERVICE_ANNOUNCED)

    def _on_bid(self, event: ChainEvent) -> None:
        if self.service_id is None or event.payload.get("service_id") != self.service_id:
            return
        self.client.narrate(
            "bid_seen", provider=event.payload["provider"], price=event.payload["price"]
        )
        if self._choosing:
            return
        self._choosing = True
        self.client.stamp(self.timeline, Phase.BID_OFFERED)
        self.client.after(
            self.policy.bid_wait_s + self._overhead, "consumer_choose", self._choose_winner
        )

    def _choose_winner(self) -> None:
        if self._finished or self.service_id is None:
            return
        self._send(ContractCall.choose_winner(self.service_id))

    def _on_confirmed(self, event: ChainEvent) -> None:
        if event.payload.get("service_id") != self.service_id:
            return
        self.client.stamp(self.timeline, Phase.CONFIRM_DEPLOYMENT)
        self.client.read_record(self.service_id, self._on_record)

    def _on_record(self, record: FederationRecord | None) -> None:
        if self._finished:
            return
        if record is None or record.state.rank < RecordState.DEPLOYED.rank:
            self._fail(f"record for {self.service_id} not deployed on read")
            return
        self.timeline.winner = record.winner
        self.timeline.agreed_price = record.agreed_price
        if self._completion == CompletionMode.MEASUREMENT_ONLY:
            self.client.stamp(self.timeline, Phase.FEDERATION_COMPLETED)
            self._finish()
            return
        if not self._completing:
            self._completing = True
            self.client.after(self._overhead, "consumer_complete", self._complete)

    def _complete(self) -> None:
        if self._finished or self.service_id is None:
            return
        self._send(ContractCall.complete_federation(self.service_id))

    def _on_completed(self, event: ChainEvent) -> None:
        if event.payload.get("service_id") != self.service_id:
            return
        self.client.stamp(self.timeline, Phase.FEDERATION_COMPLETED)
        self._finish()

    def _on_reverted(self, event: ChainEvent) -> None:
        if event.payload.get("sender") != self.address:
            return
        logger.warning(
            "consumer_call_reverted",
            consumer=self.address,
            method=event.payload.get("method"),
            reason=event.payload.get("reason"),
        )
        self._fail(f"{event.payload.get('method')} reverted: {event.payload.get('reason')}")

    def _time_out(self) -> None:
        if self._finished:
            return
        self._fail(f"timed out after {self._timeout:g}s")

    # -- helpers -------------------------------------------------------------

    def _send(self, call: ContractCall) -> str:
        tx_id = self.client.send(call)
        self.sent.append(call.method)
        return tx_id

    def _fail(self, reason: str) -> None:
        self.timeline.fail(reason)
        self.client.narrate("run_failed", reason=reason)
        self._finish()

    def _finish(self) -> None:
        if self._finished:
            return
        self._finished = True
        if self._timeout_handle is not None:
            self.client.cancel(self._timeout_handle)
        if self._on_finished is not None:
            self._on_finished(self.timeline)
