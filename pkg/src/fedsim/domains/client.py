"""Per-domain blockchain client: the agent's only way to reach the ledger."""

from __future__ import annotations

from collections.abc import Callable, Iterable

from fedsim.models.domain import (
    ChainEvent,
    ContractCall,
    EventKind,
    FederationRecord,
    Phase,
    PhaseTimeline,
)
from fedsim.observability.tracing import RunTrace
from fedsim.protocols.ledger import LedgerGateway
from fedsim.sim.engine import EventHandle, SimEngine


class ChainClient:
    """Binds one domain address to the ledger and narrates what it does."""

    def __init__(
        self,
        address: str,
        ledger: LedgerGateway,
        engine: SimEngine,
        trace: RunTrace | None = None,
    ) -> None:
        self.address = address
        self._ledger = ledger
        self._engine = engine
        self._trace = trace
        ledger.register_client(address)

    @property
    def now(self) -> float:
        return self._engine.now

    def subscribe(
        self, kinds: Iterable[EventKind] | None, handler: Callable[[ChainEvent], None]
    ) -> object:
        return self._ledger.subscribe(self.address, kinds, handler)

    def send(self, call: ContractCall) -> str:
        return self._ledger.submit_tx(self.address, call)

    def read_record(
        self, service_id: str, callback: Callable[[FederationRecord | None], None]
    ) -> None:
        self.narrate("read_record", service_id=service_id)
        self._ledger.read_record(self.address, service_id, callback)

    def after(self, delay: float, kind: str, action: Callable[[], None]) -> EventHandle:
        return self._engine.schedule_after(delay, kind, action, client=self.address)

    def cancel(self, handle: EventHandle) -> bool:
        return self._engine.cancel(handle)

    def stamp(self, timeline: PhaseTimeline, phase: Phase) -> None:
        if phase in timeline.milestones:
            return
        timeline.stamp(phase, self.now)
        self.narrate("milestone", phase=phase.value)

    def narrate(self, event: str, **detail) -> None:
        if self._trace is not None:
            self._trace.record(self.now, self.address, event, **detail)
