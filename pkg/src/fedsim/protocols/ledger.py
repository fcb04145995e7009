"""Protocols for the ledger surface that domain clients talk to."""

from __future__ import annotations

from collections.abc import Callable, Iterable
from typing import Protocol

from fedsim.models.domain import ChainEvent, ContractCall, EventKind, FederationRecord

EventHandler = Callable[[ChainEvent], None]


class LedgerGateway(Protocol):
    def register_client(self, address: str) -> None: ...

    def submit_tx(self, sender: str, payload: ContractCall) -> str: ...

    def subscribe(
        self, client: str, kinds: Iterable[EventKind] | None, handler: EventHandler
    ) -> object: ...

    def read_record(
        self, client: str, service_id: str, callback: Callable[[FederationRecord | None], None]
    ) -> None: ...
