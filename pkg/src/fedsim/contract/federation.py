"""Federation smart contract: a deterministic state machine run at block-seal time.

Every public method checks all of its preconditions before touching state,
so a ContractRevert always leaves the contract exactly as it was.
"""

from __future__ import annotations

import copy
from collections.abc import Callable
from typing import Any, NoReturn

from fedsim.contract.policy import lowest_price_earliest_bid
from fedsim.exceptions import ContractRevert, RecordNotFoundError
from fedsim.models.domain import (
    Bid,
    ChainEvent,
    DomainId,
    EndpointInfo,
    EventKind,
    FederationRecord,
    RecordState,
    Role,
    ServiceAnnouncement,
    Transaction,
)
from fedsim.observability.logger import get_logger
from fedsim.protocols.policy import WinnerPolicy

logger = get_logger("contract")


class FederationContract:
    def __init__(self, winner_policy: WinnerPolicy = lowest_price_earliest_bid) -> None:
        self._registry: dict[str, DomainId] = {}
        self._records: dict[str, FederationRecord] = {}
        self._service_counter = 0
        self._winner_policy = winner_policy
        self.event_log: list[tuple[EventKind, dict[str, Any]]] = []
        self._dispatch: dict[str, Callable[..., Any]] = {
            "register": self.register,
            "announce_service": self.announce_service,
            "place_bid": self.place_bid,
            "choose_winner": self.choose_winner,
            "confirm_deployment": self.confirm_deployment,
            "complete_federation": self.complete_federation,
        }

    # -- transaction entry point -------------------------------------------

    def execute(self, tx: Transaction, block_height: int, sealed_at: float) -> list[ChainEvent]:
        """Run one sealed transaction; reverts become CallReverted events."""
        start = len(self.event_log)
        handler = self._dispatch.get(tx.payload.method)
        try:
            if handler is None:
                raise ContractRevert(tx.payload.method, "unknown method")
            try:
                handler(tx.sender, **tx.payload.args, block=block_height)
            except TypeError as exc:
                raise ContractRevert(tx.payload.method, f"malformed arguments: {exc}") from exc
        except ContractRevert as revert:
            logger.debug(
                "call_reverted",
                tx_id=tx.tx_id,
                sender=tx.sender,
                method=revert.method,
                reason=revert.reason,
            )
            return [
                ChainEvent(
                    emitted_in=block_height,
                    sealed_at=sealed_at,
                    tx_id=tx.tx_id,
                    kind=EventKind.CALL_REVERTED,
                    payload={"sender": tx.sender, "method": revert.method, "reason": revert.reason},
                )
            ]
        return [
            ChainEvent(
                emitted_in=block_height,
                sealed_at=sealed_at,
                tx_id=tx.tx_id,
                kind=kind,
                payload=payload,
            )
            for kind, payload in self.event_log[start:]
        ]

    # -- state-changing calls ------------------------------------------------

    def register(self, caller: str, role: Role, *, block: int = 0) -> None:
        if caller in self._registry:
            self._revert("register", "caller already registered")
        if not isinstance(role, Role):
            try:
                role = Role(role)
            except ValueError:
                self._revert("register", f"unknown role {role!r}")
        self._registry[caller] = DomainId(address=caller, role=role)
        self._emit(EventKind.OPERATOR_REGISTERED, address=caller, role=role.value)

    def announce_service(
        self, caller: str, requirements: dict[str, Any], *, block: int = 0
    ) -> str:
        domain = self._registry.get(caller)
        if domain is None:
            self._revert("announce_service", "caller not registered")
        if not domain.role.can_consume:
            self._revert("announce_service", "caller is not a consumer")
        self._service_counter += 1
        service_id = f"svc-{self._service_counter:04d}"
        announcement = ServiceAnnouncement(
            service_id=service_id,
            consumer=caller,
            requirements=dict(requirements),
            announced_block=block,
        )
        self._records[service_id] = FederationRecord(announcement=announcement)
        self._emit(
            EventKind.SERVICE_ANNOUNCED,
            service_id=service_id,
            consumer=caller,
            requirements=dict(requirements),
        )
        return service_id

    def place_bid(self, caller: str, service_id: str, price: int, *, block: int = 0) -> None:
        record = self._record_or_revert("place_bid", service_id)
        if record.state != RecordState.OPEN:
            self._revert("place_bid", f"bidding closed (state {record.state.value})")
        domain = self._registry.get(caller)
        if domain is None or not domain.role.can_provide:
            self._revert("place_bid", "caller is not a registered provider")
        if caller == record.consumer:
            self._revert("place_bid", "consumer cannot bid on its own service")
        if isinstance(price, bool) or not isinstance(price, int) or price < 0:
            self._revert("place_bid", f"invalid price {price!r}")

        existing = record.live_bid(caller)
        if existing is not None:
            existing.price = price
            existing.bid_block = block
            bid = existing
        else:
            bid = Bid(
                service_id=service_id,
                provider=caller,
                price=price,
                bid_block=block,
                bid_index=len(record.bids),
            )
            record.bids.append(bid)
        self._emit(
            EventKind.BID_OFFERED,
            service_id=service_id,
            provider=caller,
            price=price,
            bid_index=bid.bid_index,
        )

    def choose_winner(self, caller: str, service_id: str, *, block: int = 0) -> str:
        record = self._record_or_revert("choose_winner", service_id)
        if caller != record.consumer:
            self._revert("choose_winner", "only the consumer can choose a winner")
        if record.state != RecordState.OPEN:
            self._revert("choose_winner", "winner already chosen")
        if not record.bids:
            self._revert("choose_winner", "no bids to choose from")

        winning = self._winner_policy(record.bids)
        record.winner = winning.provider
        record.agreed_price = winning.price
        record.state = RecordState.WINNER_CHOSEN
        self._emit(
            EventKind.WINNER_CHOSEN,
            service_id=service_id,
            winner=winning.provider,
            price=winning.price,
        )
        return winning.provider

    def confirm_deployment(
        self, caller: str, service_id: str, endpoint: EndpointInfo, *, block: int = 0
    ) -> None:
        record = self._record_or_revert("confirm_deployment", service_id)
        if record.winner is None or caller != record.winner:
            self._revert("confirm_deployment", "only the winner can confirm deployment")
        if record.state != RecordState.WINNER_CHOSEN:
            self._revert("confirm_deployment", f"wrong state {record.state.value}")
        if not isinstance(endpoint, EndpointInfo):
            self._revert("confirm_deployment", "endpoint info missing")

        record.deployment_info = endpoint
        record.state = RecordState.DEPLOYED
        self._emit(
            EventKind.DEPLOYMENT_CONFIRMED,
            service_id=service_id,
            provider=caller,
            endpoint=endpoint.to_dict(),
        )

    def complete_federation(self, caller: str, service_id: str, *, block: int = 0) -> None:
        record = self._record_or_revert("complete_federation", service_id)
        if caller != record.consumer:
            self._revert("complete_federation", "only the consumer can complete")
        if record.state != RecordState.DEPLOYED:
            self._revert("complete_federation", f"wrong state {record.state.value}")

        record.state = RecordState.COMPLETED
        self._emit(
            EventKind.FEDERATION_COMPLETED,
            service_id=service_id,
            provider=record.winner,
            agreed_price=record.agreed_price,
        )

    # -- views ---------------------------------------------------------------

    def read_record(self, service_id: str) -> FederationRecord:
        record = self._records.get(service_id)
        if record is None:
            raise RecordNotFoundError(service_id)
        return copy.deepcopy(record)

    def is_registered(self, address: str) -> bool:
        return address in self._registry

    @property
    def registry(self) -> dict[str, DomainId]:
        return dict(self._registry)

    @property
    def service_ids(self) -> list[str]:
        return list(self._records)

    def snapshot(self) -> tuple:
        """Deep copy of all mutable state, comparable with ==."""
        return copy.deepcopy((self._registry, self._records, self._service_counter))

    # -- helpers -------------------------------------------------------------

    def _record_or_revert(self, method: str, service_id: str) -> FederationRecord:
        record = self._records.get(service_id)
        if record is None:
            self._revert(method, f"unknown service {service_id}")
        return record

    def _emit(self, kind: EventKind, **payload: Any) -> None:
        self.event_log.append((kind, payload))

    @staticmethod
    def _revert(method: str, reason: str) -> NoReturn:
        raise ContractRevert(method, reason)
