"""Core domain objects used throughout the simulator."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class Role(str, Enum):
    CONSUMER = "Consumer"
    PROVIDER = "Provider"
    BOTH = "Both"

    @property
    def can_consume(self) -> bool:
        return self in (Role.CONSUMER, Role.BOTH)

    @property
    def can_provide(self) -> bool:
        return self in (Role.PROVIDER, Role.BOTH)


class RecordState(str, Enum):
    OPEN = "Open"
    WINNER_CHOSEN = "WinnerChosen"
    DEPLOYED = "Deployed"
    COMPLETED = "Completed"

    @property
    def rank(self) -> int:
        return _STATE_RANK[self]


_STATE_RANK = {
    RecordState.OPEN: 0,
    RecordState.WINNER_CHOSEN: 1,
    RecordState.DEPLOYED: 2,
    RecordState.COMPLETED: 3,
}


class EventKind(str, Enum):
    OPERATOR_REGISTERED = "OperatorRegistered"
    SERVICE_ANNOUNCED = "ServiceAnnounced"
    BID_OFFERED = "BidOffered"
    WINNER_CHOSEN = "WinnerChosen"
    DEPLOYMENT_CONFIRMED = "DeploymentConfirmed"
    FEDERATION_COMPLETED = "FederationCompleted"
    CALL_REVERTED = "CallReverted"


class Phase(str, Enum):
    SERVICE_ANNOUNCED = "ServiceAnnounced"
    BID_OFFERED = "BidOffered"
    WINNER_CHOSEN = "WinnerChosen"
    SERVICE_DEPLOYED = "ServiceDeployed"
    CONFIRM_DEPLOYMENT = "ConfirmDeployment"
    FEDERATION_COMPLETED = "FederationCompleted"


PHASE_ORDER: tuple[Phase, ...] = tuple(Phase)


@dataclass(frozen=True)
class DomainId:
    address: str
    role: Role


@dataclass(frozen=True)
class EndpointInfo:
    external_ip: str
    port: int
    descriptor: str

    def to_dict(self) -> dict[str, Any]:
        return {"external_ip": self.external_ip, "port": self.port, "descriptor": self.descriptor}


@dataclass
class ServiceAnnouncement:
    service_id: str
    consumer: str  # domain address
    requirements: dict[str, Any]
    announced_block: int


@dataclass
class Bid:
    service_id: str
    provider: str  # domain address
    price: int
    bid_block: int
    bid_index: int


@dataclass
class FederationRecord:
    announcement: ServiceAnnouncement
    bids: list[Bid] = field(default_factory=list)
    winner: str | None = None
    agreed_price: int | None = None
    deployment_info: EndpointInfo | None = None
    state: RecordState = RecordState.OPEN

    @property
    def service_id(self) -> str:
        return self.announcement.service_id

    @property
    def consumer(self) -> str:
        return self.announcement.consumer

    def live_bid(self, provider: str) -> Bid | None:
        for bid in self.bids:
            if bid.provider == provider:
                return bid
        return None


@dataclass(frozen=True)
class ContractCall:
    """A federation contract invocation carried as a transaction payload."""

    method: str
    args: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def register(cls, role: Role) -> ContractCall:
        return cls("register", {"role": role})

    @classmethod
    def announce_service(cls, requirements: dict[str, Any]) -> ContractCall:
        return cls("announce_service", {"requirements": dict(requirements)})

    @classmethod
    def place_bid(cls, service_id: str, price: int) -> ContractCall:
        return cls("place_bid", {"service_id": service_id, "price": price})

    @classmethod
    def choose_winner(cls, service_id: str) -> ContractCall:
        return cls("choose_winner", {"service_id": service_id})

    @classmethod
    def confirm_deployment(cls, service_id: str, endpoint: EndpointInfo) -> ContractCall:
        return cls("confirm_deployment", {"service_id": service_id, "endpoint": endpoint})

    @classmethod
    def complete_federation(cls, service_id: str) -> ContractCall:
        return cls("complete_federation", {"service_id": service_id})

    def to_json(self) -> dict[str, Any]:
        args: dict[str, Any] = {}
        for key, value in self.args.items():
            if isinstance(value, EndpointInfo):
                args[key] = value.to_dict()
            elif isinstance(value, Enum):
                args[key] = value.value
            else:
                args[key] = value
        return {"method": self.method, "args": args}

    def describe(self) -> str:
        parts = []
        for key, value in self.to_json()["args"].items():
            parts.append(f"{key}={value}")
        return f"{self.method}({', '.join(parts)})"


@dataclass
class Transaction:
    tx_id: str
    sender: str
    nonce: int
    payload: ContractCall
    submitted_at: float
    seq: int
    arrived_at: float | None = None


@dataclass
class Block:
    height: int
    parent_ref: int | None  # height of the parent; structural stand-in for its hash
    sealed_at: float
    txs: list[Transaction] = field(default_factory=list)

    @property
    def is_genesis(self) -> bool:
        return self.height == 0


@dataclass(frozen=True)
class ChainEvent:
    emitted_in: int
    sealed_at: float
    tx_id: str
    kind: EventKind
    payload: dict[str, Any] = field(default_factory=dict)


@dataclass
class PhaseTimeline:
    run_id: str
    profile_name: str
    block_period_s: float
    seed: int = 0
    started_at: float | None = None
    milestones: dict[Phase, float] = field(default_factory=dict)
    failed: bool = False
    failure_reason: str | None = None
    service_id: str | None = None
    winner: str | None = None
    agreed_price: int | None = None
    deployment_breakdown: dict[str, float] = field(default_factory=dict)

    def stamp(self, phase: Phase, at: float) -> None:
        # First observation wins; later duplicate deliveries are ignored
        self.milestones.setdefault(phase, at)

    def fail(self, reason: str) -> None:
        if not self.failed:
            self.failed = True
            self.failure_reason = reason

    @property
    def completed(self) -> bool:
        return not self.failed and Phase.FEDERATION_COMPLETED in self.milestones

    @property
    def total_s(self) -> float | None:
        if not self.completed or self.started_at is None:
            return None
        return self.milestones[Phase.FEDERATION_COMPLETED] - self.started_at


@dataclass
class PhaseStats:
    profile_name: str
    block_period_s: float
    phase: str
    mean_s: float | None
    stddev_s: float | None
    p50_s: float | None
    p95_s: float | None
    n_runs: int
