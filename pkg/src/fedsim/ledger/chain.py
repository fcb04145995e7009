"""Simulated PoA ledger: mempool, periodic sealing, event delivery to clients."""

from __future__ import annotations

import hashlib
from collections import defaultdict, deque
from collections.abc import Callable, Iterable
from dataclasses import dataclass

from fedsim.config import constants
from fedsim.contract.federation import FederationContract
from fedsim.exceptions import LedgerError, RecordNotFoundError, UnknownClientError
from fedsim.models.domain import (
    Block,
    ChainEvent,
    ContractCall,
    EventKind,
    FederationRecord,
    Transaction,
)
from fedsim.models.schemas import NetworkProfile, ProfileKind
from fedsim.observability.logger import get_logger
from fedsim.observability.tracing import RunTrace
from fedsim.protocols.ledger import EventHandler
from fedsim.sim.engine import EventHandle, SimEngine
from fedsim.sim.rng import RngStreams

logger = get_logger("ledger")

MIN_BLOCK_INTERVAL_S = 1e-3


@dataclass
class _PendingTx:
    tx: Transaction
    eligible_height: int


@dataclass
class Subscription:
    sub_id: int
    client: str
    kinds: frozenset[EventKind] | None
    handler: EventHandler
    active: bool = True
    # Latest scheduled delivery; later blocks never overtake it
    delivered_until: float = 0.0

    def matches(self, event: ChainEvent) -> bool:
        return self.active and (self.kinds is None or event.kind in self.kinds)


class Ledger:
    """Single-sealer chain owned by one simulation run.

    Transactions reach the mempool one API-latency draw after submission and
    are sealed into the first eligible block: the next one on a private
    chain, the next one plus an extra-blocks draw on a public chain. An
    arrival at the very instant of a pending seal misses that block. Each
    subscription receives its events one API-latency draw after the seal,
    in block order.
    """

    def __init__(
        self,
        engine: SimEngine,
        profile: NetworkProfile,
        contract: FederationContract,
        rng: RngStreams,
        trace: RunTrace | None = None,
    ) -> None:
        self._engine = engine
        self.profile = profile
        self.contract = contract
        self._trace = trace
        self._api_rng = rng.stream(constants.STREAM_API_LATENCY)
        self._interval_rng = rng.stream(constants.STREAM_BLOCK_INTERVAL)
        self._inclusion_rng = rng.stream(constants.STREAM_INCLUSION)

        self.blocks: list[Block] = [Block(height=0, parent_ref=None, sealed_at=0.0)]
        self._mempool: list[_PendingTx] = []
        self._in_flight: dict[str, Transaction] = {}
        self._next_nonce: dict[str, int] = {}
        self._commit_nonce: dict[str, int] = {}
        self._subscriptions: list[Subscription] = []
        self._tx_seq = 0
        self._included: dict[str, int] = {}
        self._seal_handle: EventHandle | None = None
        self.next_seal_at: float | None = None
        self.delivery_log: list[tuple[float, str, ChainEvent]] = []

    # -- lifecycle -----------------------------------------------------------

    def start(self) -> None:
        """Arm the seal timer; genesis is already at height 0, t=0."""
        if self._seal_handle is not None:
            raise LedgerError("ledger already started")
        self._schedule_next_seal()

    @property
    def height(self) -> int:
        return self.blocks[-1].height

    @property
    def tip(self) -> Block:
        return self.blocks[-1]

    @property
    def mempool_size(self) -> int:
        return len(self._mempool)

    @property
    def in_flight(self) -> int:
        return len(self._in_flight)

    # -- clients -------------------------------------------------------------

    def register_client(self, address: str) -> None:
        self._next_nonce.setdefault(address, 0)
        self._commit_nonce.setdefault(address, 0)

    def api_latency(self) -> float:
        return self.profile.api_latency_s.sample(self._api_rng)

    def submit_tx(self, sender: str, payload: ContractCall) -> str:
        if sender not in self._next_nonce:
            raise UnknownClientError(f"unknown client {sender}")
        nonce = self._next_nonce[sender]
        self._next_nonce[sender] = nonce + 1
        tx = Transaction(
            tx_id=self._make_tx_id(sender, nonce),
            sender=sender,
            nonce=nonce,
            payload=payload,
            submitted_at=self._engine.now,
            seq=self._tx_seq,
        )
        self._tx_seq += 1
        self._in_flight[tx.tx_id] = tx
        delay = self.api_latency()
        self._engine.schedule_after(delay, "tx_arrival", lambda: self._arrive(tx), tx_id=tx.tx_id)
        self._narrate("tx_submitted", tx_id=tx.tx_id, sender=sender, call=payload.describe())
        logger.debug(
            "tx_submitted", tx_id=tx.tx_id, sender=sender, nonce=nonce, method=payload.method
        )
        return tx.tx_id

    def subscribe(
        self, client: str, kinds: Iterable[EventKind] | None, handler: EventHandler
    ) -> Subscription:
        sub = Subscription(
            sub_id=len(self._subscriptions),
            client=client,
            kinds=frozenset(kinds) if kinds is not None else None,
            handler=handler,
        )
        self._subscriptions.append(sub)
        return sub

    def unsubscribe(self, subscription: Subscription) -> None:
        subscription.active = False

    def read_record(
        self,
        client: str,
        service_id: str,
        callback: Callable[[FederationRecord | None], None],
    ) -> None:
        """View call: answered after one API-latency draw, no transaction."""

        def _answer() -> None:
            try:
                record: FederationRecord | None = self.contract.read_record(service_id)
            except RecordNotFoundError:
                record = None
            self._narrate("record_read", client=client, service_id=service_id,
                          state=record.state.value if record else "not-found")
            callback(record)

        self._engine.schedule_after(self.api_latency(), "view_call", _answer, client=client)

    # -- sealing -------------------------------------------------------------

    def seal_block(self) -> Block:
        now = self._engine.now
        height = self.height + 1
        ordered = self._select_for_block(height)
        block = Block(height=height, parent_ref=self.tip.height, sealed_at=now, txs=[])
        events: list[ChainEvent] = []
        for tx in ordered:
            block.txs.append(tx)
            self._included[tx.tx_id] = height
            self._commit_nonce[tx.sender] = tx.nonce + 1
            events.extend(self.contract.execute(tx, height, now))
        self.blocks.append(block)
        self._narrate("block_sealed", height=height, txs=len(block.txs))
        logger.debug("block_sealed", height=height, sealed_at=now, txs=len(block.txs))

        for event in events:
            for sub in self._subscriptions:
                if sub.matches(event):
                    at = max(now + self.api_latency(), sub.delivered_until)
                    sub.delivered_until = at
                    self._engine.schedule(
                        at,
                        "event_delivery",
                        self._make_delivery(sub, event),
                        client=sub.client,
                        event=event.kind.value,
                    )
        self._schedule_next_seal()
        return block

    def inclusion_height(self, tx_id: str) -> int | None:
        return self._included.get(tx_id)

    def verify_chain(self) -> None:
        """Walk parent refs from the tip; raise LedgerError on any break."""
        if not self.blocks or not self.blocks[0].is_genesis:
            raise LedgerError("missing genesis block")
        genesis = self.blocks[0]
        if genesis.txs or genesis.sealed_at != 0.0:
            raise LedgerError("genesis must be empty and sealed at t=0")
        steps = 0
        block = self.tip
        while not block.is_genesis:
            if block.parent_ref != block.height - 1:
                raise LedgerError(f"block {block.height} has parent_ref {block.parent_ref}")
            parent = self.blocks[block.parent_ref]
            if parent.height != block.height - 1:
                raise LedgerError(f"heights are not contiguous at {block.height}")
            if not block.sealed_at > parent.sealed_at:
                raise LedgerError(f"sealed_at does not increase at height {block.height}")
            block = parent
            steps += 1
        if steps != self.height:
            raise LedgerError(f"walked {steps} links for height {self.height}")
        seen: set[str] = set()
        for b in self.blocks:
            for tx in b.txs:
                if tx.tx_id in seen:
                    raise LedgerError(f"transaction {tx.tx_id} included twice")
                seen.add(tx.tx_id)

    # -- internals -----------------------------------------------------------

    def _arrive(self, tx: Transaction) -> None:
        now = self._engine.now
        tx.arrived_at = now
        del self._in_flight[tx.tx_id]
        target = self.height + 1
        if self.next_seal_at is not None and now >= self.next_seal_at:
            target += 1
        extra = int(self.profile.inclusion_extra_blocks.sample(self._inclusion_rng))
        self._mempool.append(_PendingTx(tx=tx, eligible_height=target + extra))
        self._narrate("tx_in_mempool", tx_id=tx.tx_id, eligible_height=target + extra)

    def _select_for_block(self, height: int) -> list[Transaction]:
        ready = sorted(
            (p for p in self._mempool if p.eligible_height <= height),
            key=lambda p: (p.tx.arrived_at, p.tx.seq),
        )
        by_sender: dict[str, list[Transaction]] = defaultdict(list)
        for p in ready:
            by_sender[p.tx.sender].append(p.tx)

        runs: dict[str, deque[Transaction]] = {}
        for sender, txs in by_sender.items():
            expected = self._commit_nonce.get(sender, 0)
            run: deque[Transaction] = deque()
            for tx in sorted(txs, key=lambda t: t.nonce):
                if tx.nonce != expected:
                    break
                run.append(tx)
                expected += 1
            runs[sender] = run

        # Each sender keeps its arrival slots but fills them in nonce order
        ordered: list[Transaction] = []
        for p in ready:
            run = runs[p.tx.sender]
            if run:
                ordered.append(run.popleft())
        chosen = {tx.tx_id for tx in ordered}
        self._mempool = [p for p in self._mempool if p.tx.tx_id not in chosen]
        return ordered

    def _schedule_next_seal(self) -> None:
        if self.profile.kind == ProfileKind.PRIVATE:
            fire_at = (self.height + 1) * self.profile.block_period_s
        else:
            interval = self.profile.block_period_s + self.profile.block_jitter.sample(
                self._interval_rng
            )
            fire_at = self.tip.sealed_at + max(interval, MIN_BLOCK_INTERVAL_S)
        self.next_seal_at = fire_at
        self._seal_handle = self._engine.schedule(fire_at, "block_seal", self.seal_block)

    def _make_delivery(self, sub: Subscription, event: ChainEvent) -> Callable[[], None]:
        def _deliver() -> None:
            if not sub.active:
                return
            self.delivery_log.append((self._engine.now, sub.client, event))
            self._narrate("event_delivered", client=sub.client, kind=event.kind.value,
                          block=event.emitted_in)
            sub.handler(event)

        return _deliver

    def _narrate(self, event: str, **detail) -> None:
        if self._trace is not None:
            self._trace.record(self._engine.now, "ledger", event, **detail)

    @staticmethod
    def _make_tx_id(sender: str, nonce: int) -> str:
        return "0x" + hashlib.sha256(f"{sender}:{nonce}".encode()).hexdigest()[:16]
