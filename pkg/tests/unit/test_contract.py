"""Tests for the federation contract state machine."""

import pytest

from fedsim.contract.invariants import record_violations
from fedsim.exceptions import ContractRevert, RecordNotFoundError
from fedsim.models.domain import (
    ContractCall,
    EndpointInfo,
    EventKind,
    RecordState,
    Role,
    Transaction,
)

ENDPOINT = EndpointInfo(external_ip="10.0.1.1", port=80, descriptor="nginx-lb")


def _tx(sender, call, tx_id="0xabc"):
    return Transaction(tx_id=tx_id, sender=sender, nonce=0, payload=call, submitted_at=0.0, seq=0)


def _announce(contract, requirements=None):
    return contract.announce_service("consumer", requirements or {"image": "nginx"}, block=1)


def test_register_once(contract):
    contract.register("a", Role.CONSUMER)
    assert contract.is_registered("a")
    with pytest.raises(ContractRevert, match="already registered"):
        contract.register("a", Role.PROVIDER)


def test_register_accepts_role_names(contract):
    contract.register("p", "Provider")
    assert contract.registry["p"].role == Role.PROVIDER
    with pytest.raises(ContractRevert, match="unknown role"):
        contract.register("q", "Miner")
    assert not contract.is_registered("q")


def test_announce_assigns_sequential_ids(registered_contract):
    assert _announce(registered_contract) == "svc-0001"
    assert _announce(registered_contract) == "svc-0002"
    record = registered_contract.read_record("svc-0001")
    assert record.state == RecordState.OPEN
    assert record.announcement.announced_block == 1


def test_only_consumers_announce(registered_contract, contract):
    with pytest.raises(ContractRevert, match="not a consumer"):
        registered_contract.announce_service("p1", {})
    with pytest.raises(ContractRevert, match="not registered"):
        contract.announce_service("ghost", {})


def test_bids_and_replacement(registered_contract):
    sid = _announce(registered_contract)
    registered_contract.place_bid("p1", sid, 10, block=2)
    registered_contract.place_bid("p2", sid, 8, block=2)
    registered_contract.place_bid("p1", sid, 6, block=3)
    record = registered_contract.read_record(sid)
    assert [(b.provider, b.price, b.bid_index) for b in record.bids] == [
        ("p1", 6, 0),
        ("p2", 8, 1),
    ]
    assert record.bids[0].bid_block == 3
    assert record_violations(record) == []


@pytest.mark.parametrize("price", [-1, 2.5, True, "10"])
def test_invalid_prices_revert(registered_contract, price):
    sid = _announce(registered_contract)
    with pytest.raises(ContractRevert, match="invalid price"):
        registered_contract.place_bid("p1", sid, price)


def test_consumer_cannot_bid(registered_contract):
    sid = _announce(registered_contract)
    with pytest.raises(ContractRevert):
        registered_contract.place_bid("consumer", sid, 1)


def test_dual_role_bids_on_others_only(contract):
    contract.register("both", Role.BOTH)
    contract.register("consumer", Role.CONSUMER)
    own = contract.announce_service("both", {})
    other = contract.announce_service("consumer", {})
    with pytest.raises(ContractRevert, match="own service"):
        contract.place_bid("both", own, 3)
    contract.place_bid("both", other, 3)


def test_choose_winner_lowest_price_then_earliest(registered_contract):
    sid = _announce(registered_contract)
    registered_contract.place_bid("p1", sid, 7)
    registered_contract.place_bid("p2", sid, 5)
    registered_contract.place_bid("p3", sid, 5)
    assert registered_contract.choose_winner("consumer", sid) == "p2"
    record = registered_contract.read_record(sid)
    assert (record.winner, record.agreed_price, record.state) == (
        "p2",
        5,
        RecordState.WINNER_CHOSEN,
    )
    with pytest.raises(ContractRevert, match="already chosen"):
        registered_contract.choose_winner("consumer", sid)
    with pytest.raises(ContractRevert, match="bidding closed"):
        registered_contract.place_bid("p1", sid, 1)


def test_choose_winner_requires_bids_and_consumer(registered_contract):
    sid = _announce(registered_contract)
    with pytest.raises(ContractRevert, match="no bids"):
        registered_contract.choose_winner("consumer", sid)
    registered_contract.place_bid("p1", sid, 4)
    with pytest.raises(ContractRevert, match="only the consumer"):
        registered_contract.choose_winner("p1", sid)


def test_full_lifecycle(registered_contract):
    sid = _announce(registered_contract)
    registered_contract.place_bid("p1", sid, 4)
    registered_contract.choose_winner("consumer", sid)
    with pytest.raises(ContractRevert, match="only the winner"):
        registered_contract.confirm_deployment("p2", sid, ENDPOINT)
    with pytest.raises(ContractRevert, match="wrong state"):
        registered_contract.complete_federation("consumer", sid)
    with pytest.raises(ContractRevert, match="endpoint"):
        registered_contract.confirm_deployment("p1", sid, {"ip": "1.2.3.4"})
    registered_contract.confirm_deployment("p1", sid, ENDPOINT)
    with pytest.raises(ContractRevert, match="only the consumer"):
        registered_contract.complete_federation("p1", sid)
    registered_contract.complete_federation("consumer", sid)

    record = registered_contract.read_record(sid)
    assert record.state == RecordState.COMPLETED
    assert record.deployment_info == ENDPOINT
    assert record.agreed_price == 4
    assert record_violations(record) == []
    kinds = [kind for kind, _ in registered_contract.event_log]
    assert kinds[-5:] == [
        EventKind.SERVICE_ANNOUNCED,
        EventKind.BID_OFFERED,
        EventKind.WINNER_CHOSEN,
        EventKind.DEPLOYMENT_CONFIRMED,
        EventKind.FEDERATION_COMPLETED,
    ]


def test_read_unknown_record(contract):
    with pytest.raises(RecordNotFoundError):
        contract.read_record("svc-0042")


def test_execute_emits_events_with_block_context(registered_contract):
    events = registered_contract.execute(
        _tx("consumer", ContractCall.announce_service({"image": "nginx"})), 7, 70.0
    )
    (event,) = events
    assert event.kind == EventKind.SERVICE_ANNOUNCED
    assert (event.emitted_in, event.sealed_at, event.tx_id) == (7, 70.0, "0xabc")
    assert event.payload["service_id"] == "svc-0001"
    assert registered_contract.read_record("svc-0001").announcement.announced_block == 7


def test_execute_turns_reverts_into_events(registered_contract):
    before = registered_contract.snapshot()
    for call in (
        ContractCall.choose_winner("svc-0404"),
        ContractCall("self_destruct", {}),
        ContractCall("place_bid", {"service": "svc-0001"}),
    ):
        (event,) = registered_contract.execute(_tx("p1", call), 3, 3.0)
        assert event.kind == EventKind.CALL_REVERTED
        assert event.payload["sender"] == "p1"
        assert event.payload["method"] == call.method
    assert registered_contract.snapshot() == before
