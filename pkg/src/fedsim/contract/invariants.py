"""Structural checks over federation records."""

from __future__ import annotations

from fedsim.models.domain import FederationRecord, RecordState


def record_violations(record: FederationRecord) -> list[str]:
    """Return every broken FederationRecord invariant (empty when healthy)."""
    problems: list[str] = []
    rank = record.state.rank
    if (record.winner is not None) != (rank >= RecordState.WINNER_CHOSEN.rank):
        problems.append(f"winner presence does not match state {record.state.value}")
    if (record.agreed_price is not None) != (rank >= RecordState.WINNER_CHOSEN.rank):
        problems.append(f"agreed_price presence does not match state {record.state.value}")
    if (record.deployment_info is not None) != (rank >= RecordState.DEPLOYED.rank):
        problems.append(f"deployment_info presence does not match state {record.state.value}")
    providers = [b.provider for b in record.bids]
    if len(providers) != len(set(providers)):
        problems.append("more than one live bid for a provider")
    if record.consumer in providers:
        problems.append("consumer holds a bid on its own service")
    if [b.bid_index for b in record.bids] != list(range(len(record.bids))):
        problems.append("bid indices are not contiguous arrival slots")
    if record.winner is not None:
        winning = record.live_bid(record.winner)
        if winning is None:
            problems.append("winner has no bid")
        elif winning.price != record.agreed_price:
            problems.append("agreed_price differs from the winner's bid")
    return problems
