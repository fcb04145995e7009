"""Winner-selection policies for the reverse auction."""

from __future__ import annotations

from collections.abc import Sequence

from fedsim.models.domain import Bid


def lowest_price_earliest_bid(bids: Sequence[Bid]) -> Bid:
    """Minimum price; ties go to the smallest bid_index (earliest bidder)."""
    if not bids:
        raise ValueError("no bids to choose from")
    return min(bids, key=lambda b: (b.price, b.bid_index))
