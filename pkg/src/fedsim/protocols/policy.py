"""Protocol for the consumer's winner-selection policy."""

from __future__ import annotations

from collections.abc import Sequence
from typing import Protocol

from fedsim.models.domain import Bid


class WinnerPolicy(Protocol):
    def __call__(self, bids: Sequence[Bid]) -> Bid: ...
