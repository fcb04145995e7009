"""Deterministic random streams: one numpy Generator per stochastic component."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

U64_MASK = (1 << 64) - 1


def _hash_to_u64(text: str) -> int:
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big", signed=False)


def derive_seed(base_seed: int, *parts: object) -> int:
    """Stable 64-bit child seed for (base_seed, parts...)."""
    if not 0 <= base_seed <= U64_MASK:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {base_seed}")
    label = ":".join(str(p) for p in parts)
    return _hash_to_u64(f"{base_seed}:{label}")


def derive_run_seed(
    base_seed: int, profile_name: str, block_period_s: float, replication: int
) -> int:
    if replication < 0:
        raise ValueError("replication must be non-negative")
    return derive_seed(base_seed, "run", profile_name, f"{block_period_s:g}", replication)


@dataclass
class RngStreams:
    """Named child streams from one base seed.

    Drawing from one stream never shifts another's sequence.
    """

    seed: int
    _streams: dict[str, np.random.Generator] = field(default_factory=dict, init=False, repr=False)

    def child_seed(self, stream_id: str) -> int:
        if not stream_id:
            raise ValueError("stream id must be non-empty")
        return derive_seed(self.seed, "stream", stream_id)

    def stream(self, stream_id: str) -> np.random.Generator:
        if stream_id not in self._streams:
            self._streams[stream_id] = np.random.default_rng(self.child_seed(stream_id))
        return self._streams[stream_id]

    def reset(self) -> None:
        """Drop all stream state; the same names replay identically afterwards."""
        self._streams.clear()
