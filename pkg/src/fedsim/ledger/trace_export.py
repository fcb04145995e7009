"""Chain trace export: one JSON object per block, one block per line."""

from __future__ import annotations

import json
from collections.abc import Iterable
from pathlib import Path

from fedsim.exceptions import ExportError
from fedsim.models.domain import Block


def block_to_json(block: Block) -> dict:
    return {
        "height": block.height,
        "sealed_at": round(block.sealed_at, 6),
        "txs": [
            {"tx_id": tx.tx_id, "sender": tx.sender, "call": tx.payload.to_json()}
            for tx in block.txs
        ],
    }


def write_chain_trace(blocks: Iterable[Block], path: str | Path) -> int:
    """Write JSON-lines; returns the number of blocks written."""
    target = Path(path)
    count = 0
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", encoding="utf-8") as f:
            for block in blocks:
                f.write(json.dumps(block_to_json(block), sort_keys=False) + "\n")
                count += 1
    except OSError as e:
        raise ExportError(f"cannot write chain trace to {target}: {e}") from e
    return count
