"""Run narration: timestamped entries recorded while a federation executes."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class TraceEntry:
    at: float
    source: str
    event: str
    detail: dict = field(default_factory=dict)

    def render(self) -> str:
        details = " ".join(f"{k}={v}" for k, v in self.detail.items())
        return f"t={self.at:10.3f}s  {self.source:<12} {self.event:<22} {details}".rstrip()


class RunTrace:
    """Collects narration entries in the order the engine produces them."""

    def __init__(self) -> None:
        self.entries: list[TraceEntry] = []

    def record(self, at: float, source: str, event: str, **detail) -> None:
        self.entries.append(TraceEntry(at=at, source=source, event=event, detail=detail))

    def count(self, event: str) -> int:
        return sum(1 for e in self.entries if e.event == event)

    def lines(self) -> list[str]:
        return [e.render() for e in self.entries]
