"""Deterministic discrete-event engine: virtual clock, ordered event queue."""

from __future__ import annotations

import heapq
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

from fedsim.exceptions import ClockViolationError
from fedsim.observability.logger import get_logger

logger = get_logger("engine")

Action = Callable[[], None]


@dataclass(order=True)
class SimEvent:
    fire_at: float
    seq: int
    kind: str = field(compare=False)
    action: Action | None = field(default=None, compare=False, repr=False)
    payload: dict[str, Any] = field(default_factory=dict, compare=False)
    cancelled: bool = field(default=False, compare=False)
    fired: bool = field(default=False, compare=False)


@dataclass(frozen=True)
class EventHandle:
    event: SimEvent

    @property
    def fire_at(self) -> float:
        return self.event.fire_at

    @property
    def seq(self) -> int:
        return self.event.seq

    @property
    def cancelled(self) -> bool:
        return self.event.cancelled


class SimEngine:
    """Single-threaded event loop over virtual seconds.

    Events fire in (fire_at, seq) order; seq is the insertion counter, so
    simultaneous events run FIFO.
    """

    def __init__(self, record_trace: bool = False) -> None:
        self._now = 0.0
        self._queue: list[SimEvent] = []
        self._seq = 0
        self._stopped = False
        self._record_trace = record_trace
        self.trace: list[tuple[float, int, str]] = []
        self.scheduled = 0
        self.processed = 0
        self.cancelled = 0

    @property
    def now(self) -> float:
        return self._now

    @property
    def pending(self) -> int:
        return sum(1 for e in self._queue if not e.cancelled)

    def schedule(
        self, fire_at: float, kind: str, action: Action | None = None, **payload: Any
    ) -> EventHandle:
        if math.isnan(fire_at) or fire_at < self._now:
            raise ClockViolationError(fire_at, self._now)
        event = SimEvent(fire_at=fire_at, seq=self._seq, kind=kind, action=action, payload=payload)
        self._seq += 1
        heapq.heappush(self._queue, event)
        self.scheduled += 1
        return EventHandle(event)

    def schedule_after(
        self, delay: float, kind: str, action: Action | None = None, **payload: Any
    ) -> EventHandle:
        return self.schedule(self._now + delay, kind, action, **payload)

    def cancel(self, handle: EventHandle) -> bool:
        event = handle.event
        if event.cancelled or event.fired:
            return False
        event.cancelled = True
        self.cancelled += 1
        return True

    def stop(self) -> None:
        """Halt the current run_until after the event being processed."""
        self._stopped = True

    def run_until(self, end: float) -> int:
        if end < self._now:
            raise ClockViolationError(end, self._now)
        self._stopped = False
        steps = 0
        while self._queue and not self._stopped:
            head = self._queue[0]
            if head.fire_at > end:
                break
            heapq.heappop(self._queue)
            if head.cancelled:
                continue
            head.fired = True
            self._now = head.fire_at
            if self._record_trace:
                self.trace.append((head.fire_at, head.seq, head.kind))
            if head.action is not None:
                head.action()
            self.processed += 1
            steps += 1
        if not self._stopped:
            self._now = end
        logger.debug("run_until_done", end=end, steps=steps, now=self._now, stopped=self._stopped)
        return steps
