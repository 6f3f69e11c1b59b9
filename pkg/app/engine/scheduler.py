"""Discrete-event scheduler with a monotone clock and FIFO tie-breaking."""
import heapq
import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, List, Optional, Tuple

from ..errors import SchedulingError

logger = logging.getLogger(__name__)

TraceRow = Tuple[float, int, int, str]


@dataclass(slots=True)
class Event:
    """A time-stamped occurrence addressed to one node."""
    fire_at: float
    target: int
    kind: str
    action: Callable[[], Any]
    payload: Any = None
    seq: int = -1
    cancelled: bool = field(default=False, repr=False)

    def cancel(self) -> None:
        self.cancelled = True


class EventScheduler:
    """Priority queue keyed by ``(fire_at, seq)``.

    ``seq`` comes from one global counter, so events sharing a timestamp are
    dispatched in the order they were scheduled.
    """

    def __init__(self, record_trace: bool = False):
        self._queue: List[Tuple[float, int, Event]] = []
        self._seq = itertools.count()
        self.now = 0.0
        self.dispatched = 0
        self.trace: Optional[List[TraceRow]] = [] if record_trace else None

    def __len__(self) -> int:
        return len(self._queue)

    def schedule(self, event: Event) -> Event:
        if event.fire_at < self.now:
            raise SchedulingError(
                f"event {event.kind!r} for target {event.target} at t={event.fire_at} "
                f"is in the past (clock={self.now})"
            )
        event.seq = next(self._seq)
        heapq.heappush(self._queue, (event.fire_at, event.seq, event))
        return event

    def at(self, fire_at: float, target: int, kind: str, action: Callable[[], Any], payload: Any = None) -> Event:
        return self.schedule(Event(fire_at, target, kind, action, payload))

    def after(self, delay: float, target: int, kind: str, action: Callable[[], Any], payload: Any = None) -> Event:
        return self.schedule(Event(self.now + delay, target, kind, action, payload))

    def pending(self, kind: Optional[str] = None) -> List[Event]:
        """Live queued events, optionally filtered by kind."""
        return [e for _, _, e in self._queue if not e.cancelled and (kind is None or e.kind == kind)]

    def run_until(self, t_end: float) -> int:
        """Dispatch every event with ``fire_at <= t_end``; returns the dispatch count."""
        if t_end < self.now:
            raise SchedulingError(f"run_until({t_end}) is before the clock ({self.now})")
        count = 0
        queue = self._queue
        while queue and queue[0][0] <= t_end:
            fire_at, seq, event = heapq.heappop(queue)
            if event.cancelled:
                continue
            self.now = fire_at
            if self.trace is not None:
                self.trace.append((fire_at, seq, event.target, event.kind))
            event.action()
            count += 1
        self.now = t_end
        self.dispatched += count
        logger.debug("run_until(%.3f): %d events dispatched, %d queued", t_end, count, len(queue))
        return count
