"""Unit-disk radio medium with serialization delay and MAC-layer link sensing."""
import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Dict, FrozenSet, List, Optional

import numpy as np

from ..engine import Event, EventScheduler, RandomSource
from ..errors import TopologyError
from ..routing.base import LinkEvent, LinkKind, Packet, UnicastResult
from .mobility import Position, RandomWaypoint

if TYPE_CHECKING:
    from ..metrics import MetricsCollector
    from .node import Node

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class RadioParams:
    range: float = 250.0
    bandwidth: float = 2_000_000.0
    jitter_max: float = 0.001

    def __post_init__(self):
        if self.range <= 0 or self.bandwidth <= 0 or self.jitter_max < 0:
            raise ValueError(f"invalid radio parameters: {self}")


def in_range(a: Position, b: Position, range: float) -> bool:
    """Distance exactly equal to ``range`` counts as in range."""
    dx = a.x - b.x
    dy = a.y - b.y
    return dx * dx + dy * dy <= range * range


class Medium:
    def __init__(
        self,
        params: RadioParams,
        mobility: RandomWaypoint,
        scheduler: EventScheduler,
        rng: RandomSource,
        metrics: "MetricsCollector",
    ):
        self.params = params
        self.mobility = mobility
        self.scheduler = scheduler
        self.rng = rng
        self.metrics = metrics
        self.nodes: Dict[int, "Node"] = {}
        self.sensed: Dict[int, FrozenSet[int]] = {}
        self._lsm_enabled: Dict[int, bool] = {}
        self.tx_control = 0
        self.tx_data = 0
        self.link_events: List[LinkEvent] = []
        self._nbr_positions: Optional[np.ndarray] = None
        self._nbr_cache: Dict[int, List[int]] = {}

    def attach(self, node: "Node") -> None:
        self.nodes[node.node_id] = node
        self.sensed[node.node_id] = frozenset()

    def _check(self, node: int) -> None:
        if node not in self.nodes:
            raise TopologyError(f"unknown node id {node}")

    def neighbors(self, node: int, now: float) -> List[int]:
        """Ids currently in range of ``node``, ascending.

        Cached for as long as the mobility model hands back the same position array.
        """
        pos = self.mobility.positions(now)
        if pos is not self._nbr_positions:
            self._nbr_positions = pos
            self._nbr_cache = {}
        cached = self._nbr_cache.get(node)
        if cached is not None:
            return cached
        d = pos - pos[node]
        within = (d[:, 0] * d[:, 0] + d[:, 1] * d[:, 1]) <= self.params.range * self.params.range
        within[node] = False
        result = self._nbr_cache[node] = np.flatnonzero(within).tolist()
        return result

    def tx_delay(self, size: int) -> float:
        return size * 8 / self.params.bandwidth

    def _jitter(self) -> float:
        if self.params.jitter_max == 0:
            return 0.0
        return self.rng.uniform(0.0, self.params.jitter_max)

    def _count(self, src: int, pkt: Packet) -> None:
        if pkt.is_control:
            self.tx_control += 1
            self.metrics.on_control_tx(src, pkt)
        else:
            self.tx_data += 1

    def broadcast(self, src: int, pkt: Packet, now: float) -> List[int]:
        """Deliver to every node in range; one transmission is charged either way.

        The whole audience hears the frame at the same instant, so one ``rx_broadcast``
        event hands it to each receiver in ascending id order. Returns the audience.
        """
        self._check(src)
        self._count(src, pkt)
        at = now + self.tx_delay(pkt.size) + self._jitter()
        audience = self.neighbors(src, now)
        if audience:
            nodes = [self.nodes[dst] for dst in audience]

            def fan_out() -> None:
                for node in nodes:
                    node.receive(pkt, src)

            self.scheduler.at(at, src, "rx_broadcast", fan_out, payload=pkt)
        return audience

    def unicast(self, src: int, next_hop: int, pkt: Packet, now: float) -> UnicastResult:
        self._check(src)
        self._check(next_hop)
        if next_hop == src:
            raise TopologyError(f"node {src} cannot unicast to itself")
        self._count(src, pkt)
        pos = self.mobility.positions(now)
        a = Position(float(pos[src, 0]), float(pos[src, 1]))
        b = Position(float(pos[next_hop, 0]), float(pos[next_hop, 1]))
        if in_range(a, b, self.params.range):
            self._deliver(next_hop, src, pkt, now + self.tx_delay(pkt.size) + self._jitter())
            return UnicastResult.DELIVERED
        self._link_break(src, next_hop, now)
        return UnicastResult.LINK_BREAK

    def _deliver(self, dst: int, src: int, pkt: Packet, at: float) -> Event:
        node = self.nodes[dst]
        kind = "rx_data" if not pkt.is_control else "rx_control"
        return self.scheduler.at(at, dst, kind, lambda: node.receive(pkt, src), payload=pkt)

    def _link_break(self, src: int, neighbor: int, now: float) -> None:
        """MAC feedback on a failed unicast; the protocol always hears about it.

        With link sensing on, only a break of a neighbour sensed up enters the
        ``link_events`` log and the sensed set, so the log keeps up/down strictly
        alternating per pair.
        """
        ev = LinkEvent(src, neighbor, LinkKind.DOWN, now)
        if self._lsm_enabled.get(src, False):
            sensed = self.sensed[src]
            if neighbor in sensed:
                self.sensed[src] = sensed - {neighbor}
                self.link_events.append(ev)
        else:
            self.link_events.append(ev)
        self.nodes[src].notify_link_event(ev)

    def start_lsm(self, node: int, interval: float) -> None:
        self._check(node)
        self._lsm_enabled[node] = True
        self.scheduler.after(interval, node, "lsm_tick", lambda: self._lsm_fire(node, interval))

    def _lsm_fire(self, node: int, interval: float) -> None:
        for ev in self.lsm_tick(node, interval):
            self.nodes[node].notify_link_event(ev)

    def lsm_tick(self, node: int, interval: float) -> List[LinkEvent]:
        """Diff the in-range set against the last sensed set and reschedule."""
        now = self.scheduler.now
        current = frozenset(self.neighbors(node, now))
        previous = self.sensed[node]
        events = [LinkEvent(node, b, LinkKind.DOWN, now) for b in sorted(previous - current)]
        events += [LinkEvent(node, b, LinkKind.UP, now) for b in sorted(current - previous)]
        self.sensed[node] = current
        self.link_events.extend(events)
        self.scheduler.after(interval, node, "lsm_tick", lambda: self._lsm_fire(node, interval))
        return events

