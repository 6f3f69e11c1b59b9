"""A simulated host: owns one routing protocol instance and its medium access."""
import logging
from typing import TYPE_CHECKING, Optional

from ..engine import Event, EventScheduler
from ..routing.base import ForwardResult, LinkEvent, Packet, PacketKind, RoutingProtocol, UnicastResult, forward_data
from .medium import Medium

if TYPE_CHECKING:
    from ..metrics import MetricsCollector

logger = logging.getLogger(__name__)


class Node:
    def __init__(self, node_id: int, scheduler: EventScheduler, medium: Medium, metrics: "MetricsCollector"):
        self.node_id = node_id
        self.scheduler = scheduler
        self.medium = medium
        self.metrics = metrics
        self.protocol: Optional[RoutingProtocol] = None
        medium.attach(self)

    @property
    def now(self) -> float:
        return self.scheduler.now

    def broadcast(self, pkt: Packet) -> None:
        self.medium.broadcast(self.node_id, pkt, self.now)

    def unicast(self, next_hop: int, pkt: Packet) -> UnicastResult:
        return self.medium.unicast(self.node_id, next_hop, pkt, self.now)

    def set_timer(self, delay: float, kind: str) -> Event:
        protocol = self.protocol
        return self.scheduler.after(delay, self.node_id, kind, lambda: protocol.on_timer(kind))

    def sensed_neighbors(self) -> frozenset:
        return self.medium.sensed[self.node_id]

    def notify_link_event(self, ev: LinkEvent) -> None:
        self.protocol.on_link_event(ev)

    def record_drop(self, pkt: Packet, reason: ForwardResult) -> None:
        self.metrics.on_drop(pkt, reason)

    def forward(self, pkt: Packet) -> ForwardResult:
        return forward_data(self, self.protocol, pkt)

    def send_data(self, pkt: Packet) -> ForwardResult:
        """Entry point for locally generated traffic."""
        self.metrics.on_injected(pkt)
        return self.forward(pkt)

    def receive(self, pkt: Packet, from_id: int) -> None:
        if pkt.kind == PacketKind.DATA:
            if pkt.dst == self.node_id:
                self.metrics.on_delivery(pkt, self.now)
            else:
                self.forward(pkt)
            return
        self.protocol.on_packet(pkt, from_id)
