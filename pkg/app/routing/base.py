"""Vocabulary and contract shared by every routing protocol."""
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, replace
from enum import Enum
from typing import TYPE_CHECKING, Any, ClassVar, Dict, Optional, Protocol

if TYPE_CHECKING:
    from ..engine import Event

logger = logging.getLogger(__name__)

BROADCAST = -1
INFINITE_METRIC = math.inf
DEFAULT_DATA_TTL = 32


class LinkKind(str, Enum):
    UP = "up"
    DOWN = "down"


@dataclass(frozen=True, slots=True)
class LinkEvent:
    """MAC-layer notification that a neighbour came into or left range."""
    node: int
    neighbor: int
    kind: LinkKind
    at: float


class UnicastResult(str, Enum):
    DELIVERED = "delivered"
    LINK_BREAK = "link_break"


class PacketKind(str, Enum):
    DATA = "data"
    CONTROL = "control"


class ControlVariant(str, Enum):
    DSDV_UPDATE = "dsdv_update"
    FSR_LINKSTATE = "fsr_linkstate"
    OLSR_HELLO = "olsr_hello"
    OLSR_TC = "olsr_tc"


@dataclass(slots=True)
class Packet:
    """A control message or a data unit on the medium.

    ``src`` is the transmitter of this hop, ``origin`` the node that created the packet.
    ``counter`` names the CE sub-counter a control transmission is charged to.
    """
    kind: PacketKind
    src: int
    origin: int
    dst: int
    ttl: int
    size: int
    created_at: float
    control_variant: Optional[ControlVariant] = None
    payload: Any = None
    payload_seq: int = -1
    flow_id: int = -1
    counter: str = ""

    def __post_init__(self):
        if self.size <= 0:
            raise ValueError(f"packet size must be positive, got {self.size}")
        if self.ttl < 0:
            raise ValueError(f"packet ttl must be non-negative, got {self.ttl}")
        if self.kind == PacketKind.CONTROL and self.control_variant is None:
            raise ValueError("control packets need a control_variant")

    @property
    def is_control(self) -> bool:
        return self.kind == PacketKind.CONTROL

    def hop(self, src: int, **changes) -> "Packet":
        """Copy for the next transmission: new transmitter, ttl down by one."""
        return replace(self, src=src, ttl=self.ttl - 1, **changes)


@dataclass(slots=True)
class RouteEntry:
    dest: int
    next_hop: int
    metric: float
    seq_num: int = 0
    installed_at: float = 0.0
    advertised: bool = False
    changed_at: float = 0.0

    @property
    def valid(self) -> bool:
        return self.metric != INFINITE_METRIC


def self_route(node_id: int, now: float = 0.0) -> RouteEntry:
    return RouteEntry(dest=node_id, next_hop=node_id, metric=0, installed_at=now, advertised=True)


class ForwardResult(str, Enum):
    SENT = "sent"
    HELD = "held"
    DROPPED_NO_ROUTE = "dropped_no_route"
    DROPPED_TTL = "dropped_ttl"
    DROPPED_BUFFER = "dropped_buffer"


class NodeContext(Protocol):
    """What a protocol instance may touch: its own node and the medium through it."""
    node_id: int

    @property
    def now(self) -> float: ...

    def broadcast(self, pkt: Packet) -> None: ...

    def unicast(self, next_hop: int, pkt: Packet) -> UnicastResult: ...

    def set_timer(self, delay: float, kind: str) -> "Event": ...

    def sensed_neighbors(self) -> frozenset: ...

    def forward(self, pkt: Packet) -> ForwardResult: ...

    def record_drop(self, pkt: Packet, reason: ForwardResult) -> None: ...


class RoutingProtocol(ABC):
    """Hooks a routing protocol implements.

    A protocol only ever changes its own node's state; other nodes learn about it
    through packets on the medium.
    """
    name: ClassVar[str] = "abstract"
    uses_mac_lsm: ClassVar[bool] = True

    def __init__(self, ctx: NodeContext):
        self.ctx = ctx
        self.node_id = ctx.node_id

    @abstractmethod
    def on_start(self) -> None: ...

    @abstractmethod
    def on_timer(self, kind: str) -> None: ...

    @abstractmethod
    def on_packet(self, pkt: Packet, from_id: int) -> None: ...

    @abstractmethod
    def on_link_event(self, ev: LinkEvent) -> None: ...

    @abstractmethod
    def routing_table(self) -> Dict[int, RouteEntry]:
        """Current routes keyed by destination, self-route included."""

    def route_lookup(self, dest: int) -> Optional[RouteEntry]:
        if dest == self.node_id:
            return self_route(self.node_id)
        entry = self.routing_table().get(dest)
        if entry is None or not entry.valid:
            return None
        return entry

    def hold_data(self, pkt: Packet) -> Optional[ForwardResult]:
        """Chance to keep a data packet back instead of forwarding it now."""
        return None

    def held_packets(self) -> int:
        return 0


def forward_data(ctx: NodeContext, protocol: RoutingProtocol, pkt: Packet) -> ForwardResult:
    """Send a data packet one hop closer to ``pkt.dst``.

    A failed unicast has already told the protocol about the broken link, so the
    lookup is repeated once before the packet is given up.
    """
    if pkt.kind != PacketKind.DATA:
        raise ValueError("forward_data only handles data packets")
    if pkt.ttl <= 0:
        ctx.record_drop(pkt, ForwardResult.DROPPED_TTL)
        return ForwardResult.DROPPED_TTL
    for _attempt in range(2):
        held = protocol.hold_data(pkt)
        if held is not None:
            if held != ForwardResult.HELD:
                ctx.record_drop(pkt, held)
            return held
        route = protocol.route_lookup(pkt.dst)
        if route is None:
            break
        if ctx.unicast(route.next_hop, pkt.hop(ctx.node_id)) == UnicastResult.DELIVERED:
            return ForwardResult.SENT
        logger.debug("node %d: link to %d broken while forwarding to %d", ctx.node_id, route.next_hop, pkt.dst)
    ctx.record_drop(pkt, ForwardResult.DROPPED_NO_ROUTE)
    return ForwardResult.DROPPED_NO_ROUTE
