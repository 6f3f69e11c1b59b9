"""Optimized Link State Routing.

Neighbours are sensed with HELLOs only. Each node picks MPRs among its symmetric
neighbours; MPRs advertise their selectors in TC messages that only MPRs relay.
OLSR-M is this same machine configured with shorter HELLO and TC intervals.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Optional, Set, Tuple

from ..engine import Event
from ..models import OlsrConfig, OlsrVariant
from .base import (
    BROADCAST,
    ControlVariant,
    LinkEvent,
    LinkKind,
    NodeContext,
    Packet,
    PacketKind,
    RouteEntry,
    RoutingProtocol,
)
from .mpr import select_mprs
from .paths import RouteGraph, link_edges

logger = logging.getLogger(__name__)

HEADER_BYTES = 12
ADDRESS_BYTES = 4
TC_TTL = 255


class LinkStatus(str, Enum):
    HEARD = "heard"
    SYMMETRIC = "sym"


class TcReason(str, Enum):
    PERIODIC = "periodic"
    TRIGGERED = "triggered"


@dataclass(frozen=True, slots=True)
class HelloMsg:
    origin: int
    links: Tuple[Tuple[int, LinkStatus], ...]
    mprs: FrozenSet[int]

    @property
    def size(self) -> int:
        return HEADER_BYTES + ADDRESS_BYTES * len(self.links)


@dataclass(frozen=True, slots=True)
class TcMsg:
    origin: int
    ansn: int
    msg_seq: int
    selectors: Tuple[int, ...]

    @property
    def size(self) -> int:
        return HEADER_BYTES + ADDRESS_BYTES * len(self.selectors)


@dataclass(slots=True)
class NeighborEntry:
    node: int
    last_heard: float
    symmetric: bool = False
    two_hop: FrozenSet[int] = frozenset()


@dataclass(slots=True)
class TopologyEntry:
    origin: int
    ansn: int
    selectors: FrozenSet[int]
    received_at: float


@dataclass(slots=True)
class MprState:
    mpr_set: Set[int] = field(default_factory=set)
    mpr_selectors: Set[int] = field(default_factory=set)
    ansn: int = 0


class OlsrProtocol(RoutingProtocol):
    name = "olsr"
    uses_mac_lsm = False

    def __init__(self, ctx: NodeContext, config: OlsrConfig):
        super().__init__(ctx)
        self.config = config
        self.neighbors: Dict[int, NeighborEntry] = {}
        self.mpr = MprState()
        self.topology: Dict[int, TopologyEntry] = {}
        # highest TC msg_seq processed and relayed, per origin
        self.seen: Dict[int, int] = {}
        self.relayed: Dict[int, int] = {}
        self.tc_seq = 0
        self.mpr_changes = 0
        self._tc_timer: Optional[Event] = None
        self.route_graph = RouteGraph(self.node_id)
        self._dirty = True
        self._table: Dict[int, RouteEntry] = {}
        self._table_expires = float("inf")
        if config.variant == OlsrVariant.M:
            self.name = "olsr_m"

    def on_start(self) -> None:
        self.ctx.set_timer(self.config.hello_interval, "hello")
        self._tc_timer = self.ctx.set_timer(self.config.tc_interval, "tc")

    def on_timer(self, kind: str) -> None:
        if kind == "hello":
            self.hello_tick()
        elif kind == "tc":
            self._tc_timer = None
            self.tc_emit(TcReason.PERIODIC)

    # neighbour sensing

    def hello_tick(self) -> HelloMsg:
        self._purge()
        self.select_mprs()
        links = tuple(
            (n, LinkStatus.SYMMETRIC if e.symmetric else LinkStatus.HEARD)
            for n, e in sorted(self.neighbors.items())
        )
        msg = HelloMsg(self.node_id, links, frozenset(self.mpr.mpr_set))
        self._broadcast(msg, ttl=1, counter="hello")
        self.ctx.set_timer(self.config.hello_interval, "hello")
        return msg

    def _process_hello(self, msg: HelloMsg, from_id: int) -> None:
        now = self.ctx.now
        entry = self.neighbors.get(from_id)
        if entry is None:
            entry = self.neighbors[from_id] = NeighborEntry(from_id, now)
            self._dirty = True
        entry.last_heard = now
        symmetric = any(n == self.node_id for n, _ in msg.links)
        two_hop = frozenset(n for n, status in msg.links if status == LinkStatus.SYMMETRIC and n != self.node_id)
        if symmetric != entry.symmetric or two_hop != entry.two_hop:
            entry.symmetric = symmetric
            entry.two_hop = two_hop
            self._dirty = True
        self._set_selector(from_id, symmetric and self.node_id in msg.mprs)

    def _set_selector(self, node: int, selected: bool) -> None:
        selectors = self.mpr.mpr_selectors
        if selected and node not in selectors:
            selectors.add(node)
            self.mpr.ansn += 1
        elif not selected and node in selectors:
            selectors.discard(node)
            self.mpr.ansn += 1

    def _drop_neighbor(self, node: int) -> None:
        if self.neighbors.pop(node, None) is not None:
            self._set_selector(node, False)
            self._dirty = True

    def _purge(self) -> None:
        now = self.ctx.now
        for node in sorted(self.neighbors):
            if now - self.neighbors[node].last_heard > self.config.neighbor_hold:
                self._drop_neighbor(node)
        for origin in sorted(self.topology):
            if now - self.topology[origin].received_at > self.config.tc_hold:
                del self.topology[origin]
                self._dirty = True

    def on_link_event(self, ev: LinkEvent) -> None:
        # failed unicast: the neighbour entry expires now
        if ev.kind == LinkKind.DOWN and ev.neighbor in self.neighbors:
            logger.debug("node %d: forcing expiry of neighbour %d", self.node_id, ev.neighbor)
            self._drop_neighbor(ev.neighbor)
            self.select_mprs()

    # MPR selection and topology control

    def _symmetric_links(self) -> Dict[int, Set[int]]:
        return {n: set(e.two_hop) for n, e in self.neighbors.items() if e.symmetric}

    def select_mprs(self) -> Set[int]:
        chosen = select_mprs(self.node_id, self._symmetric_links())
        if chosen != self.mpr.mpr_set:
            logger.debug("node %d: MPR set %s -> %s", self.node_id, sorted(self.mpr.mpr_set), sorted(chosen))
            self.mpr.mpr_set = chosen
            self.mpr_changes += 1
            self.tc_emit(TcReason.TRIGGERED)
        return chosen

    def tc_emit(self, reason: TcReason) -> Optional[TcMsg]:
        msg = None
        if reason == TcReason.TRIGGERED or self.mpr.mpr_selectors:
            self.tc_seq += 1
            msg = TcMsg(self.node_id, self.mpr.ansn, self.tc_seq, tuple(sorted(self.mpr.mpr_selectors)))
            self.seen[self.node_id] = self.tc_seq
            self._broadcast(msg, ttl=TC_TTL, counter="tc" if reason == TcReason.PERIODIC else "tc_tri")
        if self._tc_timer is not None:
            self._tc_timer.cancel()
        self._tc_timer = self.ctx.set_timer(self.config.tc_interval, "tc")
        return msg

    def _process_tc(self, pkt: Packet, msg: TcMsg, from_id: int) -> None:
        sender = self.neighbors.get(from_id)
        if sender is None or not sender.symmetric or msg.origin == self.node_id:
            return
        origin = msg.origin
        if msg.msg_seq > self.seen.get(origin, 0):
            self.seen[origin] = msg.msg_seq
            stored = self.topology.get(origin)
            if stored is None or msg.ansn >= stored.ansn:
                selectors = frozenset(msg.selectors)
                if stored is None or stored.selectors != selectors:
                    self._dirty = True
                self.topology[origin] = TopologyEntry(origin, msg.ansn, selectors, self.ctx.now)
        # relay once, on the first copy heard from a selector
        if msg.msg_seq > self.relayed.get(origin, 0) and from_id in self.mpr.mpr_selectors and pkt.ttl > 1:
            self.relayed[origin] = msg.msg_seq
            self.ctx.broadcast(pkt.hop(self.node_id, counter="tc_fwd"))

    def on_packet(self, pkt: Packet, from_id: int) -> None:
        if pkt.control_variant == ControlVariant.OLSR_HELLO:
            self._process_hello(pkt.payload, from_id)
        elif pkt.control_variant == ControlVariant.OLSR_TC:
            self._process_tc(pkt, pkt.payload, from_id)

    # routes

    def compute_routes(self) -> Dict[int, RouteEntry]:
        now = self.ctx.now
        hold = self.config.neighbor_hold
        tc_hold = self.config.tc_hold
        expires = float("inf")
        own = []
        links: Dict[int, Set[int]] = {}
        for n, e in self.neighbors.items():
            if not e.symmetric or now - e.last_heard > hold:
                continue
            own.append(n)
            links[n] = set(e.two_hop)
            expires = min(expires, e.last_heard + hold)
        for origin, t in self.topology.items():
            if now - t.received_at > tc_hold:
                continue
            links.setdefault(origin, set()).update(t.selectors)
            expires = min(expires, t.received_at + tc_hold)
        self._table_expires = expires
        return self.route_graph.table(link_edges(self.node_id, own, links), now)

    def routing_table(self) -> Dict[int, RouteEntry]:
        # cached until the next mutation or the earliest hold expiry
        if self._dirty or self.ctx.now > self._table_expires:
            self._dirty = False
            self._table = self.compute_routes()
        return self._table

    def _broadcast(self, msg, ttl: int, counter: str) -> None:
        variant = ControlVariant.OLSR_HELLO if isinstance(msg, HelloMsg) else ControlVariant.OLSR_TC
        self.ctx.broadcast(
            Packet(
                kind=PacketKind.CONTROL,
                src=self.node_id,
                origin=self.node_id,
                dst=BROADCAST,
                ttl=ttl,
                size=msg.size,
                created_at=self.ctx.now,
                control_variant=variant,
                payload=msg,
                counter=counter,
            )
        )
