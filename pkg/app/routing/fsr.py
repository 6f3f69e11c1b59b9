"""Fisheye State Routing.

Link-state records go out on two graded timers: a short-range scope every
``intra_interval`` and a network-wide scope every ``inter_interval``. Link changes
only touch local state; nothing is ever sent outside those two timers.
"""
import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, Set, Tuple

from ..models import FsrConfig
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
from .paths import RouteGraph, link_edges

logger = logging.getLogger(__name__)

HEADER_BYTES = 12
NEIGHBOR_BYTES = 4


class Scope(str, Enum):
    INTRA = "ias"
    INTER = "ies"


@dataclass(frozen=True, slots=True)
class LinkStateRecord:
    origin: int
    neighbor_list: Tuple[int, ...]
    ls_seq: int
    received_at: float = 0.0


@dataclass(frozen=True, slots=True)
class FsrMessage:
    record: LinkStateRecord
    scope: Scope

    @property
    def size(self) -> int:
        return HEADER_BYTES + NEIGHBOR_BYTES * len(self.record.neighbor_list)


class FsrProtocol(RoutingProtocol):
    name = "fsr"
    uses_mac_lsm = True

    def __init__(self, ctx: NodeContext, config: FsrConfig):
        super().__init__(ctx)
        self.config = config
        self.neighbors: Set[int] = set()
        self.ls_seq = 0
        self.database: Dict[int, LinkStateRecord] = {}
        # highest ls_seq handled per origin and scope; two slots per node, never per record
        self.seen: Dict[Tuple[int, Scope], int] = {}
        self.route_graph = RouteGraph(self.node_id)
        self._dirty = True
        self._table: Dict[int, RouteEntry] = {}

    def on_start(self) -> None:
        self.ctx.set_timer(self.config.intra_interval, Scope.INTRA.value)
        self.ctx.set_timer(self.config.inter_interval, Scope.INTER.value)

    def on_timer(self, kind: str) -> None:
        if kind == Scope.INTRA.value:
            self.intra_tick()
        elif kind == Scope.INTER.value:
            self.inter_tick()

    def intra_tick(self) -> LinkStateRecord:
        record = self._originate(Scope.INTRA, self.config.intra_ttl)
        self.ctx.set_timer(self.config.intra_interval, Scope.INTRA.value)
        return record

    def inter_tick(self) -> LinkStateRecord:
        record = self._originate(Scope.INTER, self.config.inter_ttl)
        self.ctx.set_timer(self.config.inter_interval, Scope.INTER.value)
        return record

    def _originate(self, scope: Scope, ttl: int) -> LinkStateRecord:
        self.ls_seq += 1
        now = self.ctx.now
        record = LinkStateRecord(self.node_id, tuple(sorted(self.neighbors)), self.ls_seq, now)
        self.database[self.node_id] = record
        self.seen[(self.node_id, scope)] = self.ls_seq
        msg = FsrMessage(record, scope)
        self.ctx.broadcast(
            Packet(
                kind=PacketKind.CONTROL,
                src=self.node_id,
                origin=self.node_id,
                dst=BROADCAST,
                ttl=ttl,
                size=msg.size,
                created_at=now,
                control_variant=ControlVariant.FSR_LINKSTATE,
                payload=msg,
                counter=scope.value,
            )
        )
        return record

    def on_packet(self, pkt: Packet, from_id: int) -> None:
        if pkt.control_variant != ControlVariant.FSR_LINKSTATE:
            return
        msg: FsrMessage = pkt.payload
        record = msg.record
        if record.origin == self.node_id:
            return
        key = (record.origin, msg.scope)
        if record.ls_seq <= self.seen.get(key, -1):
            return
        self.seen[key] = record.ls_seq
        stored = self.database.get(record.origin)
        if stored is None or record.ls_seq > stored.ls_seq:
            if stored is None or stored.neighbor_list != record.neighbor_list:
                self._dirty = True
            self.database[record.origin] = replace(record, received_at=self.ctx.now)
        if pkt.ttl - 1 > 0:
            self.ctx.broadcast(pkt.hop(self.node_id, counter=f"{msg.scope.value}_fwd"))

    def on_link_event(self, ev: LinkEvent) -> None:
        if ev.kind == LinkKind.UP:
            self.neighbors.add(ev.neighbor)
        else:
            self.neighbors.discard(ev.neighbor)
        self.ls_seq += 1
        self._dirty = True

    def compute_routes(self) -> Dict[int, RouteEntry]:
        links = {origin: rec.neighbor_list for origin, rec in self.database.items()}
        return self.route_graph.table(link_edges(self.node_id, self.neighbors, links), self.ctx.now)

    def routing_table(self) -> Dict[int, RouteEntry]:
        # the edge set is only rebuilt after a neighbour change or a changed record
        if self._dirty:
            self._dirty = False
            self._table = self.compute_routes()
        return self._table
