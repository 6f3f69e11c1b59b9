"""Destination-Sequenced Distance Vector.

Each node advertises its own table: a full dump every ``ru_per_interval``, an
immediate triggered update when a link carrying active routes breaks, and a small
incremental update ("NPDU") once freshly changed routes have settled.
"""
import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Deque, Dict, List, Optional, Tuple

from ..models import DsdvConfig
from .base import (
    BROADCAST,
    INFINITE_METRIC,
    ControlVariant,
    ForwardResult,
    LinkEvent,
    LinkKind,
    NodeContext,
    Packet,
    PacketKind,
    RouteEntry,
    RoutingProtocol,
)

logger = logging.getLogger(__name__)

HEADER_BYTES = 12
ENTRY_BYTES = 8

# (dest, metric, seq_num)
UpdateEntry = Tuple[int, float, int]


class UpdateKind(str, Enum):
    PERIODIC = "ru_per"
    TRIGGERED = "ru_tri"
    INCREMENTAL = "npdu"


class SettleDecision(str, Enum):
    ADVERTISE = "advertise"
    HOLD = "hold"


@dataclass(frozen=True, slots=True)
class DsdvUpdateMsg:
    origin: int
    entries: Tuple[UpdateEntry, ...]
    full_dump: bool

    @property
    def size(self) -> int:
        return HEADER_BYTES + ENTRY_BYTES * len(self.entries)


class DsdvProtocol(RoutingProtocol):
    name = "dsdv"
    uses_mac_lsm = True

    def __init__(self, ctx: NodeContext, config: DsdvConfig):
        super().__init__(ctx)
        self.config = config
        self.seq = 0
        self.table: Dict[int, RouteEntry] = {
            self.node_id: RouteEntry(self.node_id, self.node_id, 0, seq_num=0, advertised=True)
        }
        self.buffers: Dict[int, Deque[Packet]] = {}
        self.trigger_origins = 0
        self._settle_pending: set = set()

    def on_start(self) -> None:
        self.ctx.set_timer(self.config.ru_per_interval, UpdateKind.PERIODIC.value)

    def on_timer(self, kind: str) -> None:
        if kind == UpdateKind.PERIODIC.value:
            self.periodic_dump()
        elif kind == "settle":
            self._settle_pending.discard(self.ctx.now)
            self._settle_flush()

    def routing_table(self) -> Dict[int, RouteEntry]:
        return self.table

    # periodic full dumps

    def periodic_dump(self) -> DsdvUpdateMsg:
        self.seq += 2
        own = self.table[self.node_id]
        own.seq_num = self.seq
        entries: List[UpdateEntry] = [(self.node_id, 0, self.seq)]
        for dest in sorted(self.table):
            entry = self.table[dest]
            if dest == self.node_id:
                continue
            if not entry.valid:
                entries.append((dest, INFINITE_METRIC, entry.seq_num))
            elif entry.seq_num % 2 == 0 and self.settle_gate(dest) == SettleDecision.ADVERTISE:
                entry.advertised = True
                entries.append((dest, entry.metric, entry.seq_num))
        msg = DsdvUpdateMsg(self.node_id, tuple(entries), full_dump=True)
        self._send(msg, UpdateKind.PERIODIC)
        self.ctx.set_timer(self.config.ru_per_interval, UpdateKind.PERIODIC.value)
        return msg

    # link sensing

    def on_link_event(self, ev: LinkEvent) -> None:
        if ev.kind == LinkKind.DOWN:
            self.on_link_break(ev.neighbor)
        else:
            self._link_up(ev.neighbor)

    def _link_up(self, neighbor: int) -> None:
        """Install a one-hop route to a newly sensed neighbour.

        The stored sequence number is kept: only ``neighbor`` itself issues even numbers
        for itself. Over a broken marker (odd) the route is used locally but not
        advertised until the neighbour's own update brings a fresh even number.
        """
        entry = self.table.get(neighbor)
        if entry is not None and entry.valid and entry.metric <= 1:
            return
        seq = 0 if entry is None else entry.seq_num
        now = self.ctx.now
        installed_at = entry.installed_at if entry is not None and entry.valid else now
        self.table[neighbor] = RouteEntry(
            neighbor, neighbor, 1, seq_num=seq, installed_at=installed_at, changed_at=now, advertised=seq % 2 == 1
        )
        self._schedule_settle()

    def on_link_break(self, neighbor: int) -> Optional[DsdvUpdateMsg]:
        """Invalidate every active route through ``neighbor`` and announce it at once."""
        now = self.ctx.now
        broken: List[UpdateEntry] = []
        for dest in sorted(self.table):
            entry = self.table[dest]
            if dest == self.node_id or entry.next_hop != neighbor or not entry.valid:
                continue
            entry.metric = INFINITE_METRIC
            # next odd value: one past the destination's last even number, never beyond
            entry.seq_num |= 1
            entry.changed_at = now
            entry.advertised = True
            broken.append((dest, INFINITE_METRIC, entry.seq_num))
            self._drop_held(dest)
        if not broken:
            return None
        self.trigger_origins += 1
        msg = DsdvUpdateMsg(self.node_id, tuple(broken), full_dump=False)
        logger.debug("node %d: link to %d broke, %d routes invalidated", self.node_id, neighbor, len(broken))
        self._send(msg, UpdateKind.TRIGGERED)
        return msg

    # incoming advertisements

    def on_packet(self, pkt: Packet, from_id: int) -> None:
        if pkt.control_variant == ControlVariant.DSDV_UPDATE:
            self.process_update(pkt.payload, from_id)

    def process_update(self, msg: DsdvUpdateMsg, from_id: int) -> None:
        now = self.ctx.now
        changed = False
        newly_broken: List[UpdateEntry] = []
        for dest, metric, seq in msg.entries:
            if dest == self.node_id:
                continue
            stored = self.table.get(dest)
            if metric == INFINITE_METRIC:
                if stored is not None and seq > stored.seq_num:
                    was_valid = stored.valid
                    stored.seq_num = seq
                    stored.metric = INFINITE_METRIC
                    if was_valid:
                        stored.changed_at = now
                        stored.advertised = True
                        newly_broken.append((dest, INFINITE_METRIC, seq))
                        self._drop_held(dest)
                continue
            candidate = metric + 1
            if stored is None:
                self.table[dest] = RouteEntry(dest, from_id, candidate, seq_num=seq, installed_at=now, changed_at=now)
                changed = True
            elif seq > stored.seq_num or (seq == stored.seq_num and candidate < stored.metric):
                if stored.valid and candidate == stored.metric and stored.next_hop != from_id:
                    # same length, fresher number: keep the current next hop
                    stored.seq_num = seq
                    continue
                route_changed = not stored.valid or stored.next_hop != from_id or stored.metric != candidate
                stored.seq_num = seq
                if route_changed:
                    if not stored.valid:
                        stored.installed_at = now
                    stored.next_hop = from_id
                    stored.metric = candidate
                    stored.changed_at = now
                    stored.advertised = False
                    changed = True
        if newly_broken:
            self._send(DsdvUpdateMsg(self.node_id, tuple(newly_broken), full_dump=False), UpdateKind.TRIGGERED)
        if changed:
            self._schedule_settle()

    # settling time

    def settle_gate(self, dest: int) -> SettleDecision:
        entry = self.table.get(dest)
        if entry is None:
            return SettleDecision.HOLD
        if self.config.settling_time == 0 or self.ctx.now >= entry.changed_at + self.config.settling_time:
            return SettleDecision.ADVERTISE
        return SettleDecision.HOLD

    def _schedule_settle(self) -> None:
        fire_at = self.ctx.now + self.config.settling_time
        if fire_at in self._settle_pending:
            return
        self._settle_pending.add(fire_at)
        self.ctx.set_timer(self.config.settling_time, "settle")

    def _settle_flush(self) -> Optional[DsdvUpdateMsg]:
        ready: List[UpdateEntry] = []
        for dest in sorted(self.table):
            entry = self.table[dest]
            if dest == self.node_id or not entry.valid or entry.advertised:
                continue
            if self.settle_gate(dest) == SettleDecision.ADVERTISE:
                entry.advertised = True
                ready.append((dest, entry.metric, entry.seq_num))
        msg = None
        if ready:
            msg = DsdvUpdateMsg(self.node_id, tuple(ready), full_dump=False)
            self._send(msg, UpdateKind.INCREMENTAL)
        self._release_buffers()
        return msg

    # data buffering while a route settles

    def hold_data(self, pkt: Packet) -> Optional[ForwardResult]:
        if not self.config.buffer_during_settling or self.config.settling_time == 0:
            return None
        entry = self.table.get(pkt.dst)
        if entry is None or not entry.valid or not self._freshly_installed(entry):
            return None
        buffer = self.buffers.setdefault(pkt.dst, deque())
        if len(buffer) >= self.config.buffer_capacity:
            logger.warning("node %d: settle buffer for %d full, dropping packet", self.node_id, pkt.dst)
            return ForwardResult.DROPPED_BUFFER
        buffer.append(pkt)
        return ForwardResult.HELD

    def _freshly_installed(self, entry: RouteEntry) -> bool:
        # a route replacing a missing or broken one; a valid route changing next hop does not count
        return self.ctx.now < entry.installed_at + self.config.settling_time

    def _release_buffers(self) -> None:
        for dest in sorted(self.buffers):
            entry = self.table.get(dest)
            if entry is None or not entry.valid:
                self._drop_held(dest)
                continue
            if self._freshly_installed(entry):
                continue
            waiting = self.buffers.pop(dest)
            while waiting:
                self.ctx.forward(waiting.popleft())

    def _drop_held(self, dest: int) -> None:
        """The route a buffer was waiting on is gone: its packets are lost."""
        waiting = self.buffers.pop(dest, None)
        if not waiting:
            return
        logger.debug("node %d: route to %d lost, dropping %d held packets", self.node_id, dest, len(waiting))
        for pkt in waiting:
            self.ctx.record_drop(pkt, ForwardResult.DROPPED_NO_ROUTE)

    def held_packets(self) -> int:
        return sum(len(b) for b in self.buffers.values())

    def _send(self, msg: DsdvUpdateMsg, kind: UpdateKind) -> None:
        self.ctx.broadcast(
            Packet(
                kind=PacketKind.CONTROL,
                src=self.node_id,
                origin=self.node_id,
                dst=BROADCAST,
                ttl=1,
                size=msg.size,
                created_at=self.ctx.now,
                control_variant=ControlVariant.DSDV_UPDATE,
                payload=msg,
                counter=kind.value,
            )
        )
