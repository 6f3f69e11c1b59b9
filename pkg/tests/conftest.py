from typing import Dict, Iterator, List, Optional, Tuple

import networkx as nx
import pytest

from app.engine import Event, EventScheduler, RandomSource
from app.metrics import MetricsCollector
from app.models import ProtocolName, ScenarioConfig
from app.network import Medium, Node, Position, RadioParams, RandomWaypoint
from app.routing import (
    ForwardResult,
    LinkEvent,
    Packet,
    PacketKind,
    RouteEntry,
    RoutingProtocol,
    UnicastResult,
)
from app.scenario import Simulation


class FakeContext:
    """Stands in for a node: records what a protocol sends and schedules."""

    def __init__(self, node_id: int = 0, now: float = 0.0):
        self.node_id = node_id
        self.now = now
        self.sent: List[Packet] = []
        self.unicasts: List[Tuple[int, Packet]] = []
        self.timers: List[Event] = []
        self.forwarded: List[Packet] = []
        self.drops: List[ForwardResult] = []
        self.link_ok = True

    def broadcast(self, pkt: Packet) -> None:
        self.sent.append(pkt)

    def unicast(self, next_hop: int, pkt: Packet) -> UnicastResult:
        self.unicasts.append((next_hop, pkt))
        return UnicastResult.DELIVERED if self.link_ok else UnicastResult.LINK_BREAK

    def set_timer(self, delay: float, kind: str) -> Event:
        ev = Event(self.now + delay, self.node_id, kind, lambda: None)
        self.timers.append(ev)
        return ev

    def sensed_neighbors(self) -> frozenset:
        return frozenset()

    def forward(self, pkt: Packet) -> ForwardResult:
        self.forwarded.append(pkt)
        return ForwardResult.SENT

    def record_drop(self, pkt: Packet, reason: ForwardResult) -> None:
        self.drops.append(reason)

    def counters(self) -> List[str]:
        return [p.counter for p in self.sent]


class RecordingProtocol(RoutingProtocol):
    """Static routes, remembers everything it is handed."""
    name = "recording"

    def __init__(self, ctx, routes: Optional[Dict[int, int]] = None, uses_lsm: bool = True):
        super().__init__(ctx)
        self.routes = routes or {}
        self.packets: List[Tuple[Packet, int]] = []
        self.link_events: List[LinkEvent] = []
        self.uses_mac_lsm = uses_lsm

    def on_start(self) -> None:
        pass

    def on_timer(self, kind: str) -> None:
        pass

    def on_packet(self, pkt: Packet, from_id: int) -> None:
        self.packets.append((pkt, from_id))

    def on_link_event(self, ev: LinkEvent) -> None:
        self.link_events.append(ev)

    def routing_table(self) -> Dict[int, RouteEntry]:
        return {d: RouteEntry(d, hop, 1) for d, hop in self.routes.items()}


class Network:
    """Nodes pinned at given coordinates on an otherwise bare medium."""

    def __init__(self, coords: List[Tuple[float, float]], side: float = 1000.0, jitter_max: float = 0.0,
                 radio_range: float = 250.0, seed: int = 1):
        self.scheduler = EventScheduler()
        self.rng = RandomSource(seed)
        positions = [Position(x, y) for x, y in coords]
        self.mobility = RandomWaypoint(positions, side, 1.0, 10_000.0, 10_000.0, self.scheduler, self.rng)
        self.metrics = MetricsCollector(clock=lambda: self.scheduler.now)
        self.medium = Medium(RadioParams(range=radio_range, jitter_max=jitter_max), self.mobility,
                             self.scheduler, self.rng, self.metrics)
        self.nodes = [Node(i, self.scheduler, self.medium, self.metrics) for i in range(len(coords))]
        for node in self.nodes:
            node.protocol = RecordingProtocol(node)

    def protocol(self, i: int) -> RecordingProtocol:
        return self.nodes[i].protocol


def make_cfg(**overrides) -> ScenarioConfig:
    values = dict(protocol=ProtocolName.DSDV, n=10, duration=100.0, flows=0)
    values.update(overrides)
    return ScenarioConfig(**values)


def static_cfg(protocol: ProtocolName, seed: int, duration: float = 60.0, **overrides) -> ScenarioConfig:
    """10 motionless nodes on a 500 m field, no traffic unless asked."""
    values = dict(
        protocol=protocol,
        n=10,
        field_side=500.0,
        radio_range=250.0,
        pause=duration,
        duration=duration,
        flows=0,
        seed=seed,
    )
    values.update(overrides)
    return ScenarioConfig(**values)


def connected_static_sims(protocol: ProtocolName, count: int, **overrides) -> Iterator[Simulation]:
    """The first ``count`` seeds whose static unit-disk graph is connected."""
    found = 0
    seed = 0
    while found < count:
        seed += 1
        sim = Simulation(static_cfg(protocol, seed, **overrides))
        if nx.is_connected(sim.unit_disk_graph(0.0)):
            found += 1
            yield sim


def data_packet(src: int = 0, dst: int = 2, ttl: int = 32, now: float = 0.0, seq: int = 0, flow: int = 0) -> Packet:
    return Packet(kind=PacketKind.DATA, src=src, origin=src, dst=dst, ttl=ttl, size=512,
                  created_at=now, payload_seq=seq, flow_id=flow)


@pytest.fixture
def ctx() -> FakeContext:
    return FakeContext()


@pytest.fixture
def line3() -> Network:
    """0 -- 1 -- 2, 200 m apart."""
    return Network([(0.0, 0.0), (200.0, 0.0), (400.0, 0.0)])
