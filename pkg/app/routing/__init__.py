from typing import Callable, Dict

from ..models import ProtocolName, ScenarioConfig
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
    UnicastResult,
    forward_data,
)
from .dsdv import DsdvProtocol
from .fsr import FsrProtocol
from .mpr import covers_two_hop, graph_mprs, select_mprs, simulate_flood
from .olsr import OlsrProtocol
from .paths import RouteGraph, bfs_hops, link_edges, route_metrics, shortest_path_table, topology_graph

ProtocolFactory = Callable[[NodeContext, ScenarioConfig], RoutingProtocol]

PROTOCOLS: Dict[ProtocolName, ProtocolFactory] = {
    ProtocolName.DSDV: lambda ctx, cfg: DsdvProtocol(ctx, cfg.protocol_params.dsdv),
    ProtocolName.FSR: lambda ctx, cfg: FsrProtocol(ctx, cfg.protocol_params.fsr),
    ProtocolName.OLSR: lambda ctx, cfg: OlsrProtocol(ctx, cfg.protocol_params.olsr),
    ProtocolName.OLSR_M: lambda ctx, cfg: OlsrProtocol(ctx, cfg.protocol_params.olsr_m),
}


def build_protocol(ctx: NodeContext, cfg: ScenarioConfig) -> RoutingProtocol:
    return PROTOCOLS[cfg.protocol](ctx, cfg)


__all__ = [
    "BROADCAST",
    "INFINITE_METRIC",
    "PROTOCOLS",
    "ControlVariant",
    "DsdvProtocol",
    "ForwardResult",
    "FsrProtocol",
    "LinkEvent",
    "LinkKind",
    "NodeContext",
    "OlsrProtocol",
    "Packet",
    "PacketKind",
    "RouteEntry",
    "RouteGraph",
    "RoutingProtocol",
    "UnicastResult",
    "bfs_hops",
    "build_protocol",
    "covers_two_hop",
    "forward_data",
    "graph_mprs",
    "link_edges",
    "route_metrics",
    "select_mprs",
    "shortest_path_table",
    "simulate_flood",
    "topology_graph",
]
