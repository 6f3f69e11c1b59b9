"""Hop-count shortest-path trees for the link-state protocols."""
from typing import Dict, Iterable, Mapping, Optional, Set, Tuple

import networkx as nx

from .base import RouteEntry

Edge = Tuple[int, int]


def link_edges(source: int, own_links: Iterable[int], links: Mapping[int, Iterable[int]]) -> Set[Edge]:
    """``source`` to its own neighbours plus every advertised ``u -> v``."""
    edges = {(source, v) for v in own_links if v != source}
    for u, vs in links.items():
        if u == source:
            continue
        edges.update((u, v) for v in vs if v != u)
    return edges


def topology_graph(source: int, own_links: Iterable[int], links: Mapping[int, Iterable[int]]) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_node(source)
    graph.add_edges_from(link_edges(source, own_links, links))
    return graph


def shortest_path_table(graph: nx.DiGraph, source: int, now: float = 0.0) -> Dict[int, RouteEntry]:
    """Routes from ``source`` to every reachable node.

    Among equal-length paths the next hop with the smallest id wins.
    """
    table: Dict[int, RouteEntry] = {
        source: RouteEntry(dest=source, next_hop=source, metric=0, installed_at=now, advertised=True)
    }
    if source not in graph:
        return table
    preds, levels = nx.predecessor(graph, source, return_seen=True)
    first_hop: Dict[int, int] = {}
    for dest in sorted(levels, key=lambda d: (levels[d], d)):
        depth = levels[dest]
        if depth == 0:
            continue
        if depth == 1:
            first_hop[dest] = dest
        else:
            first_hop[dest] = min(first_hop[p] for p in preds[dest])
        table[dest] = RouteEntry(dest=dest, next_hop=first_hop[dest], metric=depth, installed_at=now)
    return table


class RouteGraph:
    """One node's link graph, kept alive between lookups and patched by edge diff.

    The route table is only recomputed when the edge set actually changed.
    """

    def __init__(self, source: int):
        self.source = source
        self.graph = nx.DiGraph()
        self.graph.add_node(source)
        self.edges: Set[Edge] = set()
        self.recomputes = 0
        self._table: Optional[Dict[int, RouteEntry]] = None

    def sync(self, edges: Set[Edge]) -> bool:
        added = edges - self.edges
        removed = self.edges - edges
        if not added and not removed:
            return False
        self.graph.remove_edges_from(removed)
        self.graph.add_edges_from(added)
        self.edges = edges
        self._table = None
        return True

    def table(self, edges: Set[Edge], now: float) -> Dict[int, RouteEntry]:
        self.sync(edges)
        if self._table is None:
            self.recomputes += 1
            self._table = shortest_path_table(self.graph, self.source, now)
        return self._table


def bfs_hops(graph: nx.Graph, source: int) -> Dict[int, int]:
    """Hop counts from ``source`` in an undirected graph (the oracle side of tests)."""
    return dict(nx.single_source_shortest_path_length(graph, source))


def route_metrics(table: Mapping[int, RouteEntry]) -> Dict[int, float]:
    return {d: e.metric for d, e in table.items() if e.valid}
