"""Multipoint relay selection and flood cost over static graphs."""
from collections import deque
from typing import AbstractSet, Dict, Mapping, Set

import networkx as nx


def strict_two_hop(node: int, neighbor_links: Mapping[int, AbstractSet[int]]) -> Set[int]:
    """Nodes reachable through a neighbour that are neither ``node`` nor a neighbour."""
    one_hop = set(neighbor_links)
    reach: Set[int] = set()
    for links in neighbor_links.values():
        reach |= links
    return reach - one_hop - {node}


def select_mprs(node: int, neighbor_links: Mapping[int, AbstractSet[int]]) -> Set[int]:
    """Greedy MPR cover.

    ``neighbor_links`` maps each symmetric neighbour to the nodes it reports as its
    own symmetric neighbours. Sole reachers of a 2-hop node go in first; the rest is
    covered greedily, ties broken by larger degree then smaller id.
    """
    two_hop = strict_two_hop(node, neighbor_links)
    covers: Dict[int, Set[int]] = {n: set(links) & two_hop for n, links in neighbor_links.items()}
    mprs: Set[int] = set()
    for target in two_hop:
        reachers = [n for n, cov in covers.items() if target in cov]
        if len(reachers) == 1:
            mprs.add(reachers[0])
    uncovered = set(two_hop)
    for m in mprs:
        uncovered -= covers[m]
    while uncovered:
        best = max(
            (n for n in covers if n not in mprs),
            key=lambda n: (len(covers[n] & uncovered), len(neighbor_links[n] - {node}), -n),
            default=None,
        )
        if best is None or not covers[best] & uncovered:
            break
        mprs.add(best)
        uncovered -= covers[best]
    assert covers_two_hop(node, neighbor_links, mprs), f"MPR set {mprs} of node {node} leaves 2-hop nodes uncovered"
    return mprs


def covers_two_hop(node: int, neighbor_links: Mapping[int, AbstractSet[int]], mprs: AbstractSet[int]) -> bool:
    covered: Set[int] = set()
    for m in mprs:
        covered |= neighbor_links[m]
    return strict_two_hop(node, neighbor_links) <= covered


def graph_mprs(graph: nx.Graph) -> Dict[int, Set[int]]:
    """MPR set of every node of a static graph."""
    result = {}
    for v in graph.nodes:
        links = {u: set(graph.neighbors(u)) for u in graph.neighbors(v)}
        result[v] = select_mprs(v, links)
    return result


def simulate_flood(graph: nx.Graph, origin: int, use_mprs: bool) -> int:
    """Transmissions needed to flood one message from ``origin``.

    Blind flooding has every node retransmit its first copy. Under the MPR rule a
    node retransmits once, on the first copy from a node that picked it as MPR.
    """
    mprs = graph_mprs(graph) if use_mprs else {}
    relayed = {origin}
    queue = deque([origin])
    transmissions = 0
    while queue:
        sender = queue.popleft()
        transmissions += 1
        for receiver in sorted(graph.neighbors(sender)):
            if receiver in relayed:
                continue
            if not use_mprs or receiver in mprs[sender]:
                relayed.add(receiver)
                queue.append(receiver)
    return transmissions
