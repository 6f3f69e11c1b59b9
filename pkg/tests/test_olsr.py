import itertools

import networkx as nx
import pytest

from app.models import OlsrConfig, OlsrVariant, ProtocolName
from app.routing import (
    BROADCAST,
    ControlVariant,
    LinkEvent,
    LinkKind,
    OlsrProtocol,
    Packet,
    PacketKind,
    covers_two_hop,
    graph_mprs,
    select_mprs,
    simulate_flood,
)
from app.routing.olsr import HelloMsg, LinkStatus, TcMsg, TcReason
from app.scenario import Simulation

from conftest import connected_static_sims, static_cfg

SYM = LinkStatus.SYMMETRIC
HEARD = LinkStatus.HEARD


def hello(origin, links=(), mprs=()):
    msg = HelloMsg(origin, tuple(links), frozenset(mprs))
    return Packet(kind=PacketKind.CONTROL, src=origin, origin=origin, dst=BROADCAST, ttl=1, size=msg.size,
                  created_at=0.0, control_variant=ControlVariant.OLSR_HELLO, payload=msg, counter="hello")


def tc(origin, ansn, msg_seq, selectors, src, ttl=255):
    msg = TcMsg(origin, ansn, msg_seq, tuple(selectors))
    return Packet(kind=PacketKind.CONTROL, src=src, origin=origin, dst=BROADCAST, ttl=ttl, size=msg.size,
                  created_at=0.0, control_variant=ControlVariant.OLSR_TC, payload=msg, counter="tc")


@pytest.fixture
def olsr(ctx):
    return OlsrProtocol(ctx, OlsrConfig())


def make_symmetric(p, neighbor, two_hop=(), mprs=()):
    links = [(p.node_id, SYM)] + [(n, SYM) for n in two_hop]
    p.on_packet(hello(neighbor, links, mprs), neighbor)


# MPR selection


def test_mpr_forced_cover_on_path():
    assert select_mprs(0, {1: {0, 2}}) == {1}


def test_star_centre_needs_no_mprs():
    assert select_mprs(0, {1: {0}, 2: {0}, 3: {0}, 4: {0}}) == set()


def test_five_cycle():
    assert select_mprs(0, {1: {0, 2}, 4: {0, 3}}) == {1, 4}


def test_tie_broken_by_degree_then_id():
    assert select_mprs(0, {1: {0, 3}, 2: {0, 3}}) == {1}
    assert select_mprs(0, {1: {0, 3}, 2: {0, 3, 5}, 5: {0, 2}}) == {2}


def _brute_force_min_cover(node, links):
    two_hop = set().union(*links.values()) - set(links) - {node} if links else set()
    for size in range(len(links) + 1):
        for combo in itertools.combinations(sorted(links), size):
            covered = set().union(*(links[m] for m in combo)) if combo else set()
            if two_hop <= covered:
                return size
    return len(links)


def _random_graphs(count=100):
    for seed in range(count):
        n = 6 + seed % 7
        yield nx.random_geometric_graph(n, 0.5, seed=seed)


def test_five_cycle_matches_brute_force_optimum():
    links = {1: {0, 2}, 4: {0, 3}}
    assert len(select_mprs(0, links)) == _brute_force_min_cover(0, links) == 2


def test_mpr_coverage_on_random_graphs():
    optimal = 0
    checked = 0
    for graph in _random_graphs():
        for node, mprs in graph_mprs(graph).items():
            links = {u: set(graph.neighbors(u)) for u in graph.neighbors(node)}
            assert covers_two_hop(node, links, mprs)
            assert mprs <= set(links)
            best = _brute_force_min_cover(node, links)
            if best == 0:
                assert mprs == set()
            # the greedy heuristic stays within twice the smallest cover
            assert best <= len(mprs) <= 2 * best, (sorted(graph.edges), node)
            optimal += len(mprs) == best
            checked += 1
    assert optimal >= 0.8 * checked


def test_mpr_flooding_never_costs_more_than_blind_flooding():
    strict = 0
    graphs = list(_random_graphs())
    for graph in graphs:
        origin = 0
        with_mprs = simulate_flood(graph, origin, use_mprs=True)
        blind = simulate_flood(graph, origin, use_mprs=False)
        assert with_mprs <= blind
        strict += with_mprs < blind
    assert strict >= len(graphs) // 2


def _relay_flood(graph, origin):
    mprs = graph_mprs(graph)
    heard = {origin}
    relayed = {origin}
    queue = [origin]
    while queue:
        sender = queue.pop(0)
        for r in sorted(graph.neighbors(sender)):
            heard.add(r)
            if r not in relayed and r in mprs[sender]:
                relayed.add(r)
                queue.append(r)
    return heard


def test_mpr_flood_reaches_every_node():
    connected = [g for g in _random_graphs() if nx.is_connected(g)]
    assert connected
    for graph in connected:
        for origin in graph.nodes:
            assert _relay_flood(graph, origin) == set(graph.nodes)


# configuration


def test_m_variant_needs_shorter_intervals():
    with pytest.raises(ValueError):
        OlsrConfig(variant=OlsrVariant.M)
    cfg = OlsrConfig.m_defaults()
    assert (cfg.hello_interval, cfg.tc_interval) == (1.0, 2.5)
    assert cfg.neighbor_hold == 3.0


def test_hello_interval_must_be_below_hold():
    with pytest.raises(ValueError):
        OlsrConfig(hello_interval=2.0, neighbor_hold=2.0)


# neighbour sensing


def test_isolated_hello_is_empty_and_one_hop(olsr, ctx):
    msg = olsr.hello_tick()
    (pkt,) = ctx.sent
    assert msg.links == ()
    assert (pkt.ttl, pkt.counter, pkt.size) == (1, "hello", 12)
    assert ctx.timers[-1].kind == "hello"


def test_link_becomes_symmetric_on_reciprocal_hello(olsr):
    olsr.on_packet(hello(1), 1)
    assert not olsr.neighbors[1].symmetric
    olsr.on_packet(hello(1, [(0, HEARD)]), 1)
    assert olsr.neighbors[1].symmetric


def test_two_hop_set_from_symmetric_entries_only(olsr):
    olsr.on_packet(hello(1, [(0, SYM), (2, SYM), (3, HEARD)]), 1)
    assert olsr.neighbors[1].two_hop == frozenset({2})


def test_ansn_changes_exactly_with_selector_set(olsr):
    make_symmetric(olsr, 1, mprs=[0])
    assert olsr.mpr.mpr_selectors == {1}
    assert olsr.mpr.ansn == 1
    make_symmetric(olsr, 1, mprs=[0])
    assert olsr.mpr.ansn == 1
    make_symmetric(olsr, 1)
    assert olsr.mpr.mpr_selectors == set()
    assert olsr.mpr.ansn == 2


def test_neighbour_expires_after_hold(olsr, ctx):
    make_symmetric(olsr, 1)
    ctx.now = 6.5
    olsr.hello_tick()
    assert 1 not in olsr.neighbors


def test_unicast_failure_expires_neighbour_at_once(olsr):
    make_symmetric(olsr, 1, two_hop=[2])
    olsr.select_mprs()
    olsr.on_link_event(LinkEvent(0, 1, LinkKind.DOWN, 0.0))
    assert 1 not in olsr.neighbors
    assert olsr.mpr.mpr_set == set()


# topology control


def test_mpr_change_triggers_tc_and_resets_timer(olsr, ctx):
    olsr.on_start()
    first_timer = olsr._tc_timer
    make_symmetric(olsr, 1, two_hop=[2])
    ctx.now = 2.0
    olsr.hello_tick()
    assert ctx.counters() == ["tc_tri", "hello"]
    assert olsr.mpr.mpr_set == {1}
    assert olsr.mpr_changes == 1
    assert first_timer.cancelled
    assert olsr._tc_timer.fire_at == 2.0 + 5.0
    assert ctx.sent[1].payload.mprs == frozenset({1})


def test_periodic_tc_only_from_mprs(olsr, ctx):
    olsr.tc_emit(TcReason.PERIODIC)
    assert ctx.sent == []
    make_symmetric(olsr, 1, mprs=[0])
    msg = olsr.tc_emit(TcReason.PERIODIC)
    assert ctx.counters() == ["tc"]
    assert msg.selectors == (1,)
    assert ctx.sent[0].size == 12 + 4


def test_tc_stored_but_not_forwarded_by_non_mpr(olsr, ctx):
    make_symmetric(olsr, 1)
    olsr.on_packet(tc(5, ansn=1, msg_seq=1, selectors=[6], src=1), 1)
    assert olsr.topology[5].selectors == frozenset({6})
    assert ctx.sent == []


def test_tc_forwarded_by_mpr_of_sender(olsr, ctx):
    make_symmetric(olsr, 1, mprs=[0])
    olsr.on_packet(tc(5, ansn=1, msg_seq=1, selectors=[6], src=1, ttl=10), 1)
    (fwd,) = ctx.sent
    assert (fwd.counter, fwd.ttl, fwd.src, fwd.origin) == ("tc_fwd", 9, 0, 5)
    olsr.on_packet(tc(5, ansn=1, msg_seq=1, selectors=[6], src=1, ttl=10), 1)
    assert len(ctx.sent) == 1


def test_tc_relayed_when_selector_copy_arrives_late(olsr, ctx):
    make_symmetric(olsr, 1)
    make_symmetric(olsr, 2, mprs=[0])
    olsr.on_packet(tc(5, ansn=1, msg_seq=1, selectors=[6], src=1), 1)
    assert ctx.sent == []
    olsr.on_packet(tc(5, ansn=1, msg_seq=1, selectors=[6], src=2), 2)
    assert ctx.counters() == ["tc_fwd"]


def test_tc_from_asymmetric_neighbour_ignored(olsr):
    olsr.on_packet(hello(1), 1)
    olsr.on_packet(tc(5, ansn=1, msg_seq=1, selectors=[6], src=1), 1)
    assert 5 not in olsr.topology


def test_older_ansn_does_not_replace_topology(olsr):
    make_symmetric(olsr, 1)
    olsr.on_packet(tc(5, ansn=4, msg_seq=2, selectors=[6, 7], src=1), 1)
    olsr.on_packet(tc(5, ansn=3, msg_seq=3, selectors=[6], src=1), 1)
    assert olsr.topology[5].selectors == frozenset({6, 7})


# routes


def test_routes_through_two_hop_and_tc(olsr):
    make_symmetric(olsr, 1, two_hop=[2])
    olsr.on_packet(tc(2, ansn=1, msg_seq=1, selectors=[3], src=1), 1)
    table = olsr.routing_table()
    assert {d: (e.next_hop, e.metric) for d, e in table.items()} == {0: (0, 0), 1: (1, 1), 2: (1, 2), 3: (1, 3)}


def test_equal_paths_pick_smallest_next_hop(olsr):
    make_symmetric(olsr, 2, two_hop=[3])
    make_symmetric(olsr, 1, two_hop=[3])
    assert olsr.route_lookup(3).next_hop == 1


def test_tc_duplicate_state_one_slot_per_origin(olsr, ctx):
    make_symmetric(olsr, 1, mprs=[0])
    for seq in range(1, 100):
        for origin in (5, 6):
            olsr.on_packet(tc(origin, ansn=1, msg_seq=seq, selectors=[7], src=1, ttl=10), 1)
    assert olsr.seen == {5: 99, 6: 99}
    assert olsr.relayed == {5: 99, 6: 99}
    assert ctx.counters().count("tc_fwd") == 198
    # a straggler older than what was relayed is not relayed again
    olsr.on_packet(tc(5, ansn=1, msg_seq=50, selectors=[7], src=1, ttl=10), 1)
    assert ctx.counters().count("tc_fwd") == 198


def test_tc_refresh_with_same_selectors_keeps_route_table(olsr, ctx):
    make_symmetric(olsr, 1, two_hop=[2])
    olsr.on_packet(tc(2, ansn=1, msg_seq=1, selectors=[3], src=1), 1)
    olsr.routing_table()
    computed = olsr.route_graph.recomputes
    for seq in range(2, 6):
        ctx.now = float(seq)
        olsr.on_packet(tc(2, ansn=1, msg_seq=seq, selectors=[3], src=1), 1)
        assert olsr.route_lookup(3).next_hop == 1
    assert olsr.route_graph.recomputes == computed
    olsr.on_packet(tc(2, ansn=2, msg_seq=6, selectors=[3, 4], src=1), 1)
    assert olsr.route_lookup(4).metric == 3
    assert olsr.route_graph.recomputes == computed + 1


def test_expired_tc_gives_no_route(olsr, ctx):
    make_symmetric(olsr, 1, two_hop=[2])
    olsr.on_packet(tc(2, ansn=1, msg_seq=1, selectors=[3], src=1), 1)
    assert olsr.route_lookup(3) is not None
    ctx.now = 15.5
    make_symmetric(olsr, 1, two_hop=[2])
    assert olsr.route_lookup(3) is None


def test_static_routes_match_bfs():
    for sim in connected_static_sims(ProtocolName.OLSR, 5):
        sim.run_until(sim.cfg.warmup_time())
        assert sim.route_mismatches() == []


def test_olsr_m_static_routes_match_bfs():
    for sim in connected_static_sims(ProtocolName.OLSR_M, 3):
        sim.run_until(sim.cfg.warmup_time())
        assert sim.route_mismatches() == []


def test_olsr_ignores_mac_link_sensing():
    sim = Simulation(static_cfg(ProtocolName.OLSR, seed=2, duration=20.0))
    sim.run()
    assert sim.medium.link_events == []
    assert sim.scheduler.pending("lsm_tick") == []


def test_hellos_counted_per_node():
    sim = Simulation(static_cfg(ProtocolName.OLSR, seed=2, duration=100.0))
    record = sim.run()
    assert all(c["hello"] == 50 for c in record.per_node.values())
    assert len(record.per_node) == 10
