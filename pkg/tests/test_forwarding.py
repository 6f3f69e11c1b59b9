import pytest

from app.routing import ForwardResult, RouteGraph, forward_data, link_edges

from conftest import FakeContext, RecordingProtocol, data_packet


def test_expired_ttl_dropped():
    ctx = FakeContext()
    result = forward_data(ctx, RecordingProtocol(ctx, {2: 1}), data_packet(ttl=0))
    assert result == ForwardResult.DROPPED_TTL
    assert ctx.drops == [ForwardResult.DROPPED_TTL]
    assert ctx.unicasts == []


def test_no_route_dropped():
    ctx = FakeContext()
    assert forward_data(ctx, RecordingProtocol(ctx), data_packet()) == ForwardResult.DROPPED_NO_ROUTE
    assert ctx.drops == [ForwardResult.DROPPED_NO_ROUTE]


def test_forwarded_to_next_hop_with_ttl_decremented():
    ctx = FakeContext()
    assert forward_data(ctx, RecordingProtocol(ctx, {2: 1}), data_packet(ttl=5)) == ForwardResult.SENT
    ((hop, pkt),) = ctx.unicasts
    assert hop == 1
    assert pkt.ttl == 4
    assert pkt.src == 0


def test_broken_link_retried_once_then_dropped():
    ctx = FakeContext()
    ctx.link_ok = False
    assert forward_data(ctx, RecordingProtocol(ctx, {2: 1}), data_packet()) == ForwardResult.DROPPED_NO_ROUTE
    assert len(ctx.unicasts) == 2
    assert ctx.drops == [ForwardResult.DROPPED_NO_ROUTE]


def test_data_reaches_destination_over_two_hops(line3):
    line3.protocol(0).routes = {2: 1}
    line3.protocol(1).routes = {2: 2}
    line3.nodes[0].send_data(data_packet(now=0.0))
    line3.scheduler.run_until(1.0)
    record = line3.metrics.finalize(1.0)
    assert (record.sent, record.delivered) == (1, 1)
    assert record.ct_mean == pytest.approx(2 * 512 * 8 / 2_000_000)


def test_route_graph_recomputes_only_on_edge_change():
    graph = RouteGraph(0)
    edges = link_edges(0, [1, 2], {1: [3], 2: [3], 3: [4]})
    first = graph.table(edges, 1.0)
    assert {d: (e.next_hop, e.metric) for d, e in first.items()} == {
        0: (0, 0), 1: (1, 1), 2: (2, 1), 3: (1, 2), 4: (1, 3)}
    assert graph.table(set(edges), 2.0) is first
    assert graph.recomputes == 1

    second = graph.table(link_edges(0, [2], {2: [3], 3: [4]}), 3.0)
    assert graph.recomputes == 2
    assert {d: e.next_hop for d, e in second.items()} == {0: 0, 2: 2, 3: 2, 4: 2}
