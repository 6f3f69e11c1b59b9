"""Wires one scenario into a runnable simulation and derives its results."""
import logging
import math
import time
from dataclasses import dataclass
from typing import List, Optional, Set, Tuple

import networkx as nx
import numpy as np

from ..analytic import reconcile
from ..engine import EventScheduler, RandomSource
from ..errors import ConservationError
from ..metrics import MetricsCollector
from ..models import AnalyticInputs, MetricsRecord, ProtocolName, ReconciliationReport, ScenarioConfig
from ..network import Medium, Node, RadioParams, RandomWaypoint, init_positions
from ..routing import DsdvProtocol, OlsrProtocol, bfs_hops, build_protocol, route_metrics
from ..traffic import CbrSource, select_flows

logger = logging.getLogger(__name__)

# (node, dest, oracle hops, routed metric or None)
RouteMismatch = Tuple[int, int, int, Optional[float]]


@dataclass
class RunOutcome:
    record: MetricsRecord
    report: ReconciliationReport
    wall_time: float = 0.0


class Simulation:
    """All state of one run.

    Random draws happen in a fixed order: node placement, flow endpoints, then
    waypoints and jitter as events fire.
    """

    def __init__(self, cfg: ScenarioConfig, record_trace: bool = False, record_control: bool = False):
        self.cfg = cfg
        self.scheduler = EventScheduler(record_trace=record_trace)
        self.rng = RandomSource(cfg.seed)
        positions = init_positions(cfg.n, cfg.field_side, self.rng)
        self.flows = select_flows(cfg, self.rng)
        self.mobility = RandomWaypoint(
            positions, cfg.field_side, cfg.speed, cfg.pause, cfg.duration, self.scheduler, self.rng
        )
        self.metrics = MetricsCollector(clock=lambda: self.scheduler.now, record_control=record_control)
        self.medium = Medium(
            RadioParams(range=cfg.radio_range, bandwidth=cfg.bandwidth, jitter_max=cfg.jitter_max),
            self.mobility,
            self.scheduler,
            self.rng,
            self.metrics,
        )
        self.nodes: List[Node] = [Node(i, self.scheduler, self.medium, self.metrics) for i in range(cfg.n)]
        for node in self.nodes:
            node.protocol = build_protocol(node, cfg)
        self.sources = [CbrSource(f, self.nodes[f.src], self.scheduler, cfg.data_ttl) for f in self.flows]
        self.started = False

    def start(self) -> None:
        if self.started:
            return
        self.started = True
        self.mobility.start()
        for node in self.nodes:
            if node.protocol.uses_mac_lsm:
                self.medium.start_lsm(node.node_id, self.cfg.lsm_interval)
        for node in self.nodes:
            node.protocol.on_start()
        for source in self.sources:
            source.start()

    def run_until(self, t: float) -> int:
        self.start()
        return self.scheduler.run_until(t)

    def run(self) -> MetricsRecord:
        self.run_until(self.cfg.duration)
        return self.finalize()

    # accounting

    def in_flight(self) -> int:
        """Data packets still on the air or held back by a protocol."""
        on_air = len(self.scheduler.pending("rx_data"))
        return on_air + sum(node.protocol.held_packets() for node in self.nodes)

    def finalize(self) -> MetricsRecord:
        if self.metrics.ce_control_tx != self.medium.tx_control:
            raise ConservationError(
                f"metrics counted {self.metrics.ce_control_tx} control transmissions, "
                f"the medium carried {self.medium.tx_control}"
            )
        return self.metrics.finalize(self.scheduler.now, self.in_flight())

    # topology views

    def unit_disk_graph(self, now: Optional[float] = None) -> nx.Graph:
        pos = self.mobility.positions(self.scheduler.now if now is None else now)
        d = pos[:, None, :] - pos[None, :, :]
        within = (d ** 2).sum(axis=2) <= self.cfg.radio_range ** 2
        np.fill_diagonal(within, False)
        graph = nx.Graph()
        graph.add_nodes_from(range(self.cfg.n))
        graph.add_edges_from((int(a), int(b)) for a, b in zip(*np.nonzero(np.triu(within))))
        return graph

    def route_mismatches(self) -> List[RouteMismatch]:
        """Every (node, dest) whose routed hop count differs from BFS on the current graph."""
        graph = self.unit_disk_graph()
        mismatches = []
        for node in self.nodes:
            oracle = bfs_hops(graph, node.node_id)
            routed = route_metrics(node.protocol.routing_table())
            for dest in sorted(set(oracle) | set(routed)):
                expected = oracle.get(dest)
                got = routed.get(dest)
                if expected != got:
                    mismatches.append((node.node_id, dest, expected, got))
        return mismatches

    def mpr_originators(self) -> Set[int]:
        """Nodes currently chosen as MPR by at least one neighbour."""
        return {
            node.node_id
            for node in self.nodes
            if isinstance(node.protocol, OlsrProtocol) and node.protocol.mpr.mpr_selectors
        }


def inputs_from_run(sim: Simulation) -> AnalyticInputs:
    """Analytic model inputs measured on a finished run (final topology, event counts)."""
    cfg = sim.cfg
    p = cfg.protocol_params
    graph = sim.unit_disk_graph()
    nb = [graph.degree(v) for v in range(cfg.n)]
    n_ias = [len(nx.single_source_shortest_path_length(graph, v, cutoff=p.fsr.intra_ttl)) - 1 for v in range(cfg.n)]
    n_ies = [len(nx.single_source_shortest_path_length(graph, v, cutoff=p.fsr.inter_ttl)) - 1 for v in range(cfg.n)]
    triggers = sum(n.protocol.trigger_origins for n in sim.nodes if isinstance(n.protocol, DsdvProtocol))
    mprs: Set[int] = set()
    unstable = 0
    for node in sim.nodes:
        if isinstance(node.protocol, OlsrProtocol):
            mprs |= node.protocol.mpr.mpr_set
            unstable += node.protocol.mpr_changes
    olsr = cfg.olsr
    return AnalyticInputs(
        tau_nl=sim.scheduler.now,
        tau_ns=0.0,
        n=cfg.n,
        tau_ru_per=p.dsdv.ru_per_interval,
        trigger_events=triggers,
        tau_ias=p.fsr.intra_interval,
        tau_ies=p.fsr.inter_interval,
        n_ias=n_ias,
        n_ies=n_ies,
        tau_hello=olsr.hello_interval,
        tau_tc=olsr.tc_interval,
        nb=nb,
        n_mprs=len(mprs),
        stable_rounds=math.floor(sim.scheduler.now / olsr.tc_interval),
        unstable_events=unstable,
        scope_reading=cfg.fsr_scope_reading,
    )


def run_scenario(cfg: ScenarioConfig) -> RunOutcome:
    """Run one scenario to completion and reconcile it against the cost models."""
    started = time.perf_counter()
    logger.info("run %s n=%d pause=%g rate=%g seed=%d", cfg.protocol.value, cfg.n, cfg.pause, cfg.flow_rate, cfg.seed)
    sim = Simulation(cfg)
    record = sim.run()
    tc_nodes = sim.mpr_originators() if cfg.protocol in (ProtocolName.OLSR, ProtocolName.OLSR_M) else None
    report = reconcile(cfg, inputs_from_run(sim), record, tc_nodes)
    wall = time.perf_counter() - started
    logger.info(
        "done %s seed=%d: throughput=%.1f bit/s ct=%s ce=%d (%.1fs)",
        cfg.protocol.value,
        cfg.seed,
        record.throughput,
        f"{record.ct_mean:.4f}s" if record.ct_mean is not None else "n/a",
        record.ce_control_tx,
        wall,
    )
    return RunOutcome(record=record, report=report, wall_time=wall)
