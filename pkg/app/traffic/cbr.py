"""Constant-bit-rate data sources."""
import logging
from typing import List

from ..engine import EventScheduler, RandomSource
from ..models import FlowConfig, ScenarioConfig
from ..routing.base import DEFAULT_DATA_TTL, Packet, PacketKind

logger = logging.getLogger(__name__)


def select_flows(cfg: ScenarioConfig, rng: RandomSource) -> List[FlowConfig]:
    """``cfg.flows`` random (src, dst) pairs sharing the scenario's rate and window."""
    nodes = list(range(cfg.n))
    flows = []
    for flow_id in range(cfg.flows):
        src, dst = rng.choice_pair(nodes)
        flows.append(
            FlowConfig(
                flow_id=flow_id,
                src=src,
                dst=dst,
                rate=cfg.flow_rate,
                pkt_size=cfg.pkt_size,
                start=cfg.flow_start,
                stop=cfg.traffic_stop,
            )
        )
    return flows


class CbrSource:
    """Injects one packet every ``1 / rate`` seconds inside ``[start, stop)``.

    Tick times are ``start + k / rate`` so no rounding error builds up over long runs.
    """

    def __init__(self, flow: FlowConfig, node, scheduler: EventScheduler, data_ttl: int = DEFAULT_DATA_TTL):
        if node.node_id != flow.src:
            raise ValueError(f"flow {flow.flow_id} starts at {flow.src}, not at node {node.node_id}")
        self.flow = flow
        self.node = node
        self.scheduler = scheduler
        self.data_ttl = data_ttl
        self.payload_seq = 0

    def start(self) -> None:
        self._schedule(self.flow.start)

    def _schedule(self, at: float) -> None:
        if at < self.flow.stop:
            self.scheduler.at(at, self.flow.src, "flow_tick", self.flow_tick)

    def flow_tick(self) -> Packet:
        now = self.scheduler.now
        pkt = Packet(
            kind=PacketKind.DATA,
            src=self.flow.src,
            origin=self.flow.src,
            dst=self.flow.dst,
            ttl=self.data_ttl,
            size=self.flow.pkt_size,
            created_at=now,
            payload_seq=self.payload_seq,
            flow_id=self.flow.flow_id,
        )
        self.payload_seq += 1
        self.node.send_data(pkt)
        self._schedule(self.flow.start + self.payload_seq / self.flow.rate)
        return pkt

    @property
    def offered_load(self) -> float:
        """Bits per second this flow puts on the network."""
        return self.flow.rate * self.flow.pkt_size * 8
