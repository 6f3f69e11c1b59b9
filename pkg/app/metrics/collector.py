"""Per-run accounting: throughput, end-to-end delay (CT) and control cost (CE)."""
import logging
from collections import Counter, defaultdict
from typing import Callable, DefaultDict, Dict, List, Optional, Set, Tuple

import numpy as np

from ..errors import ConservationError
from ..models import MetricsRecord
from ..routing.base import ForwardResult, Packet

logger = logging.getLogger(__name__)

# (time, node, counter) of one control transmission
ControlTx = Tuple[float, int, str]


class MetricsCollector:
    """Counts what happens to data and control packets during one run.

    ``clock`` is only needed when ``record_control`` is on, to timestamp the control
    transmission log.
    """

    def __init__(self, clock: Optional[Callable[[], float]] = None, record_control: bool = False):
        self.clock = clock
        self.sent = 0
        self.delivered = 0
        self.delivered_bytes = 0
        self.drops: Counter = Counter()
        self.duplicates = 0
        self.delays: List[float] = []
        self.ce_control_tx = 0
        self.ce_control_bytes = 0
        self.sub_counters: Counter = Counter()
        self.per_node: DefaultDict[int, Counter] = defaultdict(Counter)
        self.control_log: Optional[List[ControlTx]] = [] if record_control else None
        self._seen: Set[Tuple[int, int]] = set()

    def on_injected(self, pkt: Packet) -> None:
        self.sent += 1

    def on_delivery(self, pkt: Packet, now: float) -> None:
        key = (pkt.flow_id, pkt.payload_seq)
        if key in self._seen:
            self.duplicates += 1
            logger.warning("duplicate delivery of flow %d packet %d at t=%.3f", pkt.flow_id, pkt.payload_seq, now)
            return
        self._seen.add(key)
        self.delivered += 1
        self.delivered_bytes += pkt.size
        self.delays.append(now - pkt.created_at)

    def on_drop(self, pkt: Packet, reason: ForwardResult) -> None:
        self.drops[reason.value] += 1

    def on_control_tx(self, node: int, pkt: Packet) -> None:
        self.ce_control_tx += 1
        self.ce_control_bytes += pkt.size
        self.sub_counters[pkt.counter] += 1
        self.per_node[node][pkt.counter] += 1
        if self.control_log is not None:
            self.control_log.append((self.clock() if self.clock else pkt.created_at, node, pkt.counter))

    def node_counts(self, counter: str) -> Dict[int, int]:
        """Per-node transmissions charged to ``counter``."""
        return {node: c[counter] for node, c in sorted(self.per_node.items()) if c[counter]}

    def finalize(self, duration: float, in_flight: int = 0) -> MetricsRecord:
        """Aggregate the run; raises ``ConservationError`` if any data packet is unaccounted for."""
        dropped = sum(self.drops.values())
        if self.delivered + dropped + in_flight != self.sent:
            raise ConservationError(
                f"sent={self.sent} but delivered={self.delivered} + dropped={dropped} + in_flight={in_flight}"
            )
        return MetricsRecord(
            throughput=self.delivered_bytes * 8 / duration if duration > 0 else 0.0,
            ct_mean=float(np.mean(self.delays)) if self.delays else None,
            ct_samples=len(self.delays),
            ce_control_tx=self.ce_control_tx,
            ce_control_bytes=self.ce_control_bytes,
            sent=self.sent,
            delivered=self.delivered,
            dropped_no_route=self.drops[ForwardResult.DROPPED_NO_ROUTE.value],
            dropped_ttl=self.drops[ForwardResult.DROPPED_TTL.value],
            dropped_buffer=self.drops[ForwardResult.DROPPED_BUFFER.value],
            in_flight=in_flight,
            duplicates=self.duplicates,
            duration=duration,
            sub_counters=dict(sorted(self.sub_counters.items())),
            per_node={node: dict(c) for node, c in sorted(self.per_node.items())},
        )
