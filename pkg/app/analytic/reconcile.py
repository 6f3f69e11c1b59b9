"""Compare the closed-form models against what a run actually transmitted."""
import logging
import math
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..models import AnalyticInputs, MetricsRecord, PeriodCheck, ProtocolName, ReconciliationReport, ScenarioConfig
from .cost_models import ce_for

logger = logging.getLogger(__name__)


def periodic_counters(cfg: ScenarioConfig) -> List[Tuple[str, Tuple[str, ...], float]]:
    """``(label, sub-counters, interval)`` for each periodic origination the protocol runs."""
    p = cfg.protocol_params
    if cfg.protocol == ProtocolName.DSDV:
        return [("ru_per", ("ru_per",), p.dsdv.ru_per_interval)]
    if cfg.protocol == ProtocolName.FSR:
        return [("ias", ("ias",), p.fsr.intra_interval), ("ies", ("ies",), p.fsr.inter_interval)]
    olsr = cfg.olsr
    # a triggered TC restarts the TC period, so it stands in for one periodic round
    return [("hello", ("hello",), olsr.hello_interval), ("tc", ("tc", "tc_tri"), olsr.tc_interval)]


def period_check(
    label: str,
    counters: Sequence[str],
    interval: float,
    duration: float,
    per_node: Dict[int, Dict[str, int]],
    nodes: Iterable[int],
) -> PeriodCheck:
    expected = math.floor(duration / interval)
    simulated = {node: sum(per_node.get(node, {}).get(c, 0) for c in counters) for node in sorted(nodes)}
    deviation = max((abs(v - expected) for v in simulated.values()), default=0)
    return PeriodCheck(
        counter=label,
        interval=interval,
        expected=expected,
        simulated=simulated,
        max_deviation=deviation,
        exact=deviation <= 1,
    )


def reconcile(
    cfg: ScenarioConfig,
    inputs: AnalyticInputs,
    record: MetricsRecord,
    tc_originators: Optional[Iterable[int]] = None,
) -> ReconciliationReport:
    """Round counts per node are compared exactly (one round of slack for timer
    alignment at the run boundary); total cost only as an analytic/simulated ratio.

    TC rounds are checked on ``tc_originators`` only, the nodes that ended the run as
    somebody's MPR; by default every node that sent a TC.
    """
    cost = ce_for(cfg.protocol, inputs)
    periods = []
    for label, counters, interval in periodic_counters(cfg):
        if label == "tc":
            nodes = (
                tc_originators
                if tc_originators is not None
                else [n for n, c in record.per_node.items() if any(c.get(k) for k in counters)]
            )
        else:
            nodes = range(cfg.n)
        periods.append(period_check(label, counters, interval, record.duration or cfg.duration, record.per_node, nodes))
    simulated = record.ce_control_tx
    report = ReconciliationReport(
        protocol=cfg.protocol,
        analytic_ce_total=cost.ce_total,
        simulated_ce_total=simulated,
        ratio=cost.ce_total / simulated if simulated else None,
        periods=periods,
    )
    for check in report.periods:
        if not check.exact:
            logger.info(
                "%s: %s rounds deviate by %d from the expected %d",
                cfg.protocol.value,
                check.counter,
                check.max_deviation,
                check.expected,
            )
    return report
