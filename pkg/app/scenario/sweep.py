"""Multi-seed parameter sweeps and their CSV output."""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import pandas as pd

from ..models import ProtocolName, ScenarioConfig, SweepAxis, SweepSpec
from .simulation import run_scenario

logger = logging.getLogger(__name__)

COLUMNS = [
    "protocol",
    "axis",
    "axis_value",
    "seed",
    "throughput_bps",
    "ct_mean_s",
    "ce_control_tx",
    "ce_control_bytes",
    "sent",
    "delivered",
    "dropped_no_route",
    "dropped_ttl",
    "dropped_buffer",
    "analytic_ce_total",
    "analytic_sim_ratio",
]
ERROR_COLUMN = "error"
METRIC_COLUMNS = COLUMNS[4:]
NO_AXIS = "none"
MEAN_SEED = "mean"

# (protocol, axis value, seed)
RunKey = Tuple[str, Optional[float], int]


def scenario_for(cfg: ScenarioConfig, protocol: ProtocolName, axis: Optional[SweepAxis], value: Optional[float], seed: int) -> ScenarioConfig:
    """Copy of ``cfg`` with one sweep point applied, validated again."""
    data = cfg.model_dump()
    data.update(protocol=protocol, seed=seed)
    if axis is not None:
        data[axis.value] = int(value) if axis == SweepAxis.N else value
    return ScenarioConfig.model_validate(data)


def _run_row(cfg: ScenarioConfig, protocol: ProtocolName, axis: Optional[SweepAxis], value: Optional[float], seed: int) -> Dict[str, Any]:
    row: Dict[str, Any] = {
        "protocol": protocol.value,
        "axis": axis.value if axis is not None else NO_AXIS,
        "axis_value": value,
        "seed": seed,
    }
    try:
        outcome = run_scenario(scenario_for(cfg, protocol, axis, value, seed))
    except Exception as e:
        logger.exception("run %s %s=%s seed=%d failed", protocol.value, row["axis"], value, seed)
        row[ERROR_COLUMN] = f"{type(e).__name__}: {e}"
        return row
    record, report = outcome.record, outcome.report
    row.update(
        throughput_bps=record.throughput,
        ct_mean_s=record.ct_mean,
        ce_control_tx=record.ce_control_tx,
        ce_control_bytes=record.ce_control_bytes,
        sent=record.sent,
        delivered=record.delivered,
        dropped_no_route=record.dropped_no_route,
        dropped_ttl=record.dropped_ttl,
        dropped_buffer=record.dropped_buffer,
        analytic_ce_total=report.analytic_ce_total,
        analytic_sim_ratio=report.ratio,
        error="",
    )
    return row


def _points(cfg: ScenarioConfig, sweep: Optional[SweepSpec], protocols: Sequence[ProtocolName], seeds: int) -> List[tuple]:
    values: List[Optional[float]] = list(sweep.values) if sweep is not None else [None]
    axis = sweep.axis if sweep is not None else None
    return [
        (cfg, protocol, axis, value, cfg.seed + k)
        for protocol in protocols
        for value in values
        for k in range(seeds)
    ]


def _sort_key(row: Dict[str, Any]) -> tuple:
    value = row["axis_value"]
    value = -math.inf if value is None or (isinstance(value, float) and math.isnan(value)) else value
    is_mean = row["seed"] == MEAN_SEED
    return row["protocol"], value, is_mean, 0 if is_mean else row["seed"]


def aggregate(rows: Iterable[Dict[str, Any]]) -> List[Dict[str, Any]]:
    """One mean row per (protocol, axis value) over its successful seeds."""
    frame = pd.DataFrame([r for r in rows if not r.get(ERROR_COLUMN)], columns=COLUMNS)
    if frame.empty:
        return []
    frame["axis_value"] = frame["axis_value"].astype(float)
    means = []
    for (protocol, axis, value), group in frame.groupby(["protocol", "axis", "axis_value"], dropna=False, sort=True):
        row: Dict[str, Any] = {"protocol": protocol, "axis": axis, "axis_value": value, "seed": MEAN_SEED, ERROR_COLUMN: ""}
        for column in METRIC_COLUMNS:
            row[column] = pd.to_numeric(group[column], errors="coerce").mean()
        means.append(row)
    return means


def run_sweep(
    cfg: ScenarioConfig,
    sweep: Optional[SweepSpec] = None,
    protocols: Optional[Sequence[ProtocolName]] = None,
    seeds: Optional[int] = None,
    workers: int = 1,
) -> pd.DataFrame:
    """Run every (protocol, axis value, seed) point and return run rows plus mean rows.

    A failing run becomes a row with the ``error`` column set; the sweep carries on.
    Rows come back sorted, whatever order the runs finished in.
    """
    protocols = list(protocols) if protocols else [cfg.protocol]
    seeds = seeds if seeds is not None else (sweep.seeds if sweep is not None else 1)
    points = _points(cfg, sweep, protocols, seeds)
    logger.info("sweep: %d runs on %d worker(s)", len(points), workers)
    if workers > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_row, *zip(*points)))
    else:
        rows = [_run_row(*point) for point in points]
    rows.extend(aggregate(rows))
    rows.sort(key=_sort_key)
    frame = pd.DataFrame(rows, columns=COLUMNS + [ERROR_COLUMN])
    frame[ERROR_COLUMN] = frame[ERROR_COLUMN].fillna("")
    return frame


def failed_runs(frame: pd.DataFrame) -> int:
    return int((frame[ERROR_COLUMN].astype(str) != "").sum())


def write_csv(frame: pd.DataFrame, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, na_rep="", float_format="%.10g", lineterminator="\n")
    logger.info("wrote %d rows to %s", len(frame), path)
    return path


def overhead_ratio(
    frame: pd.DataFrame,
    numerator: ProtocolName = ProtocolName.FSR,
    denominator: ProtocolName = ProtocolName.DSDV,
) -> pd.Series:
    """Control transmissions of ``numerator`` over ``denominator`` per axis value.

    Each side is the median over its successful seeds. Raises ``ValueError`` when the
    frame does not hold runs of both protocols.
    """
    runs = frame[(frame["seed"] != MEAN_SEED) & (frame[ERROR_COLUMN].astype(str) == "")]
    present = set(runs["protocol"])
    missing = {numerator.value, denominator.value} - present
    if missing:
        raise ValueError(f"no successful runs for {', '.join(sorted(missing))}")
    ce = pd.to_numeric(runs["ce_control_tx"]).astype(float)
    medians = ce.groupby([runs["protocol"], runs["axis_value"].astype(float)], dropna=False).median()
    ratio = medians.loc[numerator.value] / medians.loc[denominator.value]
    ratio.name = f"{numerator.value}_{denominator.value}_ce_ratio"
    ratio.index.name = "axis_value"
    return ratio


def write_ratio_csv(ratio: pd.Series, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    ratio.reset_index().to_csv(path, index=False, na_rep="", float_format="%.10g", lineterminator="\n")
    logger.info("wrote %s for %d axis values to %s", ratio.name, len(ratio), path)
    return path
