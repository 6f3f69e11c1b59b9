from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from typing import Optional, List, Dict, Any
from datetime import datetime
from enum import Enum


class ProtocolName(str, Enum):
    DSDV = "dsdv"
    FSR = "fsr"
    OLSR = "olsr"
    OLSR_M = "olsr_m"


class OlsrVariant(str, Enum):
    STANDARD = "standard"
    M = "M"


class ScopeReading(str, Enum):
    """How the nested scope sums of the FSR cost model are read."""
    PER_NODE = "per_node"
    UNIFORM = "uniform"


class SweepAxis(str, Enum):
    PAUSE = "pause"
    N = "n"
    FLOW_RATE = "flow_rate"


class RunStatus(str, Enum):
    PROCESSING = "processing"
    COMPLETE = "complete"
    FAILED = "failed"


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


# protocol timer defaults
class DsdvConfig(_Strict):
    ru_per_interval: float = Field(15.0, gt=0)
    settling_time: float = Field(6.0, ge=0)
    buffer_during_settling: bool = True
    buffer_capacity: int = Field(8, ge=0)


class FsrConfig(_Strict):
    intra_ttl: int = Field(2, ge=1)
    intra_interval: float = Field(5.0, gt=0)
    inter_ttl: int = Field(255, ge=1)
    inter_interval: float = Field(15.0, gt=0)

    @model_validator(mode="after")
    def _scopes_graded(self):
        if self.intra_ttl >= self.inter_ttl:
            raise ValueError("intra_ttl must be smaller than inter_ttl")
        if self.intra_interval >= self.inter_interval:
            raise ValueError("intra_interval must be smaller than inter_interval")
        return self


STANDARD_HELLO_INTERVAL = 2.0
STANDARD_TC_INTERVAL = 5.0


class OlsrConfig(_Strict):
    hello_interval: float = Field(STANDARD_HELLO_INTERVAL, gt=0)
    tc_interval: float = Field(STANDARD_TC_INTERVAL, gt=0)
    neighbor_hold: Optional[float] = Field(None, gt=0)
    tc_hold: Optional[float] = Field(None, gt=0)
    variant: OlsrVariant = OlsrVariant.STANDARD

    @model_validator(mode="after")
    def _fill_holds(self):
        if self.neighbor_hold is None:
            self.neighbor_hold = 3 * self.hello_interval
        if self.tc_hold is None:
            self.tc_hold = 3 * self.tc_interval
        if self.hello_interval >= self.neighbor_hold:
            raise ValueError("hello_interval must be smaller than neighbor_hold")
        if self.variant == OlsrVariant.M and (
            self.hello_interval >= STANDARD_HELLO_INTERVAL or self.tc_interval >= STANDARD_TC_INTERVAL
        ):
            raise ValueError("OLSR-M needs hello and TC intervals below the standard defaults")
        return self

    @classmethod
    def m_defaults(cls, **overrides) -> "OlsrConfig":
        values = {"hello_interval": 1.0, "tc_interval": 2.5, "variant": OlsrVariant.M}
        values.update(overrides)
        return cls(**values)


class ProtocolParams(_Strict):
    dsdv: DsdvConfig = Field(default_factory=DsdvConfig)
    fsr: FsrConfig = Field(default_factory=FsrConfig)
    olsr: OlsrConfig = Field(default_factory=OlsrConfig)
    olsr_m: OlsrConfig = Field(default_factory=OlsrConfig.m_defaults)


class FlowConfig(_Strict):
    flow_id: int = 0
    src: int
    dst: int
    rate: float = Field(gt=0)
    pkt_size: int = Field(512, gt=0)
    start: float = Field(0.0, ge=0)
    stop: float

    @model_validator(mode="after")
    def _check(self):
        if self.src == self.dst:
            raise ValueError("flow src and dst must differ")
        if self.start >= self.stop:
            raise ValueError("flow start must precede stop")
        return self


class ScenarioConfig(_Strict):
    """Complete declarative description of one experiment."""
    protocol: ProtocolName
    n: int = Field(50, ge=1)
    field_side: float = Field(1000.0, gt=0)
    radio_range: float = Field(250.0, gt=0, alias="range")
    bandwidth: float = Field(2_000_000.0, gt=0)
    speed: float = Field(30.0, gt=0)
    pause: float = Field(0.0, ge=0)
    duration: float = Field(900.0, gt=0)
    flows: int = Field(10, ge=0)
    flow_rate: float = Field(4.0, gt=0)
    pkt_size: int = Field(512, gt=0)
    flow_start: float = Field(0.0, ge=0)
    flow_stop: Optional[float] = Field(None, gt=0)
    seed: int = 1
    jitter_max: float = Field(0.001, ge=0)
    lsm_interval: float = Field(0.5, gt=0)
    data_ttl: int = Field(32, ge=1)
    fsr_scope_reading: ScopeReading = ScopeReading.PER_NODE
    protocol_params: ProtocolParams = Field(default_factory=ProtocolParams)

    @model_validator(mode="after")
    def _check(self):
        if self.pause > self.duration:
            raise ValueError(f"pause ({self.pause}) must not exceed duration ({self.duration})")
        stop = self.traffic_stop
        if stop > self.duration:
            raise ValueError("flow_stop must not exceed duration")
        if self.flows and self.flow_start >= stop:
            raise ValueError("flow_start must precede flow_stop")
        if self.flows and self.n < 2:
            raise ValueError("traffic flows need at least two nodes")
        return self

    @property
    def traffic_stop(self) -> float:
        return self.flow_stop if self.flow_stop is not None else self.duration

    @property
    def olsr(self) -> OlsrConfig:
        if self.protocol == ProtocolName.OLSR_M:
            return self.protocol_params.olsr_m
        return self.protocol_params.olsr

    def slowest_period(self) -> float:
        p = self.protocol_params
        if self.protocol == ProtocolName.DSDV:
            return p.dsdv.ru_per_interval
        if self.protocol == ProtocolName.FSR:
            return p.fsr.inter_interval
        return max(self.olsr.tc_interval, self.olsr.hello_interval)

    def warmup_time(self) -> float:
        """Time after which a static network's routes have converged.

        OLSR needs a topology hold time on top of two TC rounds: a node that lost
        its early selectors stops sending TCs, so its entry only leaves on expiry.
        """
        if self.protocol in (ProtocolName.OLSR, ProtocolName.OLSR_M):
            return 2 * self.olsr.tc_interval + self.olsr.tc_hold
        return 2 * self.slowest_period()


class SweepSpec(_Strict):
    axis: SweepAxis
    values: List[float]
    seeds: int = Field(1, ge=1)

    @field_validator("values")
    @classmethod
    def _increasing(cls, values: List[float]) -> List[float]:
        if not values:
            raise ValueError("sweep values must not be empty")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("sweep values must be strictly increasing")
        return values


class MetricsRecord(BaseModel):
    """Per-run output row."""
    throughput: float = 0.0
    ct_mean: Optional[float] = None
    ct_samples: int = 0
    ce_control_tx: int = 0
    ce_control_bytes: int = 0
    sent: int = 0
    delivered: int = 0
    dropped_no_route: int = 0
    dropped_ttl: int = 0
    dropped_buffer: int = 0
    in_flight: int = 0
    duplicates: int = 0
    duration: float = 0.0
    sub_counters: Dict[str, int] = Field(default_factory=dict)
    per_node: Dict[int, Dict[str, int]] = Field(default_factory=dict)

    @property
    def delivery_ratio(self) -> Optional[float]:
        return self.delivered / self.sent if self.sent else None


class AnalyticInputs(BaseModel):
    """Every symbol of the closed-form cost models for one scenario."""
    tau_nl: float
    tau_ns: float = 0.0
    n: int = 0
    tau_ru_per: float = 15.0
    trigger_events: int = 0
    tau_ias: float = 5.0
    tau_ies: float = 15.0
    n_ias: List[int] = Field(default_factory=list)
    n_ies: List[int] = Field(default_factory=list)
    tau_hello: float = 2.0
    tau_tc: float = 5.0
    nb: List[int] = Field(default_factory=list)
    n_mprs: int = 0
    stable_rounds: int = 0
    unstable_events: int = 0
    scope_reading: ScopeReading = ScopeReading.PER_NODE


class DsdvCost(BaseModel):
    ce_per: float
    ce_tri: float
    ce_total: float


class FsrCost(BaseModel):
    ce_ias: float
    ce_ies: float
    ce_total: float


class OlsrCost(BaseModel):
    ce_lsm: float
    ce_tri: float
    ce_total: float


class PeriodCheck(BaseModel):
    """Expected periodic rounds per node against what each node actually originated."""
    counter: str
    interval: float
    expected: int
    simulated: Dict[int, int]
    max_deviation: int
    exact: bool


class ReconciliationReport(BaseModel):
    protocol: ProtocolName
    analytic_ce_total: float
    simulated_ce_total: int
    ratio: Optional[float] = None
    periods: List[PeriodCheck] = Field(default_factory=list)

    @property
    def rounds_match(self) -> bool:
        return all(p.exact for p in self.periods)


class RunRequest(BaseModel):
    scenario: ScenarioConfig
    sweep: Optional[SweepSpec] = None


class RunRecord(BaseModel):
    id: int
    protocol: ProtocolName
    status: RunStatus = RunStatus.PROCESSING
    progress: int = 0
    progress_message: str = "Starting..."
    rows: Optional[List[Dict[str, Any]]] = None
    error: Optional[str] = None
    created_at: Optional[datetime] = None
    completed_at: Optional[datetime] = None
