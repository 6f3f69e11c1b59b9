from .schemas import (
    AnalyticInputs,
    DsdvConfig,
    DsdvCost,
    FlowConfig,
    FsrConfig,
    FsrCost,
    MetricsRecord,
    OlsrConfig,
    OlsrCost,
    OlsrVariant,
    PeriodCheck,
    ProtocolName,
    ProtocolParams,
    ReconciliationReport,
    RunRecord,
    RunRequest,
    RunStatus,
    ScenarioConfig,
    ScopeReading,
    SweepAxis,
    SweepSpec,
)

__all__ = [
    "AnalyticInputs",
    "DsdvConfig",
    "DsdvCost",
    "FlowConfig",
    "FsrConfig",
    "FsrCost",
    "MetricsRecord",
    "OlsrConfig",
    "OlsrCost",
    "OlsrVariant",
    "PeriodCheck",
    "ProtocolName",
    "ProtocolParams",
    "ReconciliationReport",
    "RunRecord",
    "RunRequest",
    "RunStatus",
    "ScenarioConfig",
    "ScopeReading",
    "SweepAxis",
    "SweepSpec",
]
