"""Closed-form control-cost (CE) models of the three protocols.

Each ``sum_{i=1}^{k} i`` term is evaluated as ``k(k+1)/2`` and treated as an abstract
cost unit. Time integrals of an event indicator become event counts, so every
link-break or MPR-instability event contributes one flooding round.
"""
from typing import Sequence, Union

import numpy as np

from ..errors import AnalyticInputError
from ..models import AnalyticInputs, DsdvCost, FsrCost, OlsrCost, ProtocolName, ScopeReading

Cost = Union[DsdvCost, FsrCost, OlsrCost]


def triangular(k: Union[int, float, np.ndarray]):
    """``1 + 2 + ... + k``."""
    return k * (k + 1) / 2


def validate(inputs: AnalyticInputs) -> None:
    if inputs.tau_nl <= 0:
        raise AnalyticInputError(f"tau_nl must be positive, got {inputs.tau_nl}")
    if not 0 <= inputs.tau_ns < inputs.tau_nl:
        raise AnalyticInputError(f"need 0 <= tau_ns < tau_nl, got tau_ns={inputs.tau_ns}")
    for name in ("tau_ru_per", "tau_ias", "tau_ies", "tau_hello", "tau_tc"):
        if getattr(inputs, name) <= 0:
            raise AnalyticInputError(f"{name} must be positive, got {getattr(inputs, name)}")
    for name in ("n", "trigger_events", "n_mprs", "stable_rounds", "unstable_events"):
        if getattr(inputs, name) < 0:
            raise AnalyticInputError(f"{name} must be non-negative, got {getattr(inputs, name)}")
    for name in ("n_ias", "n_ies", "nb"):
        if any(v < 0 for v in getattr(inputs, name)):
            raise AnalyticInputError(f"{name} contains a negative count")


def _per_node(inputs: AnalyticInputs, values: Sequence[int], name: str) -> np.ndarray:
    if len(values) != inputs.n:
        raise AnalyticInputError(f"{name} has {len(values)} entries for {inputs.n} nodes")
    return np.asarray(values, dtype=float)


def ce_dsdv(inputs: AnalyticInputs) -> DsdvCost:
    validate(inputs)
    unit = triangular(inputs.n)
    ce_per = inputs.tau_nl / inputs.tau_ru_per * unit
    ce_tri = inputs.trigger_events * unit
    return DsdvCost(ce_per=ce_per, ce_tri=ce_tri, ce_total=ce_per + ce_tri)


def _scope_cost(sizes: np.ndarray, reading: ScopeReading) -> float:
    if sizes.size == 0:
        return 0.0
    if reading == ScopeReading.UNIFORM:
        return float(sizes.size * triangular(sizes.mean()))
    return float(triangular(sizes).sum())


def ce_fsr(inputs: AnalyticInputs) -> FsrCost:
    """Outer sum over nodes, inner sum up to that node's own scope size.

    ``ScopeReading.UNIFORM`` instead gives every node the mean scope size.
    """
    validate(inputs)
    ias = _per_node(inputs, inputs.n_ias, "n_ias")
    ies = _per_node(inputs, inputs.n_ies, "n_ies")
    ce_ias = inputs.tau_nl / inputs.tau_ias * _scope_cost(ias, inputs.scope_reading)
    ce_ies = inputs.tau_nl / inputs.tau_ies * _scope_cost(ies, inputs.scope_reading)
    return FsrCost(ce_ias=ce_ias, ce_ies=ce_ies, ce_total=ce_ias + ce_ies)


def ce_olsr(inputs: AnalyticInputs) -> OlsrCost:
    """HELLO term plus the two-case TC term: stable rounds cost the MPR flood, unstable ones a full flood."""
    validate(inputs)
    nb = _per_node(inputs, inputs.nb, "nb")
    ce_lsm = inputs.tau_nl / inputs.tau_hello * float(nb.sum())
    ce_tri = inputs.stable_rounds * triangular(inputs.n_mprs) + inputs.unstable_events * triangular(inputs.n)
    return OlsrCost(ce_lsm=ce_lsm, ce_tri=ce_tri, ce_total=ce_lsm + ce_tri)


def ce_for(protocol: ProtocolName, inputs: AnalyticInputs) -> Cost:
    if protocol == ProtocolName.DSDV:
        return ce_dsdv(inputs)
    if protocol == ProtocolName.FSR:
        return ce_fsr(inputs)
    return ce_olsr(inputs)
