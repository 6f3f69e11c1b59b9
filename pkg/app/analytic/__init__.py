from .cost_models import ce_dsdv, ce_for, ce_fsr, ce_olsr, triangular, validate
from .reconcile import period_check, periodic_counters, reconcile

__all__ = [
    "ce_dsdv",
    "ce_for",
    "ce_fsr",
    "ce_olsr",
    "period_check",
    "periodic_counters",
    "reconcile",
    "triangular",
    "validate",
]
