from .collector import ControlTx, MetricsCollector

__all__ = ["ControlTx", "MetricsCollector"]
