"""Exception hierarchy shared by the engine, protocols and scenario tooling."""
from typing import Optional


class SimulationError(Exception):
    """Base class for every error raised by the simulator."""


class SchedulingError(SimulationError):
    """An event was scheduled before the current clock."""


class RandomRangeError(SimulationError, ValueError):
    pass


class TopologyError(SimulationError):
    """Unknown node id, self-unicast or an empty node set."""


class ConservationError(SimulationError):
    """Data packet accounting does not add up at the end of a run."""


class AnalyticInputError(SimulationError, ValueError):
    pass


class ConfigError(SimulationError, ValueError):
    """Scenario file could not be parsed or failed validation."""

    def __init__(self, message: str, line: Optional[int] = None, key: Optional[str] = None):
        self.line = line
        self.key = key
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")
