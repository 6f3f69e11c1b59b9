from .scheduler import Event, EventScheduler
from .random_source import RandomSource

__all__ = ["Event", "EventScheduler", "RandomSource"]
