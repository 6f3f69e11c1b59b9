from .mobility import MobilityState, Phase, Position, RandomWaypoint, init_positions, position_at
from .medium import LinkEvent, LinkKind, Medium, RadioParams, UnicastResult, in_range
from .node import Node

__all__ = [
    "LinkEvent",
    "LinkKind",
    "Medium",
    "MobilityState",
    "Node",
    "Phase",
    "Position",
    "RadioParams",
    "RandomWaypoint",
    "UnicastResult",
    "in_range",
    "init_positions",
    "position_at",
]
