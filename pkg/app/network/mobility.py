"""Random Waypoint mobility inside a square field.

Positions are computed lazily from closed-form kinematics; the scheduler only sees
one event per waypoint arrival and one per pause end.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

import numpy as np

from ..engine import EventScheduler, RandomSource
from ..errors import TopologyError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class Position:
    x: float
    y: float


class Phase(str, Enum):
    MOVING = "moving"
    PAUSED = "paused"


@dataclass(slots=True)
class MobilityState:
    current: Position
    waypoint: Position
    speed: float
    pause: float
    phase: Phase = Phase.PAUSED


def init_positions(n: int, side: float, rng: RandomSource) -> List[Position]:
    """``n`` independent uniform placements in ``[0, side]²``."""
    if n < 1:
        raise TopologyError("a scenario needs at least one node")
    if side < 0:
        raise TopologyError(f"field side must be non-negative, got {side}")
    coords = rng.uniform_array(0.0, side, 2 * n)
    return [Position(float(coords[2 * i]), float(coords[2 * i + 1])) for i in range(n)]


def position_at(state: MobilityState, t_elapsed: float) -> Position:
    """Position ``t_elapsed`` seconds into the current leg.

    A moving node advances along the straight line to its waypoint and stops there;
    a paused node stays put.
    """
    if state.phase == Phase.PAUSED or t_elapsed <= 0:
        return state.current
    dx = state.waypoint.x - state.current.x
    dy = state.waypoint.y - state.current.y
    dist = math.hypot(dx, dy)
    travelled = state.speed * t_elapsed
    if dist == 0 or travelled >= dist:
        return state.waypoint
    frac = travelled / dist
    return Position(state.current.x + dx * frac, state.current.y + dy * frac)


class RandomWaypoint:
    """Drives every node's ``MobilityState`` through the scheduler."""

    def __init__(
        self,
        positions: List[Position],
        side: float,
        speed: float,
        pause: float,
        duration: float,
        scheduler: EventScheduler,
        rng: RandomSource,
    ):
        if speed <= 0:
            raise TopologyError("Random Waypoint speed must be positive")
        self.side = side
        self.duration = duration
        self.scheduler = scheduler
        self.rng = rng
        self.speed = speed
        self.states = [MobilityState(p, p, speed, pause) for p in positions]
        self._leg_start = np.zeros(len(positions))
        self._origin = np.array([[p.x, p.y] for p in positions], dtype=float).reshape(-1, 2)
        self._target = self._origin.copy()
        self._moving = np.zeros(len(positions), dtype=bool)
        self._cache_time: Optional[float] = None
        self._cache: Optional[np.ndarray] = None
        self.static = pause >= duration
        self.legs = 0

    def start(self) -> None:
        """Every node starts paused for the scenario pause time."""
        if self.static:
            logger.debug("pause >= duration: topology is static")
            return
        for node, state in enumerate(self.states):
            self.scheduler.at(state.pause, node, "pause_end", lambda node=node: self._depart(node))

    def position(self, node: int, now: float) -> Position:
        return position_at(self.states[node], now - float(self._leg_start[node]))

    def positions(self, now: float) -> np.ndarray:
        """``(n, 2)`` array of positions at ``now``; cached per timestamp."""
        if self._cache is not None and (self.static or self._cache_time == now):
            return self._cache
        delta = self._target - self._origin
        dist = np.hypot(delta[:, 0], delta[:, 1])
        travelled = self.speed * (now - self._leg_start)
        with np.errstate(divide="ignore", invalid="ignore"):
            frac = np.where(self._moving & (dist > 0), np.clip(travelled / dist, 0.0, 1.0), 0.0)
        arr = self._origin + delta * frac[:, None]
        self._cache_time = now
        self._cache = arr
        return arr

    def relocate(self, node: int, pos: Position) -> None:
        """Pin ``node`` at ``pos`` from now on, paused; its pending pause end still fires."""
        if not 0 <= pos.x <= self.side or not 0 <= pos.y <= self.side:
            raise TopologyError(f"position {pos} is outside the {self.side} m field")
        state = self.states[node]
        state.current = pos
        state.waypoint = pos
        state.phase = Phase.PAUSED
        self._set_leg(node, self.scheduler.now, state, moving=False)

    def _depart(self, node: int) -> None:
        now = self.scheduler.now
        state = self.states[node]
        state.current = self.position(node, now)
        state.waypoint = Position(self.rng.uniform(0.0, self.side), self.rng.uniform(0.0, self.side))
        state.phase = Phase.MOVING
        self._set_leg(node, now, state, moving=True)
        self.legs += 1
        travel = math.hypot(state.waypoint.x - state.current.x, state.waypoint.y - state.current.y) / state.speed
        self.scheduler.at(now + travel, node, "waypoint_arrival", lambda: self._arrive(node))

    def _arrive(self, node: int) -> None:
        now = self.scheduler.now
        state = self.states[node]
        state.current = state.waypoint
        state.phase = Phase.PAUSED
        self._set_leg(node, now, state, moving=False)
        self.scheduler.at(now + state.pause, node, "pause_end", lambda: self._depart(node))

    def _set_leg(self, node: int, now: float, state: MobilityState, moving: bool) -> None:
        self._leg_start[node] = now
        self._origin[node] = (state.current.x, state.current.y)
        self._target[node] = (state.waypoint.x, state.waypoint.y)
        self._moving[node] = moving
        self._cache = None
