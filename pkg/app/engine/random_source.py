"""Seeded random source shared by one simulation run.

The generator is numpy's ``PCG64`` bit generator. One instance exists per run and is
consumed in a fixed order: initial placement, flow endpoint selection, then
interleaved mobility waypoints and transmission jitter as events fire.
"""
from typing import List, Sequence

import numpy as np

from ..errors import RandomRangeError

ALGORITHM = "PCG64"


class RandomSource:
    def __init__(self, seed: int):
        self.seed = int(seed)
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def uniform(self, lo: float, hi: float) -> float:
        """Value in ``[lo, hi)``; ``uniform(x, x)`` is ``x``."""
        if lo > hi:
            raise RandomRangeError(f"uniform({lo}, {hi}): lo > hi")
        if lo == hi:
            return float(lo)
        return float(self._gen.uniform(lo, hi))

    def uniform_array(self, lo: float, hi: float, size: int) -> np.ndarray:
        if lo > hi:
            raise RandomRangeError(f"uniform({lo}, {hi}): lo > hi")
        if lo == hi:
            return np.full(size, float(lo))
        return self._gen.uniform(lo, hi, size=size)

    def choice_pair(self, population: Sequence[int]) -> List[int]:
        """Two distinct members of ``population``."""
        picked = self._gen.choice(len(population), size=2, replace=False)
        return [population[int(i)] for i in picked]
