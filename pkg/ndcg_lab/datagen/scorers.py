#  Copyright NDCG Lab Authors
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.

"""Synthetic ranking functions.

A scorer maps the canonical score ``s`` of an instance (and, for noisy
scorers, a fresh uniform draw) to the score it ranks by.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .exceptions import InvalidScorer


class Scorer(ABC):
    name: str
    needs_noise: bool = False

    @abstractmethod
    def scores(self, s: np.ndarray, noise: Optional[np.ndarray] = None) -> np.ndarray:
        pass

    @property
    def is_order_preserving(self) -> bool:
        """True when the induced ranking equals the canonical one."""
        return False


@dataclass(frozen=True)
class CanonicalScorer(Scorer):
    name: str = "canonical"

    def scores(self, s, noise=None):
        return s

    @property
    def is_order_preserving(self):
        return True


class Distortion(str, Enum):
    EXP = "exp"
    CUBE = "cube"
    AFFINE = "affine"
    LOG1P = "log1p"


@dataclass(frozen=True)
class MonotoneDistortScorer(Scorer):
    """Strictly increasing transform of the canonical score."""

    name: str = "distorted"
    phi: Distortion = Distortion.EXP
    a: float = 1.0
    b: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "phi", Distortion(self.phi))
        if self.phi == Distortion.AFFINE and not (self.a > 0.0 and math.isfinite(self.b)):
            raise InvalidScorer(f"affine distortion needs a > 0, got a={self.a}")

    def scores(self, s, noise=None):
        if self.phi == Distortion.EXP:
            return np.exp(s)
        if self.phi == Distortion.CUBE:
            return s**3
        if self.phi == Distortion.LOG1P:
            return np.log1p(s)
        return self.a * s + self.b

    @property
    def is_order_preserving(self):
        return True


@dataclass(frozen=True)
class PartialCorruptScorer(Scorer):
    """Reverses the order inside every interval ``[a, b]`` via ``s -> a + b - s``."""

    name: str = "corrupt"
    intervals: tuple[tuple[float, float], ...] = ((0.8, 1.0),)

    def __post_init__(self):
        intervals = tuple(sorted((float(a), float(b)) for a, b in self.intervals))
        if not intervals:
            raise InvalidScorer("partial corruption needs at least one interval")
        for a, b in intervals:
            if not 0.0 <= a < b <= 1.0:
                raise InvalidScorer(f"interval [{a}, {b}] must satisfy 0 <= a < b <= 1")
        if any(nxt[0] < cur[1] for cur, nxt in zip(intervals, intervals[1:])):
            raise InvalidScorer(f"intervals overlap: {intervals}")
        object.__setattr__(self, "intervals", intervals)

    def scores(self, s, noise=None):
        out = np.array(s, dtype=np.float64, copy=True)
        for a, b in self.intervals:
            inside = (s >= a) & (s <= b)
            out[inside] = a + b - s[inside]
        return out


@dataclass(frozen=True)
class IndependentNoiseScorer(Scorer):
    """``(1 - w) s + w u`` with ``u`` a fresh uniform draw per instance."""

    name: str = "noisy"
    weight: float = 0.5
    needs_noise = True

    def __post_init__(self):
        if not 0.0 <= self.weight <= 1.0:
            raise InvalidScorer(f"noise weight must lie in [0, 1], got {self.weight}")

    def scores(self, s, noise=None):
        if noise is None:
            raise InvalidScorer(f"scorer {self.name} needs a noise draw")
        return (1.0 - self.weight) * s + self.weight * noise

    @property
    def is_order_preserving(self):
        return self.weight == 0.0


def random_scorer(name: str = "random") -> IndependentNoiseScorer:
    """Ranking by pure noise."""
    return IndependentNoiseScorer(name=name, weight=1.0)
