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

"""Conditional grade distributions on the canonical scale.

Instances are described directly through their canonical score ``s``, which is
uniform on ``[0, 1]``; the grade of an instance is drawn from the probability
vector ``g(s) = (g_1(s), ..., g_|Y|(s))``, best grade first.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from ndcg_lab.measures.metrics import GradeSet
from ndcg_lab.measures.quadrature import integrate

from .curves import Curve
from .exceptions import InvalidDistribution

logger = logging.getLogger(__name__)

CHECK_GRID_SIZE = 10_001
SUM_TOLERANCE = 1e-12
HOLDER_PAIRS = 1_000


class ConditionalGrades(ABC):
    """Grade probabilities conditioned on the canonical score."""

    grade_set: GradeSet

    @abstractmethod
    def probabilities(self, s) -> np.ndarray:
        """Array of shape ``s.shape + (|Y|,)``."""

    @property
    @abstractmethod
    def breakpoints(self) -> tuple[float, ...]:
        pass

    @property
    @abstractmethod
    def continuous(self) -> bool:
        pass

    def top_curve(self, s):
        """``Pr[Y = best grade | s]``"""
        values = self.probabilities(s)[..., 0]
        return float(values) if np.ndim(s) == 0 else values

    def expected_gain(self, s):
        """``E[gain(Y) | s]``"""
        values = self.probabilities(s) @ self.grade_set.gains
        return float(values) if np.ndim(s) == 0 else values

    @cached_property
    def marginals(self) -> np.ndarray:
        """``p_j = ∫₀¹ g_j(s) ds`` for every grade."""
        masses = [
            integrate(
                lambda s, j=j: float(self.probabilities(s)[j]),
                0.0,
                1.0,
                breakpoints=self.breakpoints,
            ).value
            for j in range(len(self.grade_set))
        ]
        return np.clip(np.asarray(masses), 0.0, 1.0)

    def grade_masses(self) -> np.ndarray:
        """``R_0 = 0, R_j = Pr(Y >= y_j)``, ending exactly at one."""
        masses = np.concatenate([[0.0], np.cumsum(self.marginals)])
        masses[-1] = 1.0
        return np.minimum(masses, 1.0)


@dataclass(frozen=True, eq=False)
class DistributionSpec(ConditionalGrades):
    """Grade set plus one curve per grade.

    ``curves`` holds either a curve for every grade, or one for each grade but
    the lowest, which then receives the complement.
    """

    grade_set: GradeSet
    curves: tuple[Curve, ...]
    holder_alpha: Optional[float] = None
    holder_C: Optional[float] = None
    delta: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(self.curves))
        size = len(self.grade_set)
        if len(self.curves) not in (size - 1, size):
            raise InvalidDistribution(
                f"{size} grades need {size - 1} or {size} curves, got {len(self.curves)}"
            )
        if (self.holder_alpha is None) != (self.holder_C is None):
            raise InvalidDistribution("holder_alpha and holder_C must be given together")
        if self.holder_alpha is not None and not (
            0.0 < self.holder_alpha <= 1.0 and self.holder_C > 0.0
        ):
            raise InvalidDistribution("Hölder constants need alpha in (0, 1] and C > 0")
        if self.delta is not None and not 0.0 < self.delta <= 1.0:
            raise InvalidDistribution(f"delta must lie in (0, 1], got {self.delta}")
        self._validate()

    @property
    def completes_last_grade(self) -> bool:
        return len(self.curves) == len(self.grade_set) - 1

    def _raw(self, s: np.ndarray) -> np.ndarray:
        columns = [np.broadcast_to(curve(s), s.shape) for curve in self.curves]
        if self.completes_last_grade:
            columns.append(1.0 - np.sum(columns, axis=0))
        return np.stack(columns, axis=-1)

    def _validate(self):
        grid = np.linspace(0.0, 1.0, CHECK_GRID_SIZE)
        raw = self._raw(grid)
        if np.any(raw < -SUM_TOLERANCE) or np.any(raw > 1.0 + SUM_TOLERANCE):
            worst = int(np.argmax(np.max(np.abs(raw - np.clip(raw, 0.0, 1.0)), axis=1)))
            raise InvalidDistribution(
                f"grade probabilities leave [0, 1] at s={grid[worst]:.4f}: {raw[worst].tolist()}"
            )
        gap = np.max(np.abs(raw.sum(axis=1) - 1.0))
        if gap > SUM_TOLERANCE:
            raise InvalidDistribution(f"grade probabilities sum to 1 only within {gap:.3g}")
        if self.holder_alpha is not None:
            self._check_holder()
        if self.delta is not None:
            ratio = raw / np.max(raw, axis=1, keepdims=True)
            if np.any(ratio < self.delta - SUM_TOLERANCE):
                raise InvalidDistribution(
                    f"some grade falls below delta={self.delta:g} times the most likely grade"
                )
        if not self.continuous:
            logger.warning("Conditional grade curves are discontinuous.")

    def _check_holder(self):
        rng = np.random.default_rng(0)
        left = rng.random(HOLDER_PAIRS)
        right = rng.random(HOLDER_PAIRS)
        diff = np.abs(self._raw(left) - self._raw(right))
        bound = self.holder_C * np.abs(left - right)[:, None] ** self.holder_alpha
        if np.any(diff > bound + SUM_TOLERANCE):
            raise InvalidDistribution(
                f"curves violate the Hölder bound C={self.holder_C:g}, alpha={self.holder_alpha:g}"
            )

    def probabilities(self, s):
        return np.clip(self._raw(np.asarray(s, dtype=np.float64)), 0.0, 1.0)

    @property
    def breakpoints(self):
        return tuple(sorted({b for curve in self.curves for b in curve.breakpoints}))

    @property
    def continuous(self):
        return all(curve.continuous for curve in self.curves)


@dataclass(frozen=True, eq=False)
class CalibratedGrades(ConditionalGrades):
    """Grade curves tabulated from a sample, one per grade."""

    grade_set: GradeSet
    curves: tuple[Curve, ...]
    source: str = ""

    def probabilities(self, s):
        s = np.asarray(s, dtype=np.float64)
        return np.stack([np.broadcast_to(curve(s), s.shape) for curve in self.curves], axis=-1)

    @property
    def breakpoints(self):
        return tuple(sorted({b for curve in self.curves for b in curve.breakpoints}))

    @property
    def continuous(self):
        return all(curve.continuous for curve in self.curves)
