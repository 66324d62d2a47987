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

"""Curves on the canonical scale ``[0, 1]``.

A curve maps a canonical score ``s`` to a probability. Curves accept scalars
or arrays and expose the points where they are not smooth so that quadrature
can split there.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial

from .exceptions import InvalidDistribution


class Curve(ABC):
    kind: str = ""

    def __call__(self, s):
        values = self._evaluate(np.asarray(s, dtype=np.float64))
        if np.ndim(s) == 0:
            return float(values)
        return values

    @abstractmethod
    def _evaluate(self, s: np.ndarray) -> np.ndarray:
        pass

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return ()

    @property
    def continuous(self) -> bool:
        return True


@dataclass(frozen=True)
class AffineCurve(Curve):
    """``intercept + slope * s``"""

    intercept: float
    slope: float
    kind = "affine"

    def _evaluate(self, s):
        return self.intercept + self.slope * s


@dataclass(frozen=True)
class PolynomialCurve(Curve):
    """Polynomial with coefficients in increasing degree."""

    coefficients: tuple[float, ...]
    kind = "polynomial"

    def __post_init__(self):
        if not self.coefficients:
            raise InvalidDistribution("a polynomial curve needs at least one coefficient")
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))

    def _evaluate(self, s):
        return polynomial.polyval(s, self.coefficients)


def _check_knots(knots: tuple[float, ...]):
    if not knots:
        raise InvalidDistribution("at least one knot is needed")
    if any(k < 0.0 or k > 1.0 for k in knots):
        raise InvalidDistribution(f"knots must lie in [0, 1], got {knots}")
    if any(b <= a for a, b in zip(knots, knots[1:])):
        raise InvalidDistribution(f"knots must be strictly increasing, got {knots}")


@dataclass(frozen=True)
class PiecewiseLinearCurve(Curve):
    """Linear interpolation between knots, flat beyond the outer knots."""

    knots: tuple[float, ...]
    values: tuple[float, ...]
    kind = "piecewise_linear"

    def __post_init__(self):
        knots = tuple(float(k) for k in self.knots)
        values = tuple(float(v) for v in self.values)
        _check_knots(knots)
        if len(values) != len(knots):
            raise InvalidDistribution(f"{len(knots)} knots but {len(values)} values")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "values", values)

    def _evaluate(self, s):
        return np.interp(s, self.knots, self.values)

    @property
    def breakpoints(self):
        return tuple(k for k in self.knots if 0.0 < k < 1.0)


@dataclass(frozen=True)
class StepCurve(Curve):
    """Piecewise constant: ``values[i]`` on ``(knots[i-1], knots[i]]``."""

    knots: tuple[float, ...]
    values: tuple[float, ...]
    kind = "step"

    def __post_init__(self):
        knots = tuple(float(k) for k in self.knots)
        values = tuple(float(v) for v in self.values)
        _check_knots(knots)
        if len(values) != len(knots) + 1:
            raise InvalidDistribution(f"{len(knots)} knots need {len(knots) + 1} values")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "values", values)

    def _evaluate(self, s):
        return np.asarray(self.values)[np.searchsorted(self.knots, s, side="left")]

    @property
    def breakpoints(self):
        return tuple(k for k in self.knots if 0.0 < k < 1.0)

    @property
    def continuous(self):
        return len(set(self.values)) == 1


def constant(value: float) -> AffineCurve:
    return AffineCurve(intercept=value, slope=0.0)


def top_fraction_indicator(p: float) -> StepCurve:
    """``1`` on the top ``p`` of the canonical scale, ``0`` elsewhere."""
    if not 0.0 < p < 1.0:
        raise InvalidDistribution(f"top fraction must lie in (0, 1), got {p}")
    return StepCurve(knots=(1.0 - p,), values=(0.0, 1.0))
