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

"""Discount functions ``D(r)`` of the NDCG family.

A discount is a positive, nonincreasing weight on rank positions. It may be
truncated by a cutoff rule, in which case ``D(r) = 0`` beyond ``k(n)``. Besides
pointwise evaluation every discount knows its partial sums, the antiderivative
``F(t)`` of its continuous extension, and whether NDCG under it converges at all.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import ClassVar, Optional

import numpy as np

from .exceptions import InvalidDiscount
from .quadrature import DEFAULT_TOLERANCE, integrate

logger = logging.getLogger(__name__)

# Half-width of the band around the r^-1 envelope inside which a tabulated
# tail is called borderline.
CUSTOM_TAIL_EPSILON = 0.1
CUSTOM_TAIL_PROBES = (1e8, 1e9)
# Terms summed directly before the Euler-Maclaurin remainder of a power tail.
POWER_TAIL_TERMS = 1024


class CutoffKind(str, Enum):
    FIXED_K = "fixed_k"
    LINEAR_FRACTION = "linear_fraction"
    SUBLINEAR_POWER = "sublinear_power"


@dataclass(frozen=True)
class CutoffRule:
    """Truncation ``D(r) = 0`` for ``r > k(n)``."""

    kind: CutoffKind
    k: Optional[int] = None
    c: Optional[float] = None
    gamma: Optional[float] = None

    def __post_init__(self):
        if self.kind == CutoffKind.FIXED_K:
            if self.k is None or int(self.k) != self.k or self.k < 1:
                raise InvalidDiscount(f"fixed_k cutoff needs a positive integer k, got {self.k}")
        elif self.kind == CutoffKind.LINEAR_FRACTION:
            if self.c is None or not 0.0 < self.c < 1.0:
                raise InvalidDiscount(f"linear_fraction cutoff needs c in (0, 1), got {self.c}")
        elif self.kind == CutoffKind.SUBLINEAR_POWER:
            if self.gamma is None or not 0.0 < self.gamma < 1.0:
                raise InvalidDiscount(
                    f"sublinear_power cutoff needs gamma in (0, 1), got {self.gamma}"
                )

    @classmethod
    def fixed_k(cls, k: int) -> "CutoffRule":
        return cls(CutoffKind.FIXED_K, k=k)

    @classmethod
    def linear_fraction(cls, c: float) -> "CutoffRule":
        return cls(CutoffKind.LINEAR_FRACTION, c=c)

    @classmethod
    def sublinear_power(cls, gamma: float) -> "CutoffRule":
        return cls(CutoffKind.SUBLINEAR_POWER, gamma=gamma)

    @property
    def depends_on_n(self) -> bool:
        return self.kind != CutoffKind.FIXED_K

    def resolve(self, n: int) -> int:
        """Number of rank positions kept for a dataset of size ``n``."""
        if n < 1:
            raise InvalidDiscount(f"dataset size must be positive, got {n}")
        if self.kind == CutoffKind.FIXED_K:
            return min(int(self.k), n)
        if self.kind == CutoffKind.LINEAR_FRACTION:
            raw = self.c * n
        else:
            raw = float(n) ** self.gamma
        # round() absorbs products such as 0.2 * 100 = 20.000000000000004
        return min(max(math.ceil(round(raw, 9)), 1), n)

    @property
    def label(self) -> str:
        if self.kind == CutoffKind.FIXED_K:
            return f"@{self.k}"
        if self.kind == CutoffKind.LINEAR_FRACTION:
            return f"@{self.c:g}n"
        return f"@n^{self.gamma:g}"


class FeasibilityClass(str, Enum):
    FEASIBLE = "Feasible"
    BORDERLINE = "Borderline"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class Classification:
    value: FeasibilityClass
    reason: str
    heuristic: bool = False
    warning: bool = False


@dataclass(frozen=True, kw_only=True)
class Discount(ABC):
    family: ClassVar[str]

    cutoff: Optional[CutoffRule] = None
    scale: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.scale) and self.scale > 0.0):
            raise InvalidDiscount(f"scale must be positive and finite, got {self.scale}")

    # -- family specific -------------------------------------------------

    @abstractmethod
    def _base(self, r: np.ndarray) -> np.ndarray:
        """Unscaled continuous discount on ``r >= 1``."""

    @abstractmethod
    def _antiderivative(self, t: float) -> float:
        """Unscaled ``∫₁ᵗ D(s) ds`` for ``t > 1``."""

    @abstractmethod
    def _family_class(self) -> Classification:
        pass

    @property
    @abstractmethod
    def _family_label(self) -> str:
        pass

    # -- public ----------------------------------------------------------

    @property
    def label(self) -> str:
        suffix = self.cutoff.label if self.cutoff else ""
        scale = "" if self.scale == 1.0 else f"{self.scale:g}*"
        return f"{scale}{self._family_label}{suffix}"

    def eval(self, r: int, n: Optional[int] = None) -> float:
        if r < 1 or int(r) != r:
            raise InvalidDiscount(f"rank must be a positive integer, got {r}")
        if self.cutoff is not None:
            if n is None:
                if self.cutoff.depends_on_n:
                    raise InvalidDiscount(f"{self.label} needs the dataset size to resolve")
                n = int(r)
            if r > self.cutoff.resolve(max(int(n), 1)):
                return 0.0
        return float(self.scale * self._base(np.array([float(r)]))[0])

    def weights(self, n: int) -> np.ndarray:
        """``D(1), ..., D(n)`` for a dataset of ``n`` items."""
        if n < 1:
            raise InvalidDiscount(f"dataset size must be positive, got {n}")
        w = self.scale * self._base(np.arange(1, n + 1, dtype=np.float64))
        if self.cutoff is not None:
            w[self.cutoff.resolve(n) :] = 0.0
        return w

    def density(self, s: float) -> float:
        """Continuous extension of the untruncated discount at real ``s >= 1``."""
        return float(self.scale * self._base(np.array([s], dtype=np.float64))[0])

    def partial_sum(self, k: int) -> float:
        if k < 1 or int(k) != k:
            raise InvalidDiscount(f"k must be a positive integer, got {k}")
        if self.cutoff is not None:
            if self.cutoff.depends_on_n or k > self.cutoff.k:
                raise InvalidDiscount(f"partial sum of {self.label} is cut off below k={k}")
        return math.fsum(self.scale * self._base(np.arange(1, int(k) + 1, dtype=np.float64)))

    def antiderivative(self, t: float) -> float:
        """``F(t) = ∫₁ᵗ D(s) ds``."""
        self._check_antiderivative_domain(t)
        if t == 1.0:
            return 0.0
        return self.scale * self._antiderivative(float(t))

    def antiderivative_by_quadrature(self, t: float, tol: float = DEFAULT_TOLERANCE) -> float:
        self._check_antiderivative_domain(t)
        if t == 1.0:
            return 0.0
        # s = e^v flattens the long range [1, t].
        result = integrate(
            lambda v: self.density(math.exp(v)) * math.exp(v),
            0.0,
            math.log(t),
            tol=tol,
            breakpoints=self._log_breakpoints(t),
        )
        return result.value

    def classify(self) -> Classification:
        if self.cutoff is not None and self.cutoff.kind == CutoffKind.FIXED_K:
            return Classification(
                FeasibilityClass.INFEASIBLE,
                f"a constant cutoff k={self.cutoff.k} makes the discount summable",
            )
        return self._family_class()

    @property
    def is_summable(self) -> bool:
        return self.classify().value == FeasibilityClass.INFEASIBLE

    def tail_mass(self, m: int) -> float:
        """``Σ_{r>m} D(r)`` for summable discounts."""
        if self.cutoff is not None and self.cutoff.kind == CutoffKind.FIXED_K:
            if m >= self.cutoff.k:
                return 0.0
            ranks = np.arange(m + 1, self.cutoff.k + 1, dtype=np.float64)
            return math.fsum(self.scale * self._base(ranks))
        return self.scale * self._tail_mass(m)

    def _tail_mass(self, m: int) -> float:
        raise InvalidDiscount(f"{self.label} has no finite tail mass")

    def _check_antiderivative_domain(self, t: float):
        if t < 1.0:
            raise InvalidDiscount(f"antiderivative needs t >= 1, got {t}")
        if self.cutoff is not None:
            raise InvalidDiscount(f"antiderivative is undefined for the cut-off {self.label}")

    def _log_breakpoints(self, t: float) -> tuple[float, ...]:
        return ()


@dataclass(frozen=True, kw_only=True)
class LogInverseDiscount(Discount):
    """``D(r) = 1 / ln(1 + r)``, the standard NDCG discount."""

    family: ClassVar[str] = "log"

    def _base(self, r):
        return 1.0 / np.log1p(r)

    def _antiderivative(self, t):
        return li_offset(1.0 + t)

    def _family_class(self):
        return Classification(FeasibilityClass.FEASIBLE, "logarithmic discount")

    @property
    def _family_label(self):
        return "log"


@dataclass(frozen=True, kw_only=True)
class PowerDiscount(Discount):
    """``D(r) = r^(-beta)`` with ``beta`` in (0, 1)."""

    family: ClassVar[str] = "power"
    beta: float

    def __post_init__(self):
        super().__post_init__()
        if not 0.0 < self.beta < 1.0:
            raise InvalidDiscount(f"power discount needs beta in (0, 1), got {self.beta}")

    def _base(self, r):
        return r ** (-self.beta)

    def _antiderivative(self, t):
        return (t ** (1.0 - self.beta) - 1.0) / (1.0 - self.beta)

    def _family_class(self):
        return Classification(FeasibilityClass.FEASIBLE, f"polynomial decay r^-{self.beta:g}")

    @property
    def _family_label(self):
        return f"power({self.beta:g})"


@dataclass(frozen=True, kw_only=True)
class ZipfianDiscount(Discount):
    """``D(r) = 1 / r``."""

    family: ClassVar[str] = "zipfian"

    def _base(self, r):
        return 1.0 / r

    def _antiderivative(self, t):
        return math.log(t)

    def _family_class(self):
        return Classification(
            FeasibilityClass.BORDERLINE, "r^-1 separates summable from non-summable decay"
        )

    @property
    def _family_label(self):
        return "zipfian"


@dataclass(frozen=True, kw_only=True)
class ExponentialDiscount(Discount):
    """``D(r) = base^(-r)``; summable for every base above one."""

    family: ClassVar[str] = "exp"
    base: float = 2.0

    def __post_init__(self):
        super().__post_init__()
        if not (math.isfinite(self.base) and self.base > 1.0):
            raise InvalidDiscount(f"exponential discount needs base > 1, got {self.base}")

    def _base(self, r):
        return np.power(self.base, -r)

    def _antiderivative(self, t):
        return (self.base**-1.0 - self.base**-t) / math.log(self.base)

    def _family_class(self):
        return Classification(FeasibilityClass.INFEASIBLE, f"sum of {self.base:g}^-r is finite")

    def _tail_mass(self, m):
        return self.base ** (-m) / (self.base - 1.0)

    @property
    def _family_label(self):
        return f"exp({self.base:g})"


class TailRule(str, Enum):
    POWER = "power"
    GEOMETRIC = "geometric"
    POWER_LOG = "power_log"


@dataclass(frozen=True, kw_only=True)
class CustomDiscount(Discount):
    """Tabulated ``D(1..m)`` continued by a parametric tail.

    Between integers the table is interpolated linearly. Tails, with ``v_m`` the
    last tabulated value:

    - ``power``: ``v_m (r / m)^(-a)``, ``a = tail_param > 0``
    - ``geometric``: ``v_m q^(r - m)``, ``q = tail_param`` in (0, 1)
    - ``power_log``: ``v_m (m ln m) / (r ln r)``, needs ``m >= 2``
    """

    family: ClassVar[str] = "custom"
    values: tuple[float, ...]
    tail: TailRule = TailRule.POWER
    tail_param: Optional[float] = None
    _ranks: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        super().__post_init__()
        values = tuple(float(v) for v in self.values)
        if not values:
            raise InvalidDiscount("custom discount needs at least one tabulated value")
        if any(not (math.isfinite(v) and v > 0.0) for v in values):
            raise InvalidDiscount("custom discount values must be positive and finite")
        if any(b > a for a, b in zip(values, values[1:])):
            raise InvalidDiscount("custom discount values must be nonincreasing")
        tail = TailRule(self.tail)
        if tail == TailRule.POWER and not (self.tail_param and self.tail_param > 0.0):
            raise InvalidDiscount("power tail needs a positive exponent")
        if tail == TailRule.GEOMETRIC and not (
            self.tail_param is not None and 0.0 < self.tail_param < 1.0
        ):
            raise InvalidDiscount("geometric tail needs a ratio in (0, 1)")
        if tail == TailRule.POWER_LOG and len(values) < 2:
            raise InvalidDiscount("power_log tail needs at least two tabulated values")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "tail", tail)
        object.__setattr__(self, "_ranks", np.arange(1, len(values) + 1, dtype=np.float64))

    @property
    def _m(self) -> int:
        return len(self.values)

    def _log_tail(self, r: np.ndarray) -> np.ndarray:
        m = float(self._m)
        log_vm = math.log(self.values[-1])
        if self.tail == TailRule.POWER:
            return log_vm - self.tail_param * (np.log(r) - math.log(m))
        if self.tail == TailRule.GEOMETRIC:
            return log_vm + (r - m) * math.log(self.tail_param)
        return log_vm + math.log(m * math.log(m)) - np.log(r * np.log(r))

    def _base(self, r):
        r = np.asarray(r, dtype=np.float64)
        out = np.empty_like(r)
        inside = r <= self._m
        out[inside] = np.interp(r[inside], self._ranks, self.values)
        out[~inside] = np.exp(self._log_tail(r[~inside]))
        return out

    def _antiderivative(self, t):
        return self.antiderivative_by_quadrature(t) / self.scale

    def _log_breakpoints(self, t):
        return tuple(math.log(j) for j in range(2, min(self._m, int(t)) + 1))

    def _family_class(self):
        r1, r2 = CUSTOM_TAIL_PROBES
        probes = self._log_tail(np.array([r1, r2]))
        slope = -(probes[1] - probes[0]) / (math.log(r2) - math.log(r1))
        if slope > 1.0 + CUSTOM_TAIL_EPSILON:
            value, warning = FeasibilityClass.INFEASIBLE, False
        elif slope < 1.0 - CUSTOM_TAIL_EPSILON:
            value, warning = FeasibilityClass.FEASIBLE, False
        else:
            value, warning = FeasibilityClass.BORDERLINE, True
            logger.warning(
                f"Tail of custom discount decays like r^-{slope:.3f}, "
                "too close to r^-1 to classify."
            )
        return Classification(
            value,
            f"numeric tail test: log-log slope {slope:.3f} against the r^-1 envelope "
            f"(band {CUSTOM_TAIL_EPSILON:g})",
            heuristic=True,
            warning=warning,
        )

    def _tail_mass(self, m):
        start = max(m, self._m)
        head = math.fsum(self._base(np.arange(m + 1, start + 1, dtype=np.float64)))
        if self.tail == TailRule.GEOMETRIC:
            q = self.tail_param
            return head + self.values[-1] * q ** (start - self._m + 1) / (1.0 - q)
        if self.tail == TailRule.POWER and self.tail_param > 1.0:
            a = self.tail_param
            return head + self.values[-1] * self._m**a * power_tail_sum(a, start + 1)
        raise InvalidDiscount(f"{self.label} has no finite tail mass")

    @property
    def _family_label(self):
        return f"custom[{self._m}]+{self.tail.value}"


def power_tail_sum(a: float, n: int) -> float:
    """``Σ_{r>=n} r^(-a)`` for ``a > 1``."""
    if a <= 1.0 or n < 1:
        raise InvalidDiscount(f"power tail sum needs a > 1 and n >= 1, got a={a}, n={n}")
    ranks = np.arange(n, n + POWER_TAIL_TERMS, dtype=np.float64)
    big = float(n + POWER_TAIL_TERMS)
    remainder = (
        big ** (1.0 - a) / (a - 1.0)
        + 0.5 * big ** (-a)
        + a * big ** (-a - 1.0) / 12.0
        - a * (a + 1.0) * (a + 2.0) * big ** (-a - 3.0) / 720.0
    )
    return math.fsum((ranks ** (-a)).tolist()) + remainder


def li_offset(t: float, tol: float = DEFAULT_TOLERANCE) -> float:
    """Offset logarithmic integral ``∫₂ᵗ dτ / ln τ``."""
    if t < 2.0:
        raise InvalidDiscount(f"offset logarithmic integral needs t >= 2, got {t}")
    if t == 2.0:
        return 0.0
    # τ = e^u removes the slow growth of the range.
    return integrate(lambda u: math.exp(u) / u, math.log(2.0), math.log(t), tol=tol).value
