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

"""DCG, IDCG and NDCG on concrete datasets."""

import logging
import math
from collections import Counter
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Optional

import numpy as np

from .discount import Discount
from .exceptions import (
    DegenerateDataset,
    InvalidDataset,
    InvalidGradeSet,
    OracleSizeExceeded,
)

logger = logging.getLogger(__name__)

BRUTE_FORCE_LIMIT = 10


class Gain(str, Enum):
    IDENTITY = "identity"
    EXPONENTIAL2 = "exp2"


@dataclass(frozen=True)
class GradeSet:
    """Relevance grades, best first, and the gain applied to them."""

    grades: tuple[float, ...]
    gain: Gain = Gain.IDENTITY

    def __post_init__(self):
        grades = tuple(float(g) for g in self.grades)
        if len(grades) < 2:
            raise InvalidGradeSet(f"at least two grades are needed, got {len(grades)}")
        if any(not math.isfinite(g) for g in grades):
            raise InvalidGradeSet("grades must be finite")
        if any(b >= a for a, b in zip(grades, grades[1:])):
            raise InvalidGradeSet(f"grades must be strictly decreasing, got {grades}")
        object.__setattr__(self, "grades", grades)
        object.__setattr__(self, "gain", Gain(self.gain))

    def __len__(self):
        return len(self.grades)

    @property
    def gains(self) -> np.ndarray:
        """Gain of every grade, in grade order."""
        values = np.asarray(self.grades, dtype=np.float64)
        if self.gain == Gain.EXPONENTIAL2:
            return np.exp2(values) - 1.0
        return values

    @property
    def is_binary(self) -> bool:
        """Two grades with a zero-gain bottom grade."""
        return len(self.grades) == 2 and self.gains[-1] == 0.0

    def index_of(self, grades) -> np.ndarray:
        """Position of each grade value in ``grades`` (0 is the best grade)."""
        values = np.asarray(grades, dtype=np.float64)
        ascending = np.asarray(self.grades[::-1], dtype=np.float64)
        pos = np.searchsorted(ascending, values)
        pos_clipped = np.minimum(pos, len(ascending) - 1)
        if values.size and not np.array_equal(ascending[pos_clipped], values):
            unknown = sorted(set(values.tolist()) - set(self.grades))
            raise InvalidDataset(f"grades {unknown} are not members of {self.grades}")
        return (len(ascending) - 1 - pos_clipped).astype(np.intp)

    def gain_of(self, grades) -> np.ndarray:
        return self.gains[self.index_of(grades)]


class TieBreak(str, Enum):
    BY_INDEX = "by_index"
    PESSIMISTIC = "pessimistic"
    OPTIMISTIC = "optimistic"


@dataclass(frozen=True, eq=False)
class Dataset:
    """Scored items with their relevance grades."""

    scores: np.ndarray
    grades: np.ndarray
    grade_set: GradeSet
    index: Optional[np.ndarray] = None

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=np.float64)
        grades = np.asarray(self.grades, dtype=np.float64)
        if scores.ndim != 1 or scores.size == 0:
            raise InvalidDataset("a dataset needs a nonempty one-dimensional score vector")
        if grades.shape != scores.shape:
            raise InvalidDataset(f"{scores.size} scores but {grades.size} grades")
        if not np.all(np.isfinite(scores)):
            raise InvalidDataset("scores must be finite")
        index = (
            np.arange(scores.size) if self.index is None else np.asarray(self.index, dtype=np.intp)
        )
        if index.shape != scores.shape:
            raise InvalidDataset("index must align with scores")
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "grades", grades)
        object.__setattr__(self, "index", index)
        # Fails early on foreign grades.
        self.grade_set.index_of(grades)

    def __len__(self):
        return int(self.scores.size)

    @cached_property
    def gains(self) -> np.ndarray:
        return self.grade_set.gain_of(self.grades)

    def prefix(self, n: int) -> "Dataset":
        if not 1 <= n <= len(self):
            raise InvalidDataset(f"prefix size {n} outside of [1, {len(self)}]")
        return Dataset(self.scores[:n], self.grades[:n], self.grade_set, self.index[:n])


@dataclass(frozen=True, eq=False)
class RankedList:
    permutation: np.ndarray
    tie_break: TieBreak = TieBreak.BY_INDEX


def rank_order(scores: np.ndarray, gains: np.ndarray, index: np.ndarray, tie_break: TieBreak):
    """Positions sorted by descending score, ties resolved by ``tie_break``."""
    if tie_break == TieBreak.PESSIMISTIC:
        return np.lexsort((index, gains, -scores))
    if tie_break == TieBreak.OPTIMISTIC:
        return np.lexsort((index, -gains, -scores))
    return np.lexsort((index, -scores))


def rank(data: Dataset, tie_break: TieBreak = TieBreak.BY_INDEX) -> RankedList:
    tie_break = TieBreak(tie_break)
    return RankedList(rank_order(data.scores, data.gains, data.index, tie_break), tie_break)


def dcg_of_gains(gains: np.ndarray, discount: Discount, n: Optional[int] = None) -> float:
    """``Σ_r gains[r] D(r)`` with the discount resolved at size ``n``.

    The sum is correctly rounded, so it does not depend on the order in which
    equal terms are produced.
    """
    size = len(gains)
    if size == 0:
        raise InvalidDataset("DCG of an empty ranking")
    w = discount.weights(n or size)[:size]
    return math.fsum((np.asarray(gains, dtype=np.float64) * w).tolist())


def ideal_gains(gains: np.ndarray) -> np.ndarray:
    return np.sort(np.asarray(gains, dtype=np.float64))[::-1]


def dcg(ranked_grades: Sequence[float], discount: Discount, grade_set: GradeSet) -> float:
    return dcg_of_gains(grade_set.gain_of(ranked_grades), discount)


def idcg(grades: Sequence[float], discount: Discount, grade_set: GradeSet) -> float:
    return dcg_of_gains(ideal_gains(grade_set.gain_of(grades)), discount)


def ndcg_of_gains(
    scores: np.ndarray,
    gains: np.ndarray,
    discount: Discount,
    tie_break: TieBreak = TieBreak.BY_INDEX,
    index: Optional[np.ndarray] = None,
) -> float:
    size = len(gains)
    index = np.arange(size) if index is None else index
    ideal = dcg_of_gains(ideal_gains(gains), discount)
    if ideal <= 0.0:
        raise DegenerateDataset("all gains are zero, the ideal DCG vanishes", size=size)
    order = rank_order(scores, gains, index, tie_break)
    return min(dcg_of_gains(gains[order], discount) / ideal, 1.0)


def ndcg(
    data: Dataset, discount: Discount, tie_break: TieBreak = TieBreak.BY_INDEX
) -> float:
    """Normalized DCG of the ranking induced by the scores of ``data``."""
    return ndcg_of_gains(data.scores, data.gains, discount, TieBreak(tie_break), data.index)


def _distinct_permutations(items: Sequence[float]) -> Iterator[tuple[float, ...]]:
    counts = Counter(items)
    size = len(items)
    current: list[float] = []

    def walk():
        if len(current) == size:
            yield tuple(current)
            return
        for value in sorted(counts):
            if counts[value] == 0:
                continue
            counts[value] -= 1
            current.append(value)
            yield from walk()
            current.pop()
            counts[value] += 1

    yield from walk()


def brute_force_idcg(
    grades: Sequence[float],
    discount: Discount,
    grade_set: GradeSet,
    limit: int = BRUTE_FORCE_LIMIT,
) -> float:
    """Maximum DCG over every ordering of ``grades``.

    Orderings that only swap equal grades give identical DCG values, so each
    distinct arrangement is scored once.
    """
    if len(grades) > limit:
        raise OracleSizeExceeded(
            f"exhaustive IDCG is limited to {limit} items", size=len(grades), limit=limit
        )
    gains = grade_set.gain_of(grades).tolist()
    return max(
        dcg_of_gains(np.asarray(arrangement), discount)
        for arrangement in _distinct_permutations(gains)
    )


@dataclass(frozen=True)
class NdcgMeasure:
    discount: Discount
    tie_break: TieBreak = field(default=TieBreak.BY_INDEX)

    @property
    def label(self) -> str:
        return f"ndcg[{self.discount.label}]"

    def __call__(self, data: Dataset) -> float:
        return ndcg(data, self.discount, self.tie_break)
