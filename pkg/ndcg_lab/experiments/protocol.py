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

"""The prefix protocol.

A trial draws one stream of instances; the dataset of size ``n`` is its first
``n`` items, so all sizes of a trial share one sample path and every scorer
ranks the same labelled items.
"""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ndcg_lab.datagen.distribution import ConditionalGrades
from ndcg_lab.datagen.scorers import Scorer
from ndcg_lab.datagen.stream import SampleStream
from ndcg_lab.measures.metrics import NdcgMeasure, dcg_of_gains, ideal_gains, rank_order

from .exceptions import InvalidExperiment


@dataclass(frozen=True, eq=False)
class World:
    """Conditional grades plus the scorers under comparison."""

    grades: ConditionalGrades
    scorers: tuple[Scorer, ...]

    def __post_init__(self):
        object.__setattr__(self, "scorers", tuple(self.scorers))
        if not self.scorers:
            raise InvalidExperiment("at least one scorer is needed")

    @property
    def scorer_names(self) -> list[str]:
        return [scorer.name for scorer in self.scorers]


def check_grid(n_grid: Sequence[int]) -> list[int]:
    sizes = [int(n) for n in n_grid]
    if not sizes:
        raise InvalidExperiment("the size grid is empty")
    if sizes[0] < 1 or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise InvalidExperiment(f"the size grid must be strictly ascending and positive: {sizes}")
    return sizes


def prefix_ndcg(
    scores: np.ndarray, gains: np.ndarray, measure: NdcgMeasure, n_grid: Sequence[int]
) -> np.ndarray:
    """NDCG of every prefix ``scores[:n]``; ``nan`` where all gains vanish.

    The items are ranked once. Restricting that ranking to the items of a
    prefix gives the prefix's own ranking, since tie-break keys belong to the
    items.
    """
    size = len(scores)
    order = rank_order(scores, gains, np.arange(size), measure.tie_break)
    values = np.full(len(n_grid), np.nan)
    for i, n in enumerate(n_grid):
        ideal = dcg_of_gains(ideal_gains(gains[:n]), measure.discount, n)
        if ideal <= 0.0:
            continue
        ranked = gains[order[order < n]]
        values[i] = min(dcg_of_gains(ranked, measure.discount, n) / ideal, 1.0)
    return values


def trial_ndcg(
    world: World, measure: NdcgMeasure, n_grid: Sequence[int], master_seed: int, trial: int
) -> np.ndarray:
    """Array of shape ``(scorers, grid)`` for one trial."""
    stream = SampleStream(world.grades, world.scorers, master_seed, trial=trial)
    sample = stream.take(n_grid[-1])
    gains = world.grades.grade_set.gains[sample.grade_index]
    return np.stack([prefix_ndcg(scores, gains, measure, n_grid) for scores in sample.scores])
