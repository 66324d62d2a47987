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

"""Consistent distinguishability of two scorers.

For every trial the sign of ``NDCG(f0) - NDCG(f1)`` is recorded at every grid
size. A trial flips at ``N`` when both signs occur among the sizes ``n >= N``;
exact ties carry no sign and are counted on their own.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from functools import partial
from typing import Optional

import numpy as np

from ndcg_lab.measures.metrics import NdcgMeasure

from .exceptions import InvalidExperiment
from .protocol import World, check_grid, trial_ndcg
from .runner import SerialTrialRunner, TrialRunner

logger = logging.getLogger(__name__)

MIN_DISTINGUISH_TRIALS = 100
GRID_POINTS_PER_DECADE = 12
WINNER_MAJORITY = 0.55
VIOLATION_SE = 3.0


def geometric_grid(start: int, stop: int, per_decade: int = GRID_POINTS_PER_DECADE) -> list[int]:
    """Distinct integers spaced evenly in ``log10`` from ``start`` to ``stop``."""
    if not 1 <= start <= stop:
        raise InvalidExperiment(f"grid bounds need 1 <= start <= stop, got {start}, {stop}")
    if per_decade < 1:
        raise InvalidExperiment(f"grid density must be positive, got {per_decade}")
    steps = math.ceil(round(per_decade * math.log10(stop / start), 9))
    points = np.rint(start * np.power(10.0, np.arange(steps + 1) / per_decade)).astype(np.int64)
    return sorted({int(n) for n in np.minimum(points, stop)} | {int(start), int(stop)})


def isotonic_nonincreasing(values: Sequence[float]) -> np.ndarray:
    """Least-squares nonincreasing fit by pool-adjacent-violators."""
    blocks: list[list[float]] = []
    for value in values:
        blocks.append([float(value), 1.0])
        while len(blocks) > 1 and blocks[-2][0] < blocks[-1][0]:
            mean, weight = blocks.pop()
            previous = blocks[-1]
            total = previous[1] + weight
            previous[0] = (previous[0] * previous[1] + mean * weight) / total
            previous[1] = total
    return np.concatenate([np.full(int(weight), mean) for mean, weight in blocks])


def decay_slope(grid: Sequence[int], rates: Sequence[float]) -> Optional[float]:
    """Slope of ``log(rate)`` against ``log(N)`` over the positive rates."""
    points = [(math.log(n), math.log(r)) for n, r in zip(grid, rates) if r > 0.0]
    if len(points) < 2:
        return None
    x, y = np.asarray(points).T
    if np.ptp(x) == 0.0:
        return None
    return float(np.polyfit(x, y, 1)[0])


def _winner(signs: np.ndarray) -> Optional[int]:
    trials = signs.size
    if np.count_nonzero(signs > 0) >= WINNER_MAJORITY * trials:
        return 0
    if np.count_nonzero(signs < 0) >= WINNER_MAJORITY * trials:
        return 1
    return None


@dataclass(frozen=True)
class DistinguishRow:
    N: int
    flip_rate: float
    ties: int
    winner: Optional[int]
    mean_difference: Optional[float]
    se_difference: Optional[float]
    smoothed_flip_rate: float
    violation: bool


@dataclass(frozen=True)
class DistinguishReport:
    scorers: tuple[str, str]
    trials: int
    rows: tuple[DistinguishRow, ...]
    decay_slope: Optional[float]

    @property
    def grid(self) -> list[int]:
        return [row.N for row in self.rows]

    @property
    def winner(self) -> Optional[int]:
        """Majority sign at the largest size; ``None`` when undecided."""
        return self.rows[-1].winner

    @property
    def violations(self) -> int:
        return sum(row.violation for row in self.rows)


def distinguish(
    world: World,
    measure: NdcgMeasure,
    n_grid: Sequence[int],
    trials: int,
    master_seed: int,
    runner: TrialRunner = SerialTrialRunner(),
) -> DistinguishReport:
    """Flip rates of the paired comparison of the two scorers of ``world``."""
    sizes = check_grid(n_grid)
    if len(world.scorers) != 2:
        raise InvalidExperiment(f"distinguish compares two scorers, got {len(world.scorers)}")
    if trials < MIN_DISTINGUISH_TRIALS:
        raise InvalidExperiment(
            f"distinguish needs at least {MIN_DISTINGUISH_TRIALS} trials, got {trials}"
        )
    values = np.stack(
        runner.map(partial(trial_ndcg, world, measure, sizes, master_seed), trials)
    )
    difference = values[:, 0, :] - values[:, 1, :]
    # Degenerate prefixes rank nothing and count as ties.
    signs = np.nan_to_num(np.sign(difference), nan=0.0)

    # Signs seen over n >= N, accumulated from the largest size down.
    later_positive = np.flip(np.logical_or.accumulate(np.flip(signs > 0, axis=1), axis=1), axis=1)
    later_negative = np.flip(np.logical_or.accumulate(np.flip(signs < 0, axis=1), axis=1), axis=1)
    flip_rates = np.mean(later_positive & later_negative, axis=0)
    all_tied = ~(later_positive | later_negative)
    smoothed = isotonic_nonincreasing(flip_rates)

    rows = []
    for i, n in enumerate(sizes):
        kept = difference[:, i][~np.isnan(difference[:, i])]
        mean = float(np.mean(kept)) if kept.size else None
        se = float(np.std(kept, ddof=1) / math.sqrt(kept.size)) if kept.size > 1 else None
        se_rate = math.sqrt(smoothed[i] * (1.0 - smoothed[i]) / trials)
        rows.append(
            DistinguishRow(
                N=n,
                flip_rate=float(flip_rates[i]),
                ties=int(np.count_nonzero(all_tied[:, i])),
                winner=_winner(signs[:, i]),
                mean_difference=mean,
                se_difference=se,
                smoothed_flip_rate=float(smoothed[i]),
                violation=bool(flip_rates[i] - smoothed[i] > VIOLATION_SE * se_rate + 1e-12),
            )
        )
    report = DistinguishReport(
        scorers=tuple(world.scorer_names),
        trials=trials,
        rows=tuple(rows),
        decay_slope=decay_slope(sizes, flip_rates),
    )
    if report.violations:
        logger.warning(
            f"{report.violations} flip rates exceed their nonincreasing fit by "
            f"more than {VIOLATION_SE:g} standard errors."
        )
    return report
