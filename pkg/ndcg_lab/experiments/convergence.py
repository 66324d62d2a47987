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

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from functools import partial
from typing import Optional

import numpy as np

from ndcg_lab.limits.asymptotic import LimitResult
from ndcg_lab.measures.metrics import NdcgMeasure

from .exceptions import InvalidExperiment
from .protocol import World, check_grid, trial_ndcg
from .runner import SerialTrialRunner, TrialRunner

logger = logging.getLogger(__name__)

MIN_CURVE_TRIALS = 30
Z_95 = 1.96
# Standard errors a residual may grow by and still count as settling.
SETTLING_SE = 3.0


@dataclass(frozen=True)
class CurvePoint:
    n: int
    scorer: str
    mean: Optional[float]
    sd: Optional[float]
    ci: Optional[float]
    trials: int
    skipped: int


def summarize(n: int, scorer: str, values: np.ndarray) -> CurvePoint:
    kept = values[~np.isnan(values)]
    skipped = int(values.size - kept.size)
    if kept.size == 0:
        return CurvePoint(n, scorer, None, None, None, 0, skipped)
    sd = float(np.std(kept, ddof=1)) if kept.size > 1 else 0.0
    return CurvePoint(
        n=n,
        scorer=scorer,
        mean=float(np.mean(kept)),
        sd=sd,
        ci=Z_95 * sd / math.sqrt(kept.size),
        trials=int(kept.size),
        skipped=skipped,
    )


def convergence_curve(
    world: World,
    measure: NdcgMeasure,
    n_grid: Sequence[int],
    trials: int,
    master_seed: int,
    runner: TrialRunner = SerialTrialRunner(),
) -> list[CurvePoint]:
    """Mean NDCG of every scorer along the size grid, one fresh stream per trial."""
    sizes = check_grid(n_grid)
    if trials < MIN_CURVE_TRIALS:
        raise InvalidExperiment(f"a curve needs at least {MIN_CURVE_TRIALS} trials, got {trials}")
    per_trial = runner.map(partial(trial_ndcg, world, measure, sizes, master_seed), trials)
    # (trials, scorers, grid)
    values = np.stack(per_trial)
    points = []
    for slot, name in enumerate(world.scorer_names):
        for i, n in enumerate(sizes):
            point = summarize(n, name, values[:, slot, i])
            if point.skipped:
                logger.warning(
                    f"Skipped {point.skipped} degenerate prefixes of size {n} for {name}."
                )
            points.append(point)
    return points


@dataclass(frozen=True)
class SdTrend:
    scorer: str
    smallest_n_sd: Optional[float]
    largest_n_sd: Optional[float]

    @property
    def shrinking(self) -> bool:
        if self.smallest_n_sd is None or self.largest_n_sd is None:
            return False
        return self.largest_n_sd < self.smallest_n_sd


def sd_trends(points: Sequence[CurvePoint]) -> list[SdTrend]:
    """Cross-trial spread at the smallest and largest size, per scorer."""
    trends = []
    for name in dict.fromkeys(point.scorer for point in points):
        mine = [point for point in points if point.scorer == name]
        trends.append(SdTrend(name, mine[0].sd, mine[-1].sd))
    return trends


@dataclass(frozen=True)
class LimitGapPoint:
    n: int
    scorer: str
    mean: float
    limit: float
    residual: float


@dataclass(frozen=True)
class LimitGap:
    points: tuple[LimitGapPoint, ...]
    # Residuals do not grow beyond Monte Carlo noise over the last three sizes.
    settling: dict[str, bool]


def _se(point: CurvePoint) -> float:
    return point.sd / math.sqrt(point.trials) if point.sd and point.trials else 0.0


def limit_gap(points: Sequence[CurvePoint], limit: LimitResult) -> LimitGap:
    if limit.value is None:
        raise InvalidExperiment(f"no limit to compare with ({limit.rule})")
    gaps = tuple(
        LimitGapPoint(p.n, p.scorer, p.mean, limit.value, abs(p.mean - limit.value))
        for p in points
        if p.mean is not None
    )
    settling = {}
    for name in dict.fromkeys(gap.scorer for gap in gaps):
        tail = [p for p in points if p.scorer == name and p.mean is not None][-3:]
        settling[name] = all(
            abs(b.mean - limit.value)
            <= abs(a.mean - limit.value) + SETTLING_SE * math.hypot(_se(a), _se(b))
            for a, b in zip(tail, tail[1:])
        )
    return LimitGap(gaps, settling)
