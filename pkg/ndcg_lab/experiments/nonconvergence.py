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

"""Non-convergence of NDCG under summable discounts.

With a summable discount the top few ranks carry a fixed share of the DCG no
matter how large the dataset gets, so their random labels keep NDCG spread out.
The experiment measures how often NDCG lands above ``theta_high`` and below
``theta_low``; the top-rank oracle bounds the same probabilities from the
labels of the first ranks alone.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from functools import partial
from typing import Optional

import numpy as np

from ndcg_lab.limits.exceptions import AssumptionViolated
from ndcg_lab.measures.discount import CutoffKind, Discount
from ndcg_lab.measures.metrics import NdcgMeasure

from .exceptions import InvalidExperiment
from .protocol import World, check_grid, trial_ndcg
from .runner import SerialTrialRunner, TrialRunner

logger = logging.getLogger(__name__)

ORACLE_DEPTH = 14
NON_CONVERGENT = "NonConvergent"
INCONCLUSIVE = "Inconclusive"
SD_CHECK_SE = 3.0


@dataclass(frozen=True)
class TopRankOracle:
    """Lower bounds on the high and low events for an infinitely large dataset."""

    top_probability: float
    depth: int
    high_lower_bound: float
    low_lower_bound: float


def top_rank_oracle(
    discount: Discount,
    top_probability: float,
    theta_high: float,
    theta_low: float,
    depth: int = ORACLE_DEPTH,
) -> TopRankOracle:
    """Enumerate the ``2^depth`` label patterns of the top ranks.

    In the limit the first ranks hold independent labels with success
    probability ``top_probability`` and the ideal DCG is the total discount
    mass. A pattern fixes NDCG up to the tail mass beyond ``depth``.
    """
    if discount.cutoff is not None and discount.cutoff.kind != CutoffKind.FIXED_K:
        raise InvalidExperiment(f"the top-rank oracle needs a size-free discount: {discount.label}")
    if not 1 <= depth <= 20:
        raise InvalidExperiment(f"oracle depth must lie in [1, 20], got {depth}")
    head = discount.weights(depth)
    tail = discount.tail_mass(depth)
    total = math.fsum(head.tolist()) + tail
    patterns = (np.arange(1 << depth)[:, None] >> np.arange(depth)) & 1
    hits = patterns.sum(axis=1)
    probability = top_probability**hits * (1.0 - top_probability) ** (depth - hits)
    dcg = patterns @ head
    high = math.fsum(probability[dcg / total >= theta_high].tolist())
    low = math.fsum(probability[(dcg + tail) / total <= theta_low].tolist())
    return TopRankOracle(top_probability, depth, high, low)


@dataclass(frozen=True)
class NonconvergenceRow:
    n: int
    freq_high: float
    freq_low: float
    mean: Optional[float]
    sd: Optional[float]
    trials: int
    skipped: int


@dataclass(frozen=True)
class NonconvergenceReport:
    scorer: str
    theta_high: float
    theta_low: float
    floor_high: float
    floor_low: float
    rows: tuple[NonconvergenceRow, ...]
    oracle: Optional[TopRankOracle]

    @property
    def verdict(self) -> str:
        """Both events stay frequent at the two largest sizes."""
        tail = self.rows[-2:]
        frequent = all(
            row.freq_high > self.floor_high and row.freq_low > self.floor_low for row in tail
        )
        return NON_CONVERGENT if frequent else INCONCLUSIVE

    @property
    def sd_not_shrinking(self) -> bool:
        """Spread at the largest size is not below the smallest one by 3 standard errors."""
        first, last = self.rows[0], self.rows[-1]
        if first.sd is None or last.sd is None or min(first.trials, last.trials) < 2:
            return False
        se = math.hypot(
            first.sd / math.sqrt(2.0 * (first.trials - 1)),
            last.sd / math.sqrt(2.0 * (last.trials - 1)),
        )
        return last.sd >= first.sd - SD_CHECK_SE * se


def nonconvergence_test(
    world: World,
    measure: NdcgMeasure,
    n_grid: Sequence[int],
    trials: int,
    theta_high: float,
    theta_low: float,
    floors: tuple[float, float],
    master_seed: int,
    runner: TrialRunner = SerialTrialRunner(),
    oracle_depth: int = ORACLE_DEPTH,
) -> NonconvergenceReport:
    discount = measure.discount
    if not discount.is_summable:
        raise AssumptionViolated(
            f"{discount.label} is not summable: {discount.classify().reason}",
            assumption="summable-discount",
        )
    if getattr(world.grades, "delta", None) is None:
        raise AssumptionViolated(
            "non-convergence needs every grade to keep a delta share of the most likely one",
            assumption="delta",
        )
    if len(world.scorers) != 1:
        raise InvalidExperiment(f"non-convergence tests one scorer, got {len(world.scorers)}")
    if not 0.0 <= theta_low < theta_high <= 1.0:
        raise InvalidExperiment(f"thresholds need 0 <= low < high <= 1: {theta_low}, {theta_high}")
    sizes = check_grid(n_grid)

    values = np.stack(
        runner.map(partial(trial_ndcg, world, measure, sizes, master_seed), trials)
    )[:, 0, :]
    rows = []
    for i, n in enumerate(sizes):
        column = values[:, i]
        kept = column[~np.isnan(column)]
        rows.append(
            NonconvergenceRow(
                n=n,
                freq_high=float(np.mean(kept >= theta_high)) if kept.size else 0.0,
                freq_low=float(np.mean(kept <= theta_low)) if kept.size else 0.0,
                mean=float(np.mean(kept)) if kept.size else None,
                sd=float(np.std(kept, ddof=1)) if kept.size > 1 else None,
                trials=int(kept.size),
                skipped=int(column.size - kept.size),
            )
        )

    oracle = None
    scorer = world.scorers[0]
    top_size_free = discount.cutoff is None or discount.cutoff.kind == CutoffKind.FIXED_K
    if world.grades.grade_set.is_binary and scorer.is_order_preserving and top_size_free:
        oracle = top_rank_oracle(
            discount, world.grades.top_curve(1.0), theta_high, theta_low, oracle_depth
        )
    report = NonconvergenceReport(
        scorer=scorer.name,
        theta_high=theta_high,
        theta_low=theta_low,
        floor_high=floors[0],
        floor_low=floors[1],
        rows=tuple(rows),
        oracle=oracle,
    )
    logger.info(f"Non-convergence verdict for {discount.label}: {report.verdict}.")
    return report
