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

import numpy as np

from ndcg_lab.measures.metrics import TieBreak, rank_order

from .curves import PiecewiseLinearCurve
from .distribution import CalibratedGrades, DistributionSpec
from .exceptions import InvalidCalibration
from .scorers import Scorer
from .stream import SampleStream

logger = logging.getLogger(__name__)

MIN_CALIBRATION_SIZE = 100_000
BIN_RANGE = (50, 1000)


def calibrate_scorer(
    spec: DistributionSpec,
    scorer: Scorer,
    calibration_n: int,
    bins: int,
    master_seed: int = 0,
    threads: int = 1,
) -> CalibratedGrades:
    """Tabulate the grade curves a scorer induces on its own canonical scale.

    The canonical value of an item is its position from the bottom of the
    scorer's ranking divided by ``calibration_n``. Grade frequencies are taken
    per equal-count bin and interpolated linearly between bin centres.
    """
    if calibration_n < MIN_CALIBRATION_SIZE:
        raise InvalidCalibration(
            f"calibration needs at least {MIN_CALIBRATION_SIZE} instances, got {calibration_n}"
        )
    if not BIN_RANGE[0] <= bins <= BIN_RANGE[1]:
        raise InvalidCalibration(f"bins must lie in {list(BIN_RANGE)}, got {bins}")

    logger.info(f"Calibrating scorer {scorer.name} on {calibration_n} instances.")
    sample = SampleStream(spec, [scorer], master_seed).take(calibration_n, threads=threads)
    n = len(sample)
    # Best first, ties by stream position.
    order = rank_order(sample.scores[0], np.zeros(n), np.arange(n), TieBreak.BY_INDEX)
    from_bottom = np.empty(n, dtype=np.int64)
    from_bottom[order] = np.arange(n, 0, -1)
    bin_index = ((from_bottom - 1) * bins) // n

    size = len(spec.grade_set)
    counts = np.bincount(
        bin_index * size + sample.grade_index.astype(np.int64), minlength=bins * size
    ).reshape(bins, size)
    frequencies = counts / counts.sum(axis=1, keepdims=True)
    centres = tuple(((np.arange(bins) + 0.5) / bins).tolist())
    curves = tuple(
        PiecewiseLinearCurve(knots=centres, values=tuple(frequencies[:, j].tolist()))
        for j in range(size)
    )
    return CalibratedGrades(spec.grade_set, curves, source=scorer.name)
