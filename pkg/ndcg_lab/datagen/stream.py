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

"""Seeded i.i.d. instance streams.

Instances are produced in fixed-size chunks. Chunk ``c`` of trial ``t`` draws
from ``SeedSequence([master_seed, t, c])``; the noise of the scorer in slot
``k`` draws from ``SeedSequence([master_seed, t, c, 1 + k])``. Any prefix of a
stream is therefore the same whichever size is requested and however many
threads generate the chunks.
"""

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ndcg_lab.measures.metrics import Dataset

from .distribution import ConditionalGrades
from .exceptions import DatagenError, SampleSizeExceeded
from .scorers import Scorer

logger = logging.getLogger(__name__)

STREAM_CHUNK = 1 << 16
SAMPLE_SIZE_CAP = 100_000_000


@dataclass(frozen=True, eq=False)
class StreamSample:
    """The first ``n`` instances of a stream."""

    s: np.ndarray
    grade_index: np.ndarray
    grades: np.ndarray
    scores: tuple[np.ndarray, ...]

    def __len__(self):
        return int(self.s.size)


class SampleStream:
    def __init__(
        self,
        spec: ConditionalGrades,
        scorers: Sequence[Scorer],
        master_seed: int,
        trial: int = 0,
        chunk_size: int = STREAM_CHUNK,
        size_cap: int = SAMPLE_SIZE_CAP,
    ):
        if master_seed < 0 or master_seed >= 1 << 64:
            raise DatagenError(f"master seed must be an unsigned 64-bit integer, got {master_seed}")
        if chunk_size < 1:
            raise DatagenError(f"chunk size must be positive, got {chunk_size}")
        names = [scorer.name for scorer in scorers]
        if len(set(names)) != len(names):
            raise DatagenError(f"scorer names must be unique, got {names}")
        self.spec = spec
        self.scorers = tuple(scorers)
        self.master_seed = int(master_seed)
        self.trial = int(trial)
        self.chunk_size = int(chunk_size)
        self.size_cap = int(size_cap)
        self._grade_values = np.asarray(spec.grade_set.grades, dtype=np.float64)

    def _chunk(self, chunk: int):
        rng = np.random.default_rng(np.random.SeedSequence([self.master_seed, self.trial, chunk]))
        s = rng.random(self.chunk_size)
        u = rng.random(self.chunk_size)
        cumulative = np.cumsum(self.spec.probabilities(s), axis=1)
        grade_index = np.sum(cumulative[:, :-1] <= u[:, None], axis=1).astype(np.int8)
        scores = []
        for slot, scorer in enumerate(self.scorers):
            noise = None
            if scorer.needs_noise:
                noise_rng = np.random.default_rng(
                    np.random.SeedSequence([self.master_seed, self.trial, chunk, 1 + slot])
                )
                noise = noise_rng.random(self.chunk_size)
            scores.append(scorer.scores(s, noise))
        return s, grade_index, scores

    def take(self, n: int, threads: int = 1) -> StreamSample:
        """The first ``n`` instances with the scores of every scorer."""
        if n < 1:
            raise DatagenError(f"sample size must be positive, got {n}")
        if n > self.size_cap:
            raise SampleSizeExceeded(
                f"{n} instances requested, the cap is {self.size_cap}",
                requested=n,
                limit=self.size_cap,
            )
        chunks = range(math.ceil(n / self.chunk_size))
        if threads > 1 and len(chunks) > 1:
            with ThreadPoolExecutor(max_workers=min(threads, len(chunks))) as executor:
                parts = list(executor.map(self._chunk, chunks))
        else:
            parts = [self._chunk(c) for c in chunks]

        s = np.concatenate([p[0] for p in parts])[:n]
        grade_index = np.concatenate([p[1] for p in parts])[:n]
        scores = tuple(
            np.concatenate([p[2][slot] for p in parts])[:n] for slot in range(len(self.scorers))
        )
        return StreamSample(s, grade_index, self._grade_values[grade_index], scores)


def sample_prefixes(
    stream: SampleStream, n_grid: Sequence[int], threads: int = 1
) -> dict[str, list[Dataset]]:
    """Nested datasets: the dataset of size ``n`` is the first ``n`` stream items.

    Every scorer ranks the same labelled instances.
    """
    sizes = [int(n) for n in n_grid]
    if not sizes:
        raise DatagenError("the size grid is empty")
    if any(b <= a for a, b in zip(sizes, sizes[1:])) or sizes[0] < 1:
        raise DatagenError(f"the size grid must be ascending and positive, got {sizes}")
    sample = stream.take(sizes[-1], threads=threads)
    grade_set = stream.spec.grade_set
    return {
        scorer.name: [
            Dataset(sample.scores[slot][:n], sample.grades[:n], grade_set) for n in sizes
        ]
        for slot, scorer in enumerate(stream.scorers)
    }
