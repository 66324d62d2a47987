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

from unittest import TestCase

import numpy as np
from scipy import stats

from ndcg_lab.datagen.curves import AffineCurve
from ndcg_lab.datagen.distribution import DistributionSpec
from ndcg_lab.datagen.exceptions import DatagenError, SampleSizeExceeded
from ndcg_lab.datagen.scorers import CanonicalScorer, random_scorer
from ndcg_lab.datagen.stream import SampleStream, sample_prefixes
from ndcg_lab.measures.metrics import GradeSet

BINARY = GradeSet((1.0, 0.0))


def linear_spec() -> DistributionSpec:
    return DistributionSpec(BINARY, (AffineCurve(0.0, 1.0),))


def stream(**kwargs) -> SampleStream:
    kwargs.setdefault("chunk_size", 4096)
    return SampleStream(linear_spec(), [CanonicalScorer(), random_scorer()], 7, **kwargs)


class TestSampleStream(TestCase):
    def test_prefix_property(self):
        small = stream().take(1000)
        large = stream().take(20_000)
        np.testing.assert_array_equal(small.s, large.s[:1000])
        np.testing.assert_array_equal(small.grades, large.grades[:1000])
        for a, b in zip(small.scores, large.scores):
            np.testing.assert_array_equal(a, b[:1000])

    def test_threads_do_not_change_the_sample(self):
        serial = stream().take(50_000)
        threaded = stream().take(50_000, threads=4)
        np.testing.assert_array_equal(serial.s, threaded.s)
        np.testing.assert_array_equal(serial.grade_index, threaded.grade_index)
        np.testing.assert_array_equal(serial.scores[1], threaded.scores[1])

    def test_trials_differ(self):
        first = stream(trial=0).take(100)
        second = stream(trial=1).take(100)
        self.assertFalse(np.array_equal(first.s, second.s))

    def test_scores(self):
        sample = stream().take(5000)
        self.assertEqual(len(sample), 5000)
        np.testing.assert_array_equal(sample.scores[0], sample.s)
        self.assertFalse(np.array_equal(sample.scores[1], sample.s))

    def test_canonical_scores_are_uniform(self):
        sample = stream().take(100_000)
        self.assertGreater(stats.kstest(sample.s, "uniform").pvalue, 1e-3)
        self.assertGreater(stats.kstest(sample.scores[1], "uniform").pvalue, 1e-3)

    def test_grade_frequencies(self):
        sample = stream().take(200_000)
        relevant = sample.grades == 1.0
        self.assertAlmostEqual(np.mean(relevant), 0.5, delta=0.005)
        # E[s | Y = 1] = 2/3 when g(s) = s.
        self.assertAlmostEqual(np.mean(sample.s[relevant]), 2 / 3, delta=0.005)

    def test_size_cap(self):
        with self.assertRaises(SampleSizeExceeded) as ctx:
            stream(size_cap=10).take(11)
        self.assertEqual(ctx.exception.limit, 10)
        with self.assertRaises(DatagenError):
            stream().take(0)

    def test_invalid_stream(self):
        with self.assertRaises(DatagenError):
            SampleStream(linear_spec(), [CanonicalScorer(), CanonicalScorer()], 7)
        with self.assertRaises(DatagenError):
            SampleStream(linear_spec(), [CanonicalScorer()], -1)
        with self.assertRaises(DatagenError):
            SampleStream(linear_spec(), [CanonicalScorer()], 1, chunk_size=0)


class TestSamplePrefixes(TestCase):
    def test_nested_datasets(self):
        prefixes = sample_prefixes(stream(), [10, 100, 1000])
        self.assertEqual(set(prefixes), {"canonical", "random"})
        small, medium, large = prefixes["canonical"]
        self.assertEqual([len(small), len(medium), len(large)], [10, 100, 1000])
        np.testing.assert_array_equal(small.grades, large.grades[:10])
        np.testing.assert_array_equal(medium.scores, large.scores[:100])
        np.testing.assert_array_equal(prefixes["random"][2].grades, large.grades)

    def test_invalid_grid(self):
        with self.assertRaises(DatagenError):
            sample_prefixes(stream(), [])
        with self.assertRaises(DatagenError):
            sample_prefixes(stream(), [100, 10])
