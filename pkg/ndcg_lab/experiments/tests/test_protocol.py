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

from ndcg_lab.datagen.scorers import CanonicalScorer, random_scorer
from ndcg_lab.experiments.exceptions import InvalidExperiment
from ndcg_lab.experiments.protocol import World, check_grid, prefix_ndcg, trial_ndcg
from ndcg_lab.measures.discount import CutoffRule, LogInverseDiscount, PowerDiscount
from ndcg_lab.measures.metrics import Dataset, GradeSet, NdcgMeasure, TieBreak, ndcg
from ndcg_lab.test_utils import binary_spec, binary_world

THREE = GradeSet((2.0, 1.0, 0.0))
MEASURES = [
    NdcgMeasure(LogInverseDiscount()),
    NdcgMeasure(PowerDiscount(beta=0.5, cutoff=CutoffRule.linear_fraction(0.2))),
    NdcgMeasure(LogInverseDiscount(), TieBreak.PESSIMISTIC),
    NdcgMeasure(LogInverseDiscount(cutoff=CutoffRule.fixed_k(5)), TieBreak.OPTIMISTIC),
]


class TestPrefixNdcg(TestCase):
    def test_matches_ndcg_of_every_prefix(self):
        rng = np.random.default_rng(11)
        scores = rng.integers(0, 30, 300) / 7.0
        grades = rng.choice([2.0, 1.0, 0.0], size=300)
        data = Dataset(scores, grades, THREE)
        grid = [1, 2, 5, 17, 100, 299, 300]
        for measure in MEASURES:
            with self.subTest(measure=measure.label, tie_break=measure.tie_break):
                values = prefix_ndcg(data.scores, data.gains, measure, grid)
                for n, value in zip(grid, values):
                    prefix = data.prefix(n)
                    if not np.any(prefix.gains > 0):
                        self.assertTrue(np.isnan(value))
                        continue
                    self.assertEqual(value, ndcg(prefix, measure.discount, measure.tie_break))

    def test_degenerate_prefix(self):
        gains = np.array([0.0, 0.0, 1.0])
        values = prefix_ndcg(np.array([0.3, 0.2, 0.1]), gains, MEASURES[0], [1, 2, 3])
        self.assertTrue(np.isnan(values[0]) and np.isnan(values[1]))
        self.assertLess(values[2], 1.0)


class TestProtocol(TestCase):
    def test_check_grid(self):
        self.assertEqual(check_grid([1, 10.0, 100]), [1, 10, 100])
        for grid in ([], [0, 10], [10, 10], [100, 10]):
            with self.subTest(grid=grid):
                with self.assertRaises(InvalidExperiment):
                    check_grid(grid)

    def test_world(self):
        world = binary_world(scorers=[CanonicalScorer(), random_scorer()])
        self.assertEqual(world.scorer_names, ["canonical", "random"])
        with self.assertRaises(InvalidExperiment):
            World(binary_spec(), ())

    def test_trial_is_reproducible(self):
        world = binary_world(scorers=[CanonicalScorer(), random_scorer()])
        first = trial_ndcg(world, MEASURES[0], [10, 100, 1000], 3, 4)
        second = trial_ndcg(world, MEASURES[0], [10, 100, 1000], 3, 4)
        self.assertEqual(first.shape, (2, 3))
        np.testing.assert_array_equal(first, second)
        other = trial_ndcg(world, MEASURES[0], [10, 100, 1000], 3, 5)
        self.assertFalse(np.array_equal(first, other))
