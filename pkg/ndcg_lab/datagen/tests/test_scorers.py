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

from ndcg_lab.datagen.exceptions import InvalidScorer
from ndcg_lab.datagen.scorers import (
    CanonicalScorer,
    Distortion,
    IndependentNoiseScorer,
    MonotoneDistortScorer,
    PartialCorruptScorer,
    random_scorer,
)

GRID = np.linspace(0.0, 1.0, 101)


class TestScorers(TestCase):
    def test_canonical(self):
        scorer = CanonicalScorer()
        np.testing.assert_array_equal(scorer.scores(GRID), GRID)
        self.assertTrue(scorer.is_order_preserving)

    def test_distortions_are_increasing(self):
        for phi in Distortion:
            with self.subTest(phi=phi):
                scorer = MonotoneDistortScorer(phi=phi, a=2.0, b=-1.0)
                self.assertTrue(np.all(np.diff(scorer.scores(GRID)) > 0))
                self.assertTrue(scorer.is_order_preserving)

    def test_distortion_from_string(self):
        self.assertEqual(MonotoneDistortScorer(phi="cube").phi, Distortion.CUBE)

    def test_affine_needs_positive_slope(self):
        with self.assertRaises(InvalidScorer):
            MonotoneDistortScorer(phi=Distortion.AFFINE, a=0.0)

    def test_partial_corruption(self):
        scorer = PartialCorruptScorer(intervals=((0.8, 1.0),))
        np.testing.assert_allclose(
            scorer.scores(np.array([0.1, 0.85, 0.9, 0.95])), [0.1, 0.95, 0.9, 0.85]
        )
        self.assertFalse(scorer.is_order_preserving)

    def test_partial_corruption_intervals(self):
        scorer = PartialCorruptScorer(intervals=((0.5, 0.6), (0.1, 0.2)))
        self.assertEqual(scorer.intervals, ((0.1, 0.2), (0.5, 0.6)))
        with self.assertRaises(InvalidScorer):
            PartialCorruptScorer(intervals=((0.1, 0.5), (0.4, 0.6)))
        with self.assertRaises(InvalidScorer):
            PartialCorruptScorer(intervals=((0.6, 0.5),))
        with self.assertRaises(InvalidScorer):
            PartialCorruptScorer(intervals=())

    def test_independent_noise(self):
        scorer = IndependentNoiseScorer(weight=0.25)
        noise = np.full(GRID.shape, 0.5)
        np.testing.assert_allclose(scorer.scores(GRID, noise), 0.75 * GRID + 0.125)
        self.assertTrue(scorer.needs_noise)
        with self.assertRaises(InvalidScorer):
            scorer.scores(GRID)
        with self.assertRaises(InvalidScorer):
            IndependentNoiseScorer(weight=1.5)

    def test_random_scorer_ignores_canonical_score(self):
        scorer = random_scorer()
        noise = np.linspace(1.0, 0.0, GRID.size)
        np.testing.assert_array_equal(scorer.scores(GRID, noise), noise)
        self.assertFalse(scorer.is_order_preserving)
        self.assertTrue(IndependentNoiseScorer(weight=0.0).is_order_preserving)
