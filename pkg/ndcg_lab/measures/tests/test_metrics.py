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

import itertools
import math
from dataclasses import replace
from unittest import TestCase

import numpy as np

from ndcg_lab.measures.discount import (
    CutoffRule,
    ExponentialDiscount,
    LogInverseDiscount,
    PowerDiscount,
    ZipfianDiscount,
)
from ndcg_lab.measures.exceptions import (
    DegenerateDataset,
    InvalidDataset,
    InvalidGradeSet,
    OracleSizeExceeded,
)
from ndcg_lab.measures.metrics import (
    Dataset,
    Gain,
    GradeSet,
    NdcgMeasure,
    TieBreak,
    brute_force_idcg,
    dcg,
    idcg,
    ndcg,
    rank,
)

BINARY = GradeSet((1.0, 0.0))
THREE = GradeSet((2.0, 1.0, 0.0))
THREE_EXP = GradeSet((2.0, 1.0, 0.0), Gain.EXPONENTIAL2)


def random_datasets(count: int, seed: int = 2024):
    """Datasets whose scores are multiples of 1/7, so ties occur but transforms keep order."""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(1, 41))
        scores = rng.integers(0, 25, n) / 7.0
        grades = rng.choice([2.0, 1.0, 0.0], size=n)
        if not np.any(grades > 0):
            grades[int(rng.integers(0, n))] = 1.0
        yield Dataset(scores, grades, THREE)


class TestGradeSet(TestCase):
    def test_gains(self):
        np.testing.assert_array_equal(THREE.gains, [2.0, 1.0, 0.0])
        np.testing.assert_array_equal(THREE_EXP.gains, [3.0, 1.0, 0.0])

    def test_binary(self):
        self.assertTrue(BINARY.is_binary)
        self.assertFalse(THREE.is_binary)
        self.assertFalse(GradeSet((2.0, 1.0)).is_binary)

    def test_validation(self):
        with self.assertRaises(InvalidGradeSet):
            GradeSet((1.0,))
        with self.assertRaises(InvalidGradeSet):
            GradeSet((0.0, 1.0))
        with self.assertRaises(InvalidGradeSet):
            GradeSet((1.0, 1.0))

    def test_index_of(self):
        np.testing.assert_array_equal(THREE.index_of([0.0, 2.0, 1.0]), [2, 0, 1])
        with self.assertRaises(InvalidDataset):
            THREE.index_of([3.0])


class TestDataset(TestCase):
    def test_validation(self):
        with self.assertRaises(InvalidDataset):
            Dataset(np.array([]), np.array([]), BINARY)
        with self.assertRaises(InvalidDataset):
            Dataset(np.array([1.0, 2.0]), np.array([1.0]), BINARY)
        with self.assertRaises(InvalidDataset):
            Dataset(np.array([1.0]), np.array([2.0]), BINARY)
        with self.assertRaises(InvalidDataset):
            Dataset(np.array([np.nan]), np.array([1.0]), BINARY)

    def test_prefix(self):
        data = Dataset(np.array([3.0, 1.0, 2.0]), np.array([1.0, 0.0, 1.0]), BINARY)
        head = data.prefix(2)
        np.testing.assert_array_equal(head.scores, [3.0, 1.0])
        np.testing.assert_array_equal(head.index, [0, 1])


class TestRank(TestCase):
    def test_sort(self):
        data = Dataset(np.array([3.0, 1.0, 2.0]), np.array([0.0, 0.0, 1.0]), BINARY)
        np.testing.assert_array_equal(rank(data).permutation, [0, 2, 1])

    def test_ties_by_index(self):
        data = Dataset(np.array([1.0, 2.0, 1.0, 2.0]), np.zeros(4), BINARY)
        np.testing.assert_array_equal(rank(data).permutation, [1, 3, 0, 2])

    def test_pessimistic(self):
        data = Dataset(np.array([1.0, 1.0]), np.array([0.0, 1.0]), BINARY)
        self.assertEqual(rank(data, TieBreak.PESSIMISTIC).permutation[0], 0)
        data = Dataset(np.array([1.0, 1.0]), np.array([1.0, 0.0]), BINARY)
        self.assertEqual(rank(data, TieBreak.PESSIMISTIC).permutation[0], 1)

    def test_optimistic(self):
        data = Dataset(np.array([1.0, 1.0]), np.array([0.0, 1.0]), BINARY)
        self.assertEqual(rank(data, TieBreak.OPTIMISTIC).permutation[0], 1)

    def test_scores_nonincreasing(self):
        for data in random_datasets(50):
            for tie_break in TieBreak:
                ranked = data.scores[rank(data, tie_break).permutation]
                self.assertTrue(np.all(np.diff(ranked) <= 0.0))


class TestDcg(TestCase):
    def test_log_inverse(self):
        value = dcg([1.0, 0.0, 1.0], LogInverseDiscount(), BINARY)
        self.assertAlmostEqual(value, 1 / math.log(2) + 1 / math.log(4), places=14)
        self.assertAlmostEqual(value, 2.164043, places=6)

    def test_zero_gains(self):
        self.assertEqual(dcg([0.0, 0.0, 0.0], LogInverseDiscount(), BINARY), 0.0)

    def test_exponential_gain(self):
        value = dcg([2.0, 1.0], PowerDiscount(beta=0.5), THREE_EXP)
        self.assertAlmostEqual(value, 3.0 + 2.0**-0.5, places=14)
        self.assertAlmostEqual(value, 3.70711, places=5)


class TestIdcg(TestCase):
    def test_sorted_order(self):
        d = LogInverseDiscount()
        self.assertEqual(idcg([0.0, 1.0, 1.0], d, BINARY), dcg([1.0, 1.0, 0.0], d, BINARY))
        self.assertAlmostEqual(
            idcg([0.0, 1.0, 1.0], d, BINARY), 1 / math.log(2) + 1 / math.log(3), places=14
        )

    def test_single_item(self):
        d = PowerDiscount(beta=0.5)
        self.assertEqual(idcg([2.0], d, THREE_EXP), 3.0 * d.eval(1))

    def test_matches_brute_force_on_every_small_multiset(self):
        discounts = [
            LogInverseDiscount(),
            PowerDiscount(beta=0.5),
            ZipfianDiscount(),
            ExponentialDiscount(base=2.0),
        ]
        for n in range(1, 9):
            for grades in itertools.combinations_with_replacement([0.0, 1.0, 2.0], n):
                for d in discounts:
                    self.assertEqual(
                        idcg(list(grades), d, THREE),
                        brute_force_idcg(list(grades), d, THREE),
                        (grades, d.label),
                    )

    def test_brute_force_examples(self):
        d = LogInverseDiscount()
        self.assertAlmostEqual(
            brute_force_idcg([1.0, 0.0], d, BINARY), 1 / math.log(2), places=15
        )
        z = ZipfianDiscount()
        self.assertAlmostEqual(brute_force_idcg([2.0, 2.0], z, THREE), 2.0 * 1.5, places=15)

    def test_brute_force_limit(self):
        with self.assertRaises(OracleSizeExceeded):
            brute_force_idcg([1.0] * 11, LogInverseDiscount(), BINARY)


class TestNdcg(TestCase):
    def test_perfect_ranking(self):
        data = Dataset(np.array([3.0, 2.0, 1.0]), np.array([2.0, 1.0, 0.0]), THREE)
        self.assertEqual(ndcg(data, LogInverseDiscount()), 1.0)

    def test_reversed_pair(self):
        data = Dataset(np.array([2.0, 1.0]), np.array([0.0, 1.0]), BINARY)
        for d in (LogInverseDiscount(), PowerDiscount(beta=0.3), ExponentialDiscount(base=3.0)):
            self.assertAlmostEqual(ndcg(data, d), d.eval(2) / d.eval(1), places=15)

    def test_equal_positive_grades(self):
        data = Dataset(np.array([0.3, 0.9, 0.1]), np.ones(3), BINARY)
        self.assertEqual(ndcg(data, ZipfianDiscount()), 1.0)

    def test_degenerate(self):
        data = Dataset(np.array([0.3, 0.9]), np.zeros(2), BINARY)
        with self.assertRaises(DegenerateDataset):
            ndcg(data, LogInverseDiscount())

    def test_bounded(self):
        d = LogInverseDiscount()
        for data in random_datasets(200):
            value = ndcg(data, d)
            self.assertGreaterEqual(value, 0.0)
            self.assertLessEqual(value, 1.0)

    def test_tie_breaks_bracket_by_index(self):
        d = LogInverseDiscount()
        for data in random_datasets(200):
            low = ndcg(data, d, TieBreak.PESSIMISTIC)
            mid = ndcg(data, d, TieBreak.BY_INDEX)
            high = ndcg(data, d, TieBreak.OPTIMISTIC)
            self.assertLessEqual(low, mid)
            self.assertLessEqual(mid, high)

    def test_cutoff_truncates_ideal(self):
        # One positive out of ten ranked last: NDCG@5 is zero, the ideal has one term.
        scores = np.arange(10, 0, -1, dtype=float)
        grades = np.zeros(10)
        grades[-1] = 1.0
        data = Dataset(scores, grades, BINARY)
        d = LogInverseDiscount(cutoff=CutoffRule.fixed_k(5))
        self.assertEqual(ndcg(data, d), 0.0)
        grades[0] = 1.0
        data = Dataset(scores, grades, BINARY)
        self.assertAlmostEqual(ndcg(data, d), d.eval(1) / (d.eval(1) + d.eval(2)), places=15)


class TestInvariance(TestCase):
    def test_order_preserving_transforms(self):
        transforms = {
            "affine": lambda s: 3.0 * s + 2.0,
            "exp": np.exp,
            "cube": lambda s: s**3,
        }
        d = LogInverseDiscount()
        for data in random_datasets(1000):
            base_rank = rank(data).permutation
            base = ndcg(data, d)
            for name, phi in transforms.items():
                moved = Dataset(phi(data.scores), data.grades, THREE)
                np.testing.assert_array_equal(rank(moved).permutation, base_rank, name)
                self.assertEqual(ndcg(moved, d), base, name)

    def test_discount_scaling(self):
        for data in random_datasets(1000, seed=7):
            for d, scaled in (
                (LogInverseDiscount(), LogInverseDiscount(scale=2.0)),
                (PowerDiscount(beta=0.5), PowerDiscount(beta=0.5, scale=0.25)),
            ):
                self.assertEqual(ndcg(data, d), ndcg(data, scaled))
            base = ndcg(data, ZipfianDiscount())
            other = ndcg(data, ZipfianDiscount(scale=3.7))
            self.assertLessEqual(abs(base - other), 1e-15 * max(abs(base), 1e-300))

    def test_cutoff_at_n_is_full_ndcg(self):
        for data in random_datasets(1000, seed=11):
            for d in (LogInverseDiscount(), PowerDiscount(beta=0.5)):
                at_n = replace(d, cutoff=CutoffRule.fixed_k(len(data)))
                self.assertEqual(ndcg(data, at_n), ndcg(data, d))


class TestNdcgMeasure(TestCase):
    def test_call_and_label(self):
        measure = NdcgMeasure(PowerDiscount(beta=0.5, cutoff=CutoffRule.linear_fraction(0.2)))
        self.assertEqual(measure.label, "ndcg[power(0.5)@0.2n]")
        data = Dataset(np.array([2.0, 1.0]), np.array([1.0, 0.0]), BINARY)
        self.assertEqual(measure(data), 1.0)
