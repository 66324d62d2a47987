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

from ndcg_lab.datagen.curves import AffineCurve
from ndcg_lab.datagen.scorers import CanonicalScorer, random_scorer
from ndcg_lab.experiments.exceptions import InvalidExperiment
from ndcg_lab.experiments.nonconvergence import (
    INCONCLUSIVE,
    NON_CONVERGENT,
    NonconvergenceReport,
    NonconvergenceRow,
    nonconvergence_test,
    top_rank_oracle,
)
from ndcg_lab.limits.exceptions import AssumptionViolated
from ndcg_lab.measures.discount import (
    CustomDiscount,
    CutoffRule,
    ExponentialDiscount,
    LogInverseDiscount,
    TailRule,
    ZipfianDiscount,
)
from ndcg_lab.measures.metrics import NdcgMeasure
from ndcg_lab.test_utils import binary_world

EXP2 = NdcgMeasure(ExponentialDiscount())
FLOORS = (0.3, 0.05)


def tilted_world(**kwargs):
    return binary_world(AffineCurve(0.3, 0.4), delta=0.4, **kwargs)


class TestTopRankOracle(TestCase):
    def test_exponential(self):
        oracle = top_rank_oracle(ExponentialDiscount(), 0.7, 0.6, 0.3)
        self.assertEqual(oracle.depth, 14)
        self.assertGreater(oracle.high_lower_bound, 0.6)
        self.assertLess(oracle.high_lower_bound, 0.7)
        # both top labels zero already keeps NDCG at most 1/4
        self.assertGreater(oracle.low_lower_bound, 0.09)
        self.assertLess(oracle.low_lower_bound, 0.11)

    def test_certain_labels(self):
        oracle = top_rank_oracle(ExponentialDiscount(), 1.0, 0.6, 0.3)
        self.assertAlmostEqual(oracle.high_lower_bound, 1.0)
        self.assertEqual(oracle.low_lower_bound, 0.0)

    def test_fixed_cutoff(self):
        discount = LogInverseDiscount(cutoff=CutoffRule.fixed_k(3))
        oracle = top_rank_oracle(discount, 0.5, 0.99, 0.0)
        self.assertAlmostEqual(oracle.high_lower_bound, 0.125)
        self.assertAlmostEqual(oracle.low_lower_bound, 0.125)

    def test_power_tailed_custom_discount(self):
        discount = CustomDiscount(values=(1.0, 0.5), tail=TailRule.POWER, tail_param=2.0)
        oracle = top_rank_oracle(discount, 0.7, 0.6, 0.3)
        self.assertGreater(oracle.high_lower_bound, 0.0)
        self.assertLessEqual(oracle.high_lower_bound + oracle.low_lower_bound, 1.0)

    def test_invalid(self):
        with self.assertRaises(InvalidExperiment):
            top_rank_oracle(
                ExponentialDiscount(cutoff=CutoffRule.linear_fraction(0.5)), 0.5, 0.6, 0.3
            )
        with self.assertRaises(InvalidExperiment):
            top_rank_oracle(ExponentialDiscount(), 0.5, 0.6, 0.3, depth=30)


class TestNonconvergence(TestCase):
    def test_exponential_discount_keeps_fluctuating(self):
        report = nonconvergence_test(tilted_world(), EXP2, [1000, 10_000], 500, 0.6, 0.3, FLOORS, 0)
        last = report.rows[-1]
        self.assertGreaterEqual(last.freq_high, 0.3)
        self.assertGreaterEqual(last.freq_low, 0.05)
        self.assertEqual(report.verdict, NON_CONVERGENT)
        self.assertTrue(report.sd_not_shrinking)
        self.assertIsNotNone(report.oracle)
        self.assertGreater(report.oracle.high_lower_bound, FLOORS[0])
        self.assertGreater(report.oracle.low_lower_bound, FLOORS[1])
        self.assertEqual(last.trials + last.skipped, 500)

    def test_power_tailed_custom_discount(self):
        discount = CustomDiscount(values=(1.0, 0.5), tail=TailRule.POWER, tail_param=2.0)
        report = nonconvergence_test(
            tilted_world(), NdcgMeasure(discount), [100, 200], 30, 0.6, 0.3, FLOORS, 0
        )
        self.assertEqual(len(report.rows), 2)
        self.assertIsNotNone(report.oracle)
        self.assertEqual(report.oracle.depth, 14)

    def test_no_oracle_for_noisy_scorer(self):
        report = nonconvergence_test(
            tilted_world(scorers=[random_scorer()]), EXP2, [100, 200], 30, 0.6, 0.3, FLOORS, 0
        )
        self.assertIsNone(report.oracle)
        self.assertEqual(report.scorer, "random")

    def test_verdict(self):
        rows = (
            NonconvergenceRow(100, 0.5, 0.1, 0.5, 0.2, 100, 0),
            NonconvergenceRow(1000, 0.5, 0.01, 0.5, 0.2, 100, 0),
        )
        report = NonconvergenceReport("f", 0.6, 0.3, 0.3, 0.05, rows, None)
        self.assertEqual(report.verdict, INCONCLUSIVE)
        self.assertTrue(report.sd_not_shrinking)

    def test_assumptions(self):
        with self.assertRaises(AssumptionViolated) as ctx:
            nonconvergence_test(
                tilted_world(), NdcgMeasure(ZipfianDiscount()), [100], 30, 0.6, 0.3, FLOORS, 0
            )
        self.assertEqual(ctx.exception.assumption, "summable-discount")
        with self.assertRaises(AssumptionViolated) as ctx:
            nonconvergence_test(binary_world(), EXP2, [100], 30, 0.6, 0.3, FLOORS, 0)
        self.assertEqual(ctx.exception.assumption, "delta")
        with self.assertRaises(InvalidExperiment):
            nonconvergence_test(tilted_world(), EXP2, [100], 30, 0.3, 0.6, FLOORS, 0)
        with self.assertRaises(InvalidExperiment):
            nonconvergence_test(
                tilted_world(scorers=[CanonicalScorer(), random_scorer()]),
                EXP2,
                [100],
                30,
                0.6,
                0.3,
                FLOORS,
                0,
            )
