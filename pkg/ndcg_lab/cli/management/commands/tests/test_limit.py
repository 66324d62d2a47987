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

import json
import math

from ndcg_lab.datagen.curves import AffineCurve
from ndcg_lab.limits.pseudo_expectation import pseudo_expectation
from ndcg_lab.measures.discount import PowerDiscount
from ndcg_lab.test_utils import ExperimentCommandTestCase

POWER = """\
command: limit
discount: {family: power, beta: 0.5}
"""


class TestLimitCommand(ExperimentCommandTestCase):
    def limits(self):
        return json.loads(self.read("limit.json"))

    def test_power(self):
        out = self.call_command("limit", POWER)
        self.assertIn("canonical: power", out)
        document = self.limits()
        self.assertEqual(document["discount"], "power(0.5)")
        self.assertEqual(document["classification"]["value"], "Feasible")
        (entry,) = document["limits"]
        self.assertEqual(entry["scorer"], "canonical")
        self.assertFalse(entry["calibrated"])
        self.assertTrue(entry["binary"])
        self.assertEqual(entry["rule"], "power")
        self.assertEqual(entry["theorem"], "Thm3")
        self.assertAlmostEqual(entry["value"], 2 * math.sqrt(2) / 3, places=6)
        self.assertTrue(all(entry["assumptions"].values()))
        self.assertNotIn("pseudo_expectation", entry)

        manifest = self.manifest()
        self.assertEqual(manifest["outputs"], ["limit.json"])
        self.assertAlmostEqual(manifest["results"]["limits"]["canonical"], entry["value"])

    def test_zipfian(self):
        self.call_command("limit", "discount: {family: zipfian}\n")
        (entry,) = self.limits()["limits"]
        self.assertEqual(entry["rule"], "zipfian")
        self.assertEqual(entry["theorem"], "Thm5")
        self.assertAlmostEqual(entry["value"], 1.0)
        self.assertEqual(self.limits()["classification"]["value"], "Borderline")

    def test_fixed_cutoff(self):
        self.call_command("limit", "discount: {family: log, cutoff: {kind: fixed_k, k: 10}}\n")
        (entry,) = self.limits()["limits"]
        self.assertIsNone(entry["value"])
        self.assertEqual(entry["rule"], "fixed-cutoff-no-limit")
        self.assertEqual(entry["theorem"], "Thm6")
        self.assertTrue(entry["explanation"])

    def test_summable_discount_with_linear_cutoff(self):
        config = "discount: {family: exp, cutoff: {kind: linear_fraction, c: 0.2}}\n"
        self.call_command("limit", config)
        (entry,) = self.limits()["limits"]
        self.assertIsNone(entry["value"])
        self.assertEqual(entry["rule"], "summable-no-limit")
        self.assertEqual(entry["theorem"], "Thm6")
        self.assertEqual(self.limits()["classification"]["value"], "Infeasible")

    def test_pseudo_expectation(self):
        self.call_command("limit", POWER + "pseudo_expectation_sizes: [1000, 1e5]\n")
        (entry,) = self.limits()["limits"]
        values = entry["pseudo_expectation"]
        self.assertEqual([value["n"] for value in values], [1000, 100_000])
        expected = pseudo_expectation(AffineCurve(0.0, 1.0), PowerDiscount(beta=0.5), 1000, 0.5)
        self.assertAlmostEqual(values[0]["normalized"], expected.normalized, places=9)
        self.assertLess(values[0]["normalized"], values[1]["normalized"])

    def test_calibrated_scorer(self):
        config = """\
discount: {family: log}
scorers: [{kind: independent_noise, weight: 0.5}]
calibration_size: 100000
calibration_bins: 50
"""
        with self.assertLogs(logger="ndcg_lab", level="INFO") as log:
            self.call_command("limit", config)
        self.assertInLog("Calibrating scorer noisy on 100000 instances.", log)
        (entry,) = self.limits()["limits"]
        self.assertTrue(entry["calibrated"])
        self.assertEqual(entry["rule"], "log")
        self.assertEqual(entry["value"], 1.0)

    def test_no_closed_form(self):
        config = "discount: {family: custom, values: [1.0, 0.5], tail: power, tail_param: 0.5}\n"
        error = self.assertCommandFails(3, "limit", config)
        self.assertIn("closed-form", str(error))

    def test_pseudo_expectation_of_summable_discount(self):
        config = "discount: {family: exp}\npseudo_expectation_sizes: [1000]\n"
        error = self.assertCommandFails(3, "limit", config)
        self.assertIn("non-summable-discount", str(error))

    def test_calibration_too_small(self):
        config = "scorers: [{kind: random}]\ncalibration_size: 1000\n"
        self.assertCommandFails(2, "limit", config)
