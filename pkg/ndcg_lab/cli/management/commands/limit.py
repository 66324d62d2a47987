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
import logging

from django.conf import settings

from ndcg_lab.cli.config import LimitRunConfig
from ndcg_lab.datagen.calibration import calibrate_scorer
from ndcg_lab.limits.asymptotic import LimitResult, asymptotic_limit
from ndcg_lab.limits.pseudo_expectation import pseudo_expectation

from ._base_experiment_command import BaseExperimentCommand, RunOutput
from .curve import classification_result

logger = logging.getLogger(__name__)


def limit_entry(scorer_name: str, calibrated: bool, limit: LimitResult) -> dict:
    return {
        "scorer": scorer_name,
        "calibrated": calibrated,
        "value": limit.value,
        "rule": limit.rule,
        "theorem": limit.theorem,
        "binary": limit.binary,
        "assumptions": {name: passed for name, passed in limit.assumptions_checked},
        "quadrature_error_bound": limit.quadrature_error_bound,
        "explanation": limit.explanation,
    }


class Command(BaseExperimentCommand):
    help = "Closed-form limit of NDCG for every configured scorer."
    command_name = "limit"

    def do_command(self, config: LimitRunConfig, runner):
        discount = config.discount.build()
        spec = config.grades.build()
        entries = []
        for scorer_config in config.scorers:
            scorer = scorer_config.build()
            grades = spec
            if not scorer.is_order_preserving:
                grades = calibrate_scorer(
                    spec,
                    scorer,
                    config.calibration_size or settings.NDCG_LAB_CALIBRATION_SIZE,
                    config.calibration_bins or settings.NDCG_LAB_CALIBRATION_BINS,
                    master_seed=config.seed,
                    threads=self.threads,
                )
            limit = asymptotic_limit(grades, discount)
            entry = limit_entry(scorer.name, grades is not spec, limit)
            if config.pseudo_expectation_sizes:
                p = float(grades.marginals[0])
                entry["pseudo_expectation"] = [
                    {
                        "n": value.n,
                        "unnormalized": value.unnormalized,
                        "ideal": value.ideal,
                        "normalized": value.normalized,
                        "error": value.error,
                    }
                    for value in (
                        pseudo_expectation(grades.top_curve, discount, n, p, grades.breakpoints)
                        for n in config.pseudo_expectation_sizes
                    )
                ]
            self.stdout.write(f"{scorer.name}: {limit.rule} -> {limit.value}")
            entries.append(entry)

        document = {
            "discount": discount.label,
            "classification": classification_result(discount),
            "limits": entries,
        }
        text = json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
        return RunOutput(
            {"limit.json": text},
            {"limits": {entry["scorer"]: entry["value"] for entry in entries}},
        )
