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
from dataclasses import asdict

from ndcg_lab.cli.config import CurveRunConfig
from ndcg_lab.experiments.convergence import convergence_curve, limit_gap, sd_trends
from ndcg_lab.experiments.reports import CurveReportGenerator, LimitGapReportGenerator
from ndcg_lab.limits.asymptotic import asymptotic_limit
from ndcg_lab.limits.exceptions import AssumptionViolated
from ndcg_lab.measures.discount import FeasibilityClass

from ._base_experiment_command import BaseExperimentCommand, RunOutput

logger = logging.getLogger(__name__)


def classification_result(discount) -> dict:
    classification = discount.classify()
    if classification.value == FeasibilityClass.INFEASIBLE:
        logger.warning(f"{discount.label} is infeasible: {classification.reason}.")
    return {
        "value": classification.value.value,
        "reason": classification.reason,
        "heuristic": classification.heuristic,
        "warning": classification.warning,
    }


class Command(BaseExperimentCommand):
    help = "Mean NDCG of every scorer along a size grid."
    command_name = "curve"

    def do_command(self, config: CurveRunConfig, runner):
        world = config.world()
        measure = config.measure()
        results = {
            "measure": measure.label,
            "classification": classification_result(measure.discount),
        }
        points = convergence_curve(
            world, measure, config.sizes(), config.trials, config.seed, runner
        )
        results["sd_trends"] = [
            {**asdict(trend), "shrinking": trend.shrinking} for trend in sd_trends(points)
        ]
        output = RunOutput({"curve.csv": CurveReportGenerator(points).generate()}, results)

        try:
            limit = asymptotic_limit(world.grades, measure.discount)
        except AssumptionViolated as e:
            logger.info(f"No closed-form limit to compare the curve with: {e}")
            return output
        results["limit"] = {"value": limit.value, "rule": limit.rule, "theorem": limit.theorem}
        # The limit describes the canonical ranking only.
        canonical = {scorer.name for scorer in world.scorers if scorer.is_order_preserving}
        comparable = [point for point in points if point.scorer in canonical]
        if limit.value is not None and comparable:
            gap = limit_gap(comparable, limit)
            output.reports["limit_gap.csv"] = LimitGapReportGenerator(gap).generate()
            results["settling"] = gap.settling
        return output
