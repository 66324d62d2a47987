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

from dataclasses import asdict

from django.conf import settings

from ndcg_lab.cli.config import NonconvergeRunConfig
from ndcg_lab.experiments.nonconvergence import nonconvergence_test
from ndcg_lab.experiments.reports import NonconvergenceReportGenerator

from ._base_experiment_command import BaseExperimentCommand, RunOutput


class Command(BaseExperimentCommand):
    help = "Frequencies of high and low NDCG values under a summable discount."
    command_name = "nonconverge"

    def do_command(self, config: NonconvergeRunConfig, runner):
        floors = tuple(config.floors or settings.NDCG_LAB_NONCONVERGENCE_FLOORS)
        measure = config.measure()
        report = nonconvergence_test(
            config.world(),
            measure,
            config.sizes(),
            config.trials,
            config.theta_high,
            config.theta_low,
            floors,
            config.seed,
            runner,
            config.oracle_depth,
        )
        self.stdout.write(f"Verdict for {measure.label}: {report.verdict}")
        return RunOutput(
            {"nonconverge.csv": NonconvergenceReportGenerator(report).generate()},
            {
                "measure": measure.label,
                "scorer": report.scorer,
                "theta_high": report.theta_high,
                "theta_low": report.theta_low,
                "floors": list(floors),
                "verdict": report.verdict,
                "sd_not_shrinking": report.sd_not_shrinking,
                "oracle": asdict(report.oracle) if report.oracle else None,
            },
        )
