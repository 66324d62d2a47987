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

from ndcg_lab.cli.config import DistinguishRunConfig
from ndcg_lab.experiments.distinguish import distinguish
from ndcg_lab.experiments.reports import UNDECIDED, DistinguishReportGenerator

from ._base_experiment_command import BaseExperimentCommand, RunOutput


class Command(BaseExperimentCommand):
    help = "Flip rates of the paired comparison of two scorers."
    command_name = "distinguish"

    def do_command(self, config: DistinguishRunConfig, runner):
        world = config.world()
        measure = config.measure()
        report = distinguish(world, measure, config.sizes(), config.trials, config.seed, runner)
        winner = UNDECIDED if report.winner is None else report.scorers[report.winner]
        self.stdout.write(f"Winner at N={report.grid[-1]}: {winner}")
        return RunOutput(
            {"distinguish.csv": DistinguishReportGenerator(report).generate()},
            {
                "measure": measure.label,
                "scorers": list(report.scorers),
                "winner": winner,
                "decay_slope": report.decay_slope,
                "violations": report.violations,
            },
        )
