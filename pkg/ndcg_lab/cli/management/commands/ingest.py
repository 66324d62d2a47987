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

from django.utils.text import get_valid_filename

from ndcg_lab.cli.config import IngestRunConfig
from ndcg_lab.datagen.clicklog import click_log_prefix_curve, ingest_click_log
from ndcg_lab.experiments.reports import (
    IngestCurveReportGenerator,
    IngestReportGenerator,
    QueryDatasetReportGenerator,
)

from ._base_experiment_command import BaseExperimentCommand, RunOutput


def query_report_name(position: int, query_id: str) -> str:
    return f"queries/{get_valid_filename(f'{position:04d}-{query_id}')}.csv"


class Command(BaseExperimentCommand):
    help = "Label a click log and split it into one timestamp-ordered dataset per query."
    command_name = "ingest"

    def do_command(self, config: IngestRunConfig, runner):
        queries = ingest_click_log(config.path, config.rule(), config.score_columns)
        reports = {"ingest.csv": IngestReportGenerator(queries).generate()}
        datasets = {}
        for position, (query_id, log) in enumerate(queries.items()):
            name = query_report_name(position, query_id)
            reports[name] = QueryDatasetReportGenerator(log).generate()
            datasets[query_id] = name
            self.stdout.write(f"{query_id}: {len(log)} items")
        if config.prefix_sizes:
            measure = config.measure()
            points = click_log_prefix_curve(
                queries, measure.discount, config.prefix_sizes, measure.tie_break
            )
            reports["ingest_curve.csv"] = IngestCurveReportGenerator(points).generate()
        return RunOutput(
            reports,
            {
                "queries": len(queries),
                "items": sum(len(log) for log in queries.values()),
                "datasets": datasets,
            },
        )
