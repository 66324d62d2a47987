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
from abc import abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, cast

from django.apps import apps
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from ndcg_lab.cli.config import dump_config, load_config, parse_config
from ndcg_lab.cli.exceptions import ConfigError
from ndcg_lab.datagen.exceptions import ClickLogFormatError, DatagenError
from ndcg_lab.experiments.exceptions import ExperimentError
from ndcg_lab.experiments.reports import build_manifest, write_manifest, write_report
from ndcg_lab.experiments.runner import TrialRunner
from ndcg_lab.experiments.timing import time_activity
from ndcg_lab.limits.exceptions import AssumptionViolated
from ndcg_lab.measures.exceptions import MeasureError

logger = logging.getLogger(__name__)

CONFIG_ERROR = 2
ASSUMPTION_ERROR = 3
IO_ERROR = 4


@dataclass
class RunOutput:
    reports: dict[str, str] = field(default_factory=dict)
    results: dict[str, Any] = field(default_factory=dict)


class BaseExperimentCommand(BaseCommand):
    """Common flags, config resolution, artifact writing and exit codes."""

    command_name: str

    def add_arguments(self, parser):
        parser.add_argument(
            "--config",
            help="YAML run configuration, or the manifest.json of an earlier run.",
        )
        parser.add_argument(
            "--seed",
            type=int,
            help="Master seed. Overrides the configuration; defaults to NDCG_LAB_DEFAULT_SEED.",
        )
        parser.add_argument(
            "--out", help="Output directory. Defaults to NDCG_LAB_OUTPUT_DIR.", default=None
        )
        parser.add_argument(
            "--threads",
            type=int,
            default=1,
            help="Worker threads, capped at NDCG_LAB_MAX_THREADS. Results do not depend on it.",
        )

    def resolve_config(self, options):
        if options["config"]:
            config = load_config(options["config"], self.command_name)
        else:
            config = parse_config("", self.command_name)
        seed = options["seed"]
        if seed is None:
            seed = config.seed if config.seed is not None else settings.NDCG_LAB_DEFAULT_SEED
        if seed < 0:
            raise ConfigError(f"the seed must be nonnegative, got {seed}", field="seed")
        return config.model_copy(update={"seed": seed})

    def handle(self, *args, **options):
        out_dir = Path(options["out"] or settings.NDCG_LAB_OUTPUT_DIR)
        threads = options["threads"]
        try:
            if threads < 1:
                raise ConfigError(f"--threads must be positive, got {threads}", field="threads")
            config = self.resolve_config(options)
            from ndcg_lab.experiments.apps import ExperimentsConfig

            experiments_config = cast(ExperimentsConfig, apps.get_app_config("experiments"))
            runner = experiments_config.get_trial_runner(threads)
            self.threads = min(threads, settings.NDCG_LAB_MAX_THREADS)

            with time_activity(f"{self.command_name} run"):
                output = self.do_command(config, runner)
            with time_activity(f"{self.command_name} artifacts"):
                for name, text in output.reports.items():
                    write_report(out_dir, name, text)
                manifest = build_manifest(
                    self.command_name,
                    dump_config(config),
                    config.seed,
                    list(output.reports),
                    output.results,
                )
                write_manifest(out_dir, manifest)
        except ConfigError as e:
            raise CommandError(e, returncode=CONFIG_ERROR)
        except AssumptionViolated as e:
            raise CommandError(e, returncode=ASSUMPTION_ERROR)
        except (OSError, ClickLogFormatError) as e:
            raise CommandError(e, returncode=IO_ERROR)
        except (MeasureError, DatagenError, ExperimentError) as e:
            raise CommandError(e, returncode=CONFIG_ERROR)

        self.stdout.write(
            f"Wrote {', '.join(sorted([*output.reports, 'manifest.json']))} to {out_dir}."
        )

    @abstractmethod
    def do_command(self, config, runner: TrialRunner) -> RunOutput:
        pass
