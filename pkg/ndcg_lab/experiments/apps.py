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

from django.apps import AppConfig
from django.conf import settings

from .runner import TrialRunner, make_trial_runner

logger = logging.getLogger(__name__)


class ExperimentsConfig(AppConfig):
    name = "ndcg_lab.experiments"
    verbose_name = "Monte Carlo experiments"

    def get_trial_runner(self, threads: int) -> TrialRunner:
        """A runner on at most ``NDCG_LAB_MAX_THREADS`` threads."""
        cap = settings.NDCG_LAB_MAX_THREADS
        if threads > cap:
            logger.warning(f"Capping {threads} requested threads to NDCG_LAB_MAX_THREADS={cap}.")
            threads = cap
        return make_trial_runner(max(threads, 1))
