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

"""Trial runners.

Trials are independent: each one derives its random streams from the master
seed and its own index. Runners only decide where trials execute; results
always come back in trial order.
"""

import logging
from abc import ABC, abstractmethod
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")


class TrialRunner(ABC):
    threads: int = 1

    @abstractmethod
    def map(self, trial_fn: Callable[[int], T], trials: int) -> list[T]:
        pass


class SerialTrialRunner(TrialRunner):
    def map(self, trial_fn, trials):
        return [trial_fn(trial) for trial in range(trials)]


class ThreadedTrialRunner(TrialRunner):
    def __init__(self, threads: int):
        if threads < 1:
            raise ValueError(f"threads must be positive, got {threads}")
        self.threads = threads

    def map(self, trial_fn, trials):
        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            return list(executor.map(trial_fn, range(trials)))


def make_trial_runner(threads: int) -> TrialRunner:
    if threads <= 1:
        return SerialTrialRunner()
    logger.debug(f"Running trials on {threads} threads.")
    return ThreadedTrialRunner(threads)
