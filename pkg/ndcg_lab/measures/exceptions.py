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

from dataclasses import dataclass


@dataclass
class MeasureError(Exception):
    """Base ranking-measure exception"""

    detail: str = ""

    def __str__(self):
        return self.detail or (self.__doc__ or "").strip()


@dataclass
class InvalidDiscount(MeasureError):
    """The discount parameters are outside of their admissible range."""


@dataclass
class InvalidGradeSet(MeasureError):
    """Relevance grades must be strictly decreasing and at least two."""


@dataclass
class InvalidDataset(MeasureError):
    """The dataset is empty, misaligned or holds grades outside of its grade set."""


@dataclass
class DegenerateDataset(MeasureError):
    """Every item has zero gain so the ideal DCG is zero."""

    size: int = 0


@dataclass
class OracleSizeExceeded(MeasureError):
    """Exhaustive enumeration was requested for too many items."""

    size: int = 0
    limit: int = 0
