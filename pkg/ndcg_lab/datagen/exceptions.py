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
class DatagenError(Exception):
    """Base data generation exception"""

    detail: str = ""

    def __str__(self):
        return self.detail or (self.__doc__ or "").strip()


@dataclass
class InvalidDistribution(DatagenError):
    """The conditional grade curves do not describe a valid distribution."""


@dataclass
class InvalidScorer(DatagenError):
    """The scorer parameters are outside of their admissible range."""


@dataclass
class SampleSizeExceeded(DatagenError):
    """More instances were requested than the stream may produce."""

    requested: int = 0
    limit: int = 0


@dataclass
class ClickLogFormatError(DatagenError):
    """A click-log row could not be parsed."""

    line: int = 0

    def __str__(self):
        return f"line {self.line}: {self.detail}"


@dataclass
class UnknownScoreColumn(DatagenError):
    """A requested score column is missing from the click-log header."""

    column: str = ""


@dataclass
class InvalidCalibration(DatagenError):
    """The calibration sample is too small or the binning too coarse or too fine."""
