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

"""Click-log ingestion.

Expected CSV layout (UTF-8, comma separated, ``.`` decimal point)::

    query_id,doc_id,timestamp,clicks,score_1[,score_2,...]

Timestamps are numbers or ISO-8601 strings. Rows of a query are ordered by
timestamp (file order breaks ties) so that prefixes model a growing corpus.
"""

import csv
import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Union

import numpy as np

from ndcg_lab.measures.discount import Discount
from ndcg_lab.measures.exceptions import DegenerateDataset
from ndcg_lab.measures.metrics import Dataset, Gain, GradeSet, TieBreak, ndcg

from .exceptions import ClickLogFormatError, DatagenError, UnknownScoreColumn

logger = logging.getLogger(__name__)

REQUIRED_COLUMNS = ("query_id", "doc_id", "timestamp", "clicks")


@dataclass(frozen=True)
class ClickLabelRule:
    """Grade 2 above ``hi`` clicks, grade 1 from ``lo`` to ``hi`` inclusive, else 0."""

    hi: int = 1000
    lo: int = 100
    gain: Gain = Gain.IDENTITY

    def __post_init__(self):
        if not 0 <= self.lo <= self.hi:
            raise DatagenError(
                f"click thresholds need 0 <= lo <= hi, got lo={self.lo} hi={self.hi}"
            )

    @property
    def grade_set(self) -> GradeSet:
        return GradeSet((2.0, 1.0, 0.0), self.gain)

    def grade(self, clicks: int) -> float:
        if clicks > self.hi:
            return 2.0
        if clicks >= self.lo:
            return 1.0
        return 0.0


@dataclass(frozen=True)
class ClickLogRow:
    line: int
    query_id: str
    doc_id: str
    timestamp: float
    timestamp_text: str
    clicks: int
    scores: tuple[float, ...]


@dataclass
class QueryLog:
    query_id: str
    score_columns: tuple[str, ...]
    rule: ClickLabelRule
    rows: list[ClickLogRow] = field(default_factory=list)

    def __len__(self):
        return len(self.rows)

    @property
    def grades(self) -> np.ndarray:
        return np.asarray([self.rule.grade(row.clicks) for row in self.rows], dtype=np.float64)

    def grade_counts(self) -> dict[float, int]:
        grades = self.grades
        return {g: int(np.sum(grades == g)) for g in self.rule.grade_set.grades}

    def dataset(self, column: str) -> Dataset:
        try:
            slot = self.score_columns.index(column)
        except ValueError:
            raise UnknownScoreColumn(f"unknown score column {column!r}", column=column)
        scores = np.asarray([row.scores[slot] for row in self.rows], dtype=np.float64)
        return Dataset(scores, self.grades, self.rule.grade_set)

    @property
    def datasets(self) -> dict[str, Dataset]:
        return {column: self.dataset(column) for column in self.score_columns}


def _parse_timestamp(text: str, line: int) -> float:
    try:
        return float(text)
    except ValueError:
        pass
    try:
        moment = datetime.fromisoformat(text)
    except ValueError:
        raise ClickLogFormatError(f"timestamp {text!r} is neither numeric nor ISO-8601", line=line)
    if moment.tzinfo is None:
        moment = moment.replace(tzinfo=timezone.utc)
    return moment.timestamp()


def _parse_row(record: list[str], line: int, slots: Sequence[int]) -> ClickLogRow:
    query_id, doc_id, timestamp_text, clicks_text = (value.strip() for value in record[:4])
    if not query_id:
        raise ClickLogFormatError("empty query_id", line=line)
    try:
        clicks = int(clicks_text)
    except ValueError:
        raise ClickLogFormatError(f"clicks {clicks_text!r} is not an integer", line=line)
    if clicks < 0:
        raise ClickLogFormatError(f"clicks must be nonnegative, got {clicks}", line=line)
    scores = []
    for slot in slots:
        text = record[slot].strip()
        try:
            value = float(text)
        except ValueError:
            raise ClickLogFormatError(f"score {text!r} is not a number", line=line)
        if not math.isfinite(value):
            raise ClickLogFormatError(f"score {text!r} is not finite", line=line)
        scores.append(value)
    return ClickLogRow(
        line=line,
        query_id=query_id,
        doc_id=doc_id,
        timestamp=_parse_timestamp(timestamp_text, line),
        timestamp_text=timestamp_text,
        clicks=clicks,
        scores=tuple(scores),
    )


def read_click_log(
    lines: Iterable[str],
    rule: ClickLabelRule = ClickLabelRule(),
    score_columns: Optional[Sequence[str]] = None,
) -> dict[str, QueryLog]:
    """Parse click-log CSV text into per-query logs, in first-appearance order."""
    reader = csv.reader(lines)
    header = next(reader, None)
    if header is None:
        raise ClickLogFormatError("the click log is empty", line=1)
    header = [column.strip() for column in header]
    if tuple(header[:4]) != REQUIRED_COLUMNS or len(header) < 5:
        raise ClickLogFormatError(
            f"header must start with {','.join(REQUIRED_COLUMNS)} followed by score columns",
            line=reader.line_num,
        )
    available = header[4:]
    if len(set(available)) != len(available):
        raise ClickLogFormatError(f"duplicate score columns in {available}", line=reader.line_num)
    selected = tuple(score_columns) if score_columns else tuple(available)
    for column in selected:
        if column not in available:
            raise UnknownScoreColumn(
                f"score column {column!r} is not in the header {available}", column=column
            )
    slots = [4 + available.index(column) for column in selected]

    queries: dict[str, QueryLog] = {}
    for record in reader:
        if not record or all(not value.strip() for value in record):
            continue
        if len(record) != len(header):
            raise ClickLogFormatError(
                f"expected {len(header)} fields, got {len(record)}", line=reader.line_num
            )
        row = _parse_row(record, reader.line_num, slots)
        log = queries.get(row.query_id)
        if log is None:
            log = queries[row.query_id] = QueryLog(row.query_id, selected, rule)
        log.rows.append(row)

    for log in queries.values():
        log.rows.sort(key=lambda row: (row.timestamp, row.line))
    logger.info(
        f"Read {sum(len(log) for log in queries.values())} rows for {len(queries)} queries."
    )
    return queries


def ingest_click_log(
    path: Union[str, Path],
    rule: ClickLabelRule = ClickLabelRule(),
    score_columns: Optional[Sequence[str]] = None,
) -> dict[str, QueryLog]:
    with open(path, newline="", encoding="utf-8-sig") as handle:
        return read_click_log(handle, rule, score_columns)


@dataclass(frozen=True)
class PrefixPoint:
    query_id: str
    column: str
    n: int
    ndcg: Optional[float]


def click_log_prefix_curve(
    queries: dict[str, QueryLog],
    discount: Discount,
    sizes: Sequence[int],
    tie_break: TieBreak = TieBreak.BY_INDEX,
) -> list[PrefixPoint]:
    """NDCG of every score column on the first ``n`` rows of each query.

    Sizes larger than a query are skipped; prefixes without any positive grade
    are kept with an empty value.
    """
    points = []
    for query_id, log in queries.items():
        for column, data in log.datasets.items():
            for n in sizes:
                if n > len(data):
                    continue
                try:
                    value = ndcg(data.prefix(n), discount, tie_break)
                except DegenerateDataset:
                    value = None
                points.append(PrefixPoint(query_id, column, int(n), value))
    return points
