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

"""CSV reports and the JSON run manifest.

Reports hold no wall-clock or host-dependent content, so a run repeated with
the same configuration and seed writes the same bytes.
"""

import csv
import io
import json
import platform
from abc import ABC, abstractmethod
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any, Optional

import numpy as np

from ndcg_lab.datagen.clicklog import PrefixPoint, QueryLog
from ndcg_lab.main.version_info import VersionInfo

from .convergence import CurvePoint, LimitGap
from .distinguish import DistinguishReport
from .nonconvergence import NonconvergenceReport

UNDECIDED = "Undecided"


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return value


class BaseReportGenerator(ABC):
    header: tuple[str, ...] = ()

    @abstractmethod
    def rows(self) -> Iterable[Sequence]:
        pass

    def generate(self) -> str:
        output = io.StringIO()
        writer = csv.writer(output, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows():
            writer.writerow([_cell(value) for value in row])
        return output.getvalue()


class CurveReportGenerator(BaseReportGenerator):
    """
    Returns a CSV report of a convergence curve.
    """

    header = ("n", "scorer", "mean", "sd", "ci", "trials", "skipped")

    def __init__(self, points: Sequence[CurvePoint]):
        self.points = points

    def rows(self):
        for p in self.points:
            yield p.n, p.scorer, p.mean, p.sd, p.ci, p.trials, p.skipped


class LimitGapReportGenerator(BaseReportGenerator):
    header = ("n", "scorer", "mean", "limit", "residual")

    def __init__(self, gap: LimitGap):
        self.gap = gap

    def rows(self):
        for p in self.gap.points:
            yield p.n, p.scorer, p.mean, p.limit, p.residual


class DistinguishReportGenerator(BaseReportGenerator):
    """
    Returns a CSV report of flip rates, one row per starting size.
    """

    header = (
        "N",
        "flip_rate",
        "ties",
        "winner",
        "mean_difference",
        "se_difference",
        "smoothed_flip_rate",
        "violation",
    )

    def __init__(self, report: DistinguishReport):
        self.report = report

    def rows(self):
        for row in self.report.rows:
            yield (
                row.N,
                row.flip_rate,
                row.ties,
                UNDECIDED if row.winner is None else row.winner,
                row.mean_difference,
                row.se_difference,
                row.smoothed_flip_rate,
                row.violation,
            )


class NonconvergenceReportGenerator(BaseReportGenerator):
    header = ("n", "freq_high", "freq_low", "mean", "sd", "trials", "skipped")

    def __init__(self, report: NonconvergenceReport):
        self.report = report

    def rows(self):
        for row in self.report.rows:
            yield row.n, row.freq_high, row.freq_low, row.mean, row.sd, row.trials, row.skipped


class IngestReportGenerator(BaseReportGenerator):
    """
    Returns a CSV report of item and grade counts per query.
    """

    def __init__(self, queries: Mapping[str, QueryLog]):
        self.queries = queries
        grades = next(iter(queries.values())).rule.grade_set.grades if queries else ()
        self.grades = grades
        self.header = ("query_id", "items", *(f"grade_{g:g}" for g in grades))

    def rows(self):
        for query_id, log in self.queries.items():
            counts = log.grade_counts()
            yield (query_id, len(log), *(counts[g] for g in self.grades))


class IngestCurveReportGenerator(BaseReportGenerator):
    header = ("query_id", "column", "n", "ndcg")

    def __init__(self, points: Sequence[PrefixPoint]):
        self.points = points

    def rows(self):
        for p in self.points:
            yield p.query_id, p.column, p.n, p.ndcg


class QueryDatasetReportGenerator(BaseReportGenerator):
    """
    Returns the labelled dataset of one query in timestamp order.
    """

    def __init__(self, log: QueryLog):
        self.log = log
        self.header = ("doc_id", "timestamp", "clicks", "grade", *log.score_columns)

    def rows(self):
        for row in self.log.rows:
            yield (
                row.doc_id,
                row.timestamp_text,
                row.clicks,
                self.log.rule.grade(row.clicks),
                *row.scores,
            )


def write_report(out_dir: Path, name: str, text: str) -> Path:
    path = Path(out_dir) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
    return path


def versions() -> dict[str, str]:
    info = VersionInfo()
    return {
        "ndcg_lab": info.version,
        "git_commit": info.git_commit,
        "numpy": np.__version__,
        "python": platform.python_version(),
    }


def build_manifest(
    command: str,
    config: Mapping[str, Any],
    seed: int,
    outputs: Sequence[str],
    results: Optional[Mapping[str, Any]] = None,
) -> dict[str, Any]:
    return {
        "command": command,
        "config": dict(config),
        "seed": seed,
        "outputs": sorted(outputs),
        "results": dict(results or {}),
        "versions": versions(),
    }


def write_manifest(out_dir: Path, manifest: Mapping[str, Any], name: str = "manifest.json") -> Path:
    text = json.dumps(manifest, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    return write_report(out_dir, name, text)
