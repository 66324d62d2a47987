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

"""Run configuration of the experiment commands.

A configuration is a YAML mapping whose ``command`` key selects the schema::

    command: curve
    seed: 7
    discount: {family: power, beta: 0.5}
    grades:
      grades: [1, 0]
      curves: [{kind: affine, intercept: 0.0, slope: 1.0}]
    scorers: [{kind: canonical}]
    n_grid: [100, 1000, 10000]
    trials: 50

A ``manifest.json`` written by an earlier run is accepted as well; its
``config`` block is used. Sizes accept float notation such as ``1e5``.
"""

import logging
from pathlib import Path
from typing import Annotated, Any, Literal, Optional, Union

import yaml
from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PrivateAttr,
    TypeAdapter,
    ValidationError,
    model_validator,
)

from ndcg_lab.datagen.clicklog import ClickLabelRule
from ndcg_lab.datagen.curves import (
    AffineCurve,
    PiecewiseLinearCurve,
    PolynomialCurve,
    StepCurve,
    top_fraction_indicator,
)
from ndcg_lab.datagen.distribution import DistributionSpec
from ndcg_lab.datagen.exceptions import DatagenError
from ndcg_lab.datagen.scorers import (
    CanonicalScorer,
    Distortion,
    IndependentNoiseScorer,
    MonotoneDistortScorer,
    PartialCorruptScorer,
    random_scorer,
)
from ndcg_lab.experiments.distinguish import GRID_POINTS_PER_DECADE, geometric_grid
from ndcg_lab.experiments.exceptions import ExperimentError
from ndcg_lab.experiments.nonconvergence import ORACLE_DEPTH
from ndcg_lab.experiments.protocol import World
from ndcg_lab.measures.discount import (
    CustomDiscount,
    CutoffKind,
    CutoffRule,
    ExponentialDiscount,
    LogInverseDiscount,
    PowerDiscount,
    TailRule,
    ZipfianDiscount,
)
from ndcg_lab.measures.exceptions import MeasureError
from ndcg_lab.measures.metrics import Gain, GradeSet, NdcgMeasure, TieBreak

from .exceptions import ConfigError

logger = logging.getLogger(__name__)


def _integral(value):
    if isinstance(value, str):
        try:
            value = float(value)
        except ValueError:
            return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return value


Size = Annotated[int, BeforeValidator(_integral), Field(ge=1)]
Seed = Annotated[int, BeforeValidator(_integral), Field(ge=0, le=2**64 - 1)]


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid")


class _Buildable(_Model):
    """A block that builds a library object, checked while the config is validated."""

    _built: Any = PrivateAttr(default=None)

    def _construct(self):
        raise NotImplementedError

    @model_validator(mode="after")
    def _construct_now(self):
        try:
            self._built = self._construct()
        except (MeasureError, DatagenError, ExperimentError) as e:
            raise ValueError(str(e)) from e
        return self

    def build(self):
        return self._built


# -- discounts -------------------------------------------------------------


class CutoffConfig(_Buildable):
    kind: CutoffKind
    k: Optional[Size] = None
    c: Optional[float] = None
    gamma: Optional[float] = None

    def _construct(self):
        return CutoffRule(self.kind, k=self.k, c=self.c, gamma=self.gamma)


class _DiscountConfig(_Buildable):
    scale: float = 1.0
    cutoff: Optional[CutoffConfig] = None

    @property
    def _common(self) -> dict:
        return {"scale": self.scale, "cutoff": self.cutoff.build() if self.cutoff else None}


class LogDiscountConfig(_DiscountConfig):
    family: Literal["log"]

    def _construct(self):
        return LogInverseDiscount(**self._common)


class PowerDiscountConfig(_DiscountConfig):
    family: Literal["power"]
    beta: float

    def _construct(self):
        return PowerDiscount(beta=self.beta, **self._common)


class ZipfianDiscountConfig(_DiscountConfig):
    family: Literal["zipfian"]

    def _construct(self):
        return ZipfianDiscount(**self._common)


class ExponentialDiscountConfig(_DiscountConfig):
    family: Literal["exp"]
    base: float = 2.0

    def _construct(self):
        return ExponentialDiscount(base=self.base, **self._common)


class CustomDiscountConfig(_DiscountConfig):
    family: Literal["custom"]
    values: list[float]
    tail: TailRule = TailRule.POWER
    tail_param: Optional[float] = None

    def _construct(self):
        return CustomDiscount(
            values=tuple(self.values), tail=self.tail, tail_param=self.tail_param, **self._common
        )


DiscountConfig = Annotated[
    Union[
        LogDiscountConfig,
        PowerDiscountConfig,
        ZipfianDiscountConfig,
        ExponentialDiscountConfig,
        CustomDiscountConfig,
    ],
    Field(discriminator="family"),
]


# -- conditional grades ----------------------------------------------------


class AffineCurveConfig(_Buildable):
    kind: Literal["affine"]
    intercept: float = 0.0
    slope: float = 1.0

    def _construct(self):
        return AffineCurve(self.intercept, self.slope)


class PolynomialCurveConfig(_Buildable):
    kind: Literal["polynomial"]
    coefficients: list[float]

    def _construct(self):
        return PolynomialCurve(tuple(self.coefficients))


class PiecewiseLinearCurveConfig(_Buildable):
    kind: Literal["piecewise_linear"]
    knots: list[float]
    values: list[float]

    def _construct(self):
        return PiecewiseLinearCurve(tuple(self.knots), tuple(self.values))


class StepCurveConfig(_Buildable):
    kind: Literal["step"]
    knots: list[float]
    values: list[float]

    def _construct(self):
        return StepCurve(tuple(self.knots), tuple(self.values))


class TopFractionCurveConfig(_Buildable):
    kind: Literal["top_fraction"]
    p: float

    def _construct(self):
        return top_fraction_indicator(self.p)


CurveConfig = Annotated[
    Union[
        AffineCurveConfig,
        PolynomialCurveConfig,
        PiecewiseLinearCurveConfig,
        StepCurveConfig,
        TopFractionCurveConfig,
    ],
    Field(discriminator="kind"),
]


class GradesConfig(_Buildable):
    grades: list[float] = Field(default_factory=lambda: [1.0, 0.0])
    gain: Gain = Gain.IDENTITY
    curves: list[CurveConfig] = Field(default_factory=lambda: [AffineCurveConfig(kind="affine")])
    holder_alpha: Optional[float] = None
    holder_C: Optional[float] = None
    delta: Optional[float] = None

    def _construct(self):
        return DistributionSpec(
            GradeSet(tuple(self.grades), self.gain),
            tuple(curve.build() for curve in self.curves),
            holder_alpha=self.holder_alpha,
            holder_C=self.holder_C,
            delta=self.delta,
        )


# -- scorers ---------------------------------------------------------------


class CanonicalScorerConfig(_Buildable):
    kind: Literal["canonical"]
    name: str = "canonical"

    def _construct(self):
        return CanonicalScorer(self.name)


class MonotoneDistortScorerConfig(_Buildable):
    kind: Literal["monotone_distort"]
    name: str = "distorted"
    phi: Distortion = Distortion.EXP
    a: float = 1.0
    b: float = 0.0

    def _construct(self):
        return MonotoneDistortScorer(self.name, self.phi, self.a, self.b)


class PartialCorruptScorerConfig(_Buildable):
    kind: Literal["partial_corrupt"]
    name: str = "corrupt"
    intervals: list[tuple[float, float]] = Field(default_factory=lambda: [(0.8, 1.0)])

    def _construct(self):
        return PartialCorruptScorer(self.name, tuple(self.intervals))


class IndependentNoiseScorerConfig(_Buildable):
    kind: Literal["independent_noise"]
    name: str = "noisy"
    weight: float = 0.5

    def _construct(self):
        return IndependentNoiseScorer(self.name, self.weight)


class RandomScorerConfig(_Buildable):
    kind: Literal["random"]
    name: str = "random"

    def _construct(self):
        return random_scorer(self.name)


ScorerConfig = Annotated[
    Union[
        CanonicalScorerConfig,
        MonotoneDistortScorerConfig,
        PartialCorruptScorerConfig,
        IndependentNoiseScorerConfig,
        RandomScorerConfig,
    ],
    Field(discriminator="kind"),
]


# -- commands --------------------------------------------------------------


class GridConfig(_Model):
    """Geometric size grid from ``start`` to ``stop``."""

    start: Size
    stop: Size
    per_decade: Size = GRID_POINTS_PER_DECADE

    @model_validator(mode="after")
    def _ordered(self):
        if self.stop <= self.start:
            raise ValueError(f"stop must exceed start, got {self.start} and {self.stop}")
        return self

    def sizes(self) -> list[int]:
        return geometric_grid(self.start, self.stop, self.per_decade)


class _RunConfig(_Model):
    seed: Optional[Seed] = None
    discount: DiscountConfig = Field(default_factory=lambda: LogDiscountConfig(family="log"))
    tie_break: TieBreak = TieBreak.BY_INDEX

    def measure(self) -> NdcgMeasure:
        return NdcgMeasure(self.discount.build(), self.tie_break)


class _ExperimentConfig(_RunConfig):
    grades: GradesConfig = Field(default_factory=GradesConfig)
    scorers: list[ScorerConfig] = Field(
        default_factory=lambda: [CanonicalScorerConfig(kind="canonical")], min_length=1
    )
    n_grid: Optional[list[Size]] = None
    grid: Optional[GridConfig] = None

    @model_validator(mode="after")
    def _one_grid(self):
        if (self.n_grid is None) == (self.grid is None):
            raise ValueError("give exactly one of n_grid and grid")
        names = [scorer.name for scorer in self.scorers]
        if len(set(names)) != len(names):
            raise ValueError(f"scorer names must be unique, got {names}")
        return self

    def sizes(self) -> list[int]:
        return list(self.n_grid) if self.n_grid is not None else self.grid.sizes()

    def world(self) -> World:
        return World(self.grades.build(), tuple(scorer.build() for scorer in self.scorers))


class CurveRunConfig(_ExperimentConfig):
    command: Literal["curve"]
    trials: Size = 50


class DistinguishRunConfig(_ExperimentConfig):
    command: Literal["distinguish"]
    trials: Size = 200


class NonconvergeRunConfig(_ExperimentConfig):
    command: Literal["nonconverge"]
    trials: Size = 500
    theta_high: float = 0.6
    theta_low: float = 0.3
    floors: Optional[tuple[float, float]] = None
    oracle_depth: Size = ORACLE_DEPTH


class LimitRunConfig(_RunConfig):
    command: Literal["limit"]
    grades: GradesConfig = Field(default_factory=GradesConfig)
    scorers: list[ScorerConfig] = Field(
        default_factory=lambda: [CanonicalScorerConfig(kind="canonical")], min_length=1
    )
    pseudo_expectation_sizes: list[Size] = Field(default_factory=list)
    calibration_size: Optional[Size] = None
    calibration_bins: Optional[Size] = None

    @model_validator(mode="after")
    def _binary_pseudo_expectation(self):
        if self.pseudo_expectation_sizes and len(self.grades.grades) != 2:
            raise ValueError("pseudo-expectations are defined for binary grades only")
        return self


class IngestRunConfig(_RunConfig):
    command: Literal["ingest"]
    path: str
    hi: int = Field(default=1000, ge=0)
    lo: int = Field(default=100, ge=0)
    gain: Gain = Gain.IDENTITY
    score_columns: Optional[list[str]] = None
    prefix_sizes: list[Size] = Field(default_factory=list)

    @model_validator(mode="after")
    def _thresholds(self):
        if self.lo > self.hi:
            raise ValueError(f"lo must not exceed hi, got lo={self.lo} hi={self.hi}")
        return self

    def rule(self) -> ClickLabelRule:
        return ClickLabelRule(hi=self.hi, lo=self.lo, gain=self.gain)


RunConfig = Annotated[
    Union[
        CurveRunConfig,
        LimitRunConfig,
        DistinguishRunConfig,
        NonconvergeRunConfig,
        IngestRunConfig,
    ],
    Field(discriminator="command"),
]

_adapter: TypeAdapter = TypeAdapter(RunConfig)


TAG_KEYS = ("command", "family", "kind")


def _is_tag(node: yaml.MappingNode, key) -> bool:
    return any(k.value in TAG_KEYS and getattr(v, "value", None) == key for k, v in node.value)


def _locate(node: Optional[yaml.Node], loc: tuple) -> tuple[Optional[int], str]:
    """Line and dotted field of a validation error location."""
    line = node.start_mark.line + 1 if node is not None else None
    path = []
    for key in loc:
        if isinstance(node, yaml.MappingNode):
            match = next(((k, v) for k, v in node.value if k.value == key), None)
            if match is None:
                # union members show up as their tag value
                if not _is_tag(node, key):
                    path.append(str(key))
                continue
            line = match[0].start_mark.line + 1
            node = match[1]
        elif (
            isinstance(node, yaml.SequenceNode)
            and isinstance(key, int)
            and 0 <= key < len(node.value)
        ):
            node = node.value[key]
            line = node.start_mark.line + 1
        path.append(str(key))
    return line, ".".join(path)


def _config_node(root: Optional[yaml.Node]) -> Optional[yaml.Node]:
    if isinstance(root, yaml.MappingNode):
        for key, value in root.value:
            if key.value == "config" and isinstance(value, yaml.MappingNode):
                return value
    return root


def parse_config(text: str, command: Optional[str] = None):
    """Validate a YAML configuration, or the ``config`` block of a manifest."""
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
        document = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        raise ConfigError(
            str(getattr(e, "problem", None) or e), line=mark.line + 1 if mark else None
        )
    if document is None:
        document = {}
    if not isinstance(document, dict):
        raise ConfigError("the configuration must be a mapping", line=1)
    if isinstance(document.get("config"), dict):
        logger.info("Reading the run configuration from a manifest.")
        document = dict(document["config"])
        root = _config_node(root)
    else:
        document = dict(document)

    if command is not None:
        given = document.setdefault("command", command)
        if given != command:
            line, _ = _locate(root, ("command",))
            raise ConfigError(
                f"the configuration is for {given!r}, not {command!r}", field="command", line=line
            )
    try:
        return _adapter.validate_python(document)
    except ValidationError as e:
        error = e.errors()[0]
        loc = tuple(error["loc"])
        if loc and loc[0] == document.get("command"):
            loc = loc[1:]
        line, field = _locate(root, loc)
        raise ConfigError(error["msg"], field=field, line=line)


def load_config(path: Union[str, Path], command: Optional[str] = None):
    with open(path, encoding="utf-8") as handle:
        return parse_config(handle.read(), command)


def dump_config(config) -> dict:
    return config.model_dump(mode="json")
