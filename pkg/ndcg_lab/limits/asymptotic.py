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

"""Closed-form limits of NDCG as the dataset size grows.

All limits are expressed through the conditional grade curves on the canonical
scale: ``E[G | s]`` is the expected gain of an instance at canonical score
``s`` and ``R_j`` the probability that a grade is at least ``y_j``. Power
discounts have an integrable singularity ``(1 - s)^(-beta)`` at ``s = 1``; the
substitution ``u = (1 - s)^(1 - beta)`` turns it into a smooth integrand on a
finite range.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ndcg_lab.datagen.distribution import ConditionalGrades
from ndcg_lab.measures.discount import (
    CustomDiscount,
    CutoffKind,
    Discount,
    FeasibilityClass,
    LogInverseDiscount,
    PowerDiscount,
    ZipfianDiscount,
)
from ndcg_lab.measures.quadrature import integrate

from .exceptions import AssumptionViolated

logger = logging.getLogger(__name__)

LIMIT_TOLERANCE = 1e-11
# Grade masses below this are treated as absent.
MASS_FLOOR = 1e-12

# Result tag per rule, as (binary grades, general grades).
RESULT_TAGS = {
    "log": ("Thm1", "Thm1"),
    "power": ("Thm3", "Thm10"),
    "power-graded": ("Thm10", "Thm10"),
    "zipfian": ("Thm5", "Thm11"),
    "sublinear-cutoff": ("Thm7", "Thm11"),
    "linear-cutoff-log": ("Thm8", "Thm12"),
    "linear-cutoff-power": ("Thm9", "Thm13"),
    "summable-no-limit": ("Thm6", "Thm6"),
    "fixed-cutoff-no-limit": ("Thm6", "Thm6"),
}


@dataclass(frozen=True)
class LimitResult:
    """Limit of NDCG in probability, or ``value=None`` when there is none."""

    value: Optional[float]
    rule: str
    binary: bool
    assumptions_checked: tuple[tuple[str, bool], ...] = field(default_factory=tuple)
    quadrature_error_bound: float = 0.0
    explanation: str = ""

    @property
    def no_limit(self) -> bool:
        return self.value is None

    @property
    def theorem(self) -> str:
        binary_tag, graded_tag = RESULT_TAGS[self.rule]
        return binary_tag if self.binary else graded_tag


class _Checks:
    def __init__(self):
        self.items: list[tuple[str, bool]] = []

    def record(self, name: str, passed: bool, detail: str = "", required: bool = True):
        self.items.append((name, bool(passed)))
        if passed:
            return
        if required:
            raise AssumptionViolated(detail or f"{name} does not hold", assumption=name)
        logger.warning(f"Assumption {name} does not hold: {detail}")

    def __call__(self) -> tuple[tuple[str, bool], ...]:
        return tuple(self.items)


def grade_masses(grades: ConditionalGrades) -> np.ndarray:
    """``(R_0, ..., R_|Y|)`` with ``R_0 = 0`` and ``R_|Y| = 1``."""
    return grades.grade_masses()


def _check_masses(grades: ConditionalGrades, checks: _Checks):
    marginals = grades.marginals
    if grades.grade_set.is_binary:
        checks.record(
            "positive-top-mass",
            marginals[0] > MASS_FLOOR,
            f"Pr[Y = {grades.grade_set.grades[0]:g}] is zero",
        )
        return
    missing = [g for g, p in zip(grades.grade_set.grades, marginals) if p <= MASS_FLOOR]
    checks.record(
        "positive-grade-masses", not missing, f"grades {missing} have zero probability"
    )


def _check_continuity(grades: ConditionalGrades, checks: _Checks):
    checks.record(
        "continuous-curves",
        grades.continuous,
        "conditional grade curves are discontinuous; the limit is the formal value",
        required=False,
    )


def _top_gain(grades: ConditionalGrades) -> float:
    return float(grades.grade_set.gains[0])


def _power_numerator(grades: ConditionalGrades, beta: float, upper: float):
    """``(1 - beta) ∫_{1-c}^1 E[G|s] (1 - s)^(-beta) ds`` with ``upper = c^(1 - beta)``."""
    exponent = 1.0 / (1.0 - beta)
    breakpoints = [(1.0 - b) ** (1.0 - beta) for b in grades.breakpoints]
    return integrate(
        lambda u: grades.expected_gain(1.0 - u**exponent),
        0.0,
        upper,
        tol=LIMIT_TOLERANCE,
        breakpoints=breakpoints,
    )


def _linear_cutoff_index(masses: np.ndarray, c: float) -> int:
    """``t`` with ``R_t < c <= R_{t+1}``."""
    return int(np.sum(masses[1:] < c))


def _clip(value: float) -> float:
    return min(max(value, 0.0), 1.0)


def limit_power(grades: ConditionalGrades, beta: float) -> LimitResult:
    """Limit under ``D(r) = r^(-beta)`` without cutoff."""
    if not 0.0 < beta < 1.0:
        raise AssumptionViolated(f"beta must lie in (0, 1), got {beta}", assumption="beta-range")
    checks = _Checks()
    _check_masses(grades, checks)
    _check_continuity(grades, checks)

    numerator = _power_numerator(grades, beta, 1.0)
    masses = grades.grade_masses()
    gains = grades.grade_set.gains
    denominator = math.fsum(
        gains * (masses[1:] ** (1.0 - beta) - masses[:-1] ** (1.0 - beta))
    )
    binary = grades.grade_set.is_binary
    return LimitResult(
        value=_clip(numerator.value / denominator),
        rule="power" if binary else "power-graded",
        binary=binary,
        assumptions_checked=checks(),
        quadrature_error_bound=numerator.error / denominator,
        explanation=(
            f"power discount r^-{beta:g}: (1-beta) ∫ E[G|s](1-s)^-beta ds over "
            "Σ_j g_j (R_j^(1-beta) - R_(j-1)^(1-beta))"
        ),
    )


def _top_value(grades: ConditionalGrades, rule: str, explanation: str) -> LimitResult:
    checks = _Checks()
    _check_masses(grades, checks)
    _check_continuity(grades, checks)
    return LimitResult(
        value=_clip(grades.expected_gain(1.0) / _top_gain(grades)),
        rule=rule,
        binary=grades.grade_set.is_binary,
        assumptions_checked=checks(),
        explanation=explanation,
    )


def limit_zipfian(grades: ConditionalGrades) -> LimitResult:
    """Limit under ``D(r) = 1/r``: the relevance of the very top of the scale."""
    return _top_value(grades, "zipfian", "zipfian discount: E[G | s = 1] / g_1")


def _no_limit(grades: ConditionalGrades, rule: str, explanation: str) -> LimitResult:
    return LimitResult(
        value=None,
        rule=rule,
        binary=grades.grade_set.is_binary,
        assumptions_checked=(("non-summable-discount", False),),
        explanation=explanation,
    )


def limit_topk(grades: ConditionalGrades, discount: Discount) -> LimitResult:
    """Limit of NDCG truncated by the cutoff of ``discount``."""
    cutoff = discount.cutoff
    if cutoff is None:
        raise AssumptionViolated(f"{discount.label} has no cutoff", assumption="cutoff")
    if cutoff.kind == CutoffKind.FIXED_K:
        return _no_limit(
            grades,
            "fixed-cutoff-no-limit",
            f"a constant cutoff k={cutoff.k} behaves like a summable discount: "
            "NDCG keeps fluctuating and has no limit",
        )
    untruncated = discount.classify()
    if untruncated.value == FeasibilityClass.INFEASIBLE:
        return _no_limit(
            grades, "summable-no-limit", f"{discount.label} is summable: {untruncated.reason}"
        )
    if cutoff.kind == CutoffKind.SUBLINEAR_POWER:
        return _top_value(
            grades,
            "sublinear-cutoff",
            f"cutoff n^{cutoff.gamma:g} grows slower than n: E[G | s = 1] / g_1",
        )

    c = cutoff.c
    checks = _Checks()
    _check_masses(grades, checks)
    _check_continuity(grades, checks)
    masses = grades.grade_masses()
    gains = grades.grade_set.gains
    t = _linear_cutoff_index(masses, c)
    if isinstance(discount, LogInverseDiscount):
        numerator = integrate(
            grades.expected_gain,
            1.0 - c,
            1.0,
            tol=LIMIT_TOLERANCE,
            breakpoints=grades.breakpoints,
        )
        denominator = math.fsum(gains[:t] * np.diff(masses[: t + 1])) + gains[t] * (
            c - masses[t]
        )
        rule = "linear-cutoff-log"
        explanation = "cutoff c*n under 1/log(1+r): ∫_(1-c)^1 E[G|s] ds over the ideal mass"
    elif isinstance(discount, PowerDiscount):
        beta = discount.beta
        numerator = _power_numerator(grades, beta, c ** (1.0 - beta))
        powered = masses ** (1.0 - beta)
        denominator = math.fsum(gains[:t] * np.diff(powered[: t + 1])) + gains[t] * (
            c ** (1.0 - beta) - powered[t]
        )
        rule = "linear-cutoff-power"
        explanation = (
            f"cutoff c*n under r^-{beta:g}: (1-beta) ∫_(1-c)^1 E[G|s](1-s)^-beta ds "
            "over the ideal mass"
        )
    else:
        raise AssumptionViolated(
            f"no closed-form limit for {discount.label} with a linear cutoff",
            assumption="closed-form",
        )
    return LimitResult(
        value=_clip(numerator.value / denominator),
        rule=rule,
        binary=grades.grade_set.is_binary,
        assumptions_checked=checks(),
        quadrature_error_bound=numerator.error / denominator,
        explanation=explanation,
    )


def asymptotic_limit(grades: ConditionalGrades, discount: Discount) -> LimitResult:
    """The limit of ``NDCG_D`` for the given conditional grades."""
    if discount.cutoff is not None:
        return limit_topk(grades, discount)
    classification = discount.classify()
    if classification.value == FeasibilityClass.INFEASIBLE:
        return _no_limit(
            grades, "summable-no-limit", f"{discount.label} is summable: {classification.reason}"
        )
    if isinstance(discount, LogInverseDiscount):
        checks = _Checks()
        _check_masses(grades, checks)
        return LimitResult(
            value=1.0,
            rule="log",
            binary=grades.grade_set.is_binary,
            assumptions_checked=checks(),
            explanation="1/log(1+r) discount: NDCG tends to one for every ranking function",
        )
    if isinstance(discount, PowerDiscount):
        return limit_power(grades, discount.beta)
    if isinstance(discount, ZipfianDiscount):
        return limit_zipfian(grades)
    if isinstance(discount, CustomDiscount):
        raise AssumptionViolated(
            f"no closed-form limit for {discount.label} ({classification.reason})",
            assumption="closed-form",
        )
    raise AssumptionViolated(f"no limit rule for {discount.label}", assumption="closed-form")
