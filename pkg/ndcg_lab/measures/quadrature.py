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

"""Adaptive Simpson quadrature.

The integrands met here (discounts, conditional relevance curves after the
endpoint substitutions) are smooth between known breakpoints, so a plain
adaptive Simpson rule with Richardson correction is enough. Breakpoints are
integrated piecewise so that kinks and jumps of tabulated curves fall on panel
boundaries.
"""

import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass

DEFAULT_TOLERANCE = 1e-10
DEFAULT_MAX_DEPTH = 60
# Panels whose error estimate is below this fraction of their own value are
# accepted even if the absolute tolerance was not met (round-off floor).
RELATIVE_FLOOR = 1e-13
MAX_EVALUATIONS = 2_000_000


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float
    evaluations: int
    exhausted: bool = False


def _simpson(fa: float, fm: float, fb: float, h: float) -> float:
    return h / 3.0 * (fa + 4.0 * fm + fb)


def _integrate_panel(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float,
    rel_tol: float,
    max_depth: int,
    budget: int,
) -> QuadratureResult:
    fa = f(a)
    fb = f(b)
    m = (a + b) / 2.0
    fm = f(m)
    evaluations = 3
    whole = _simpson(fa, fm, fb, (b - a) / 2.0)

    total = 0.0
    compensation = 0.0
    error = 0.0
    exhausted = False
    stack = [(a, b, fa, fm, fb, whole, 0, tol)]
    while stack:
        a, b, fa, fm, fb, whole, depth, tol = stack.pop()
        m = (a + b) / 2.0
        h = (b - a) / 2.0
        flm = f((a + m) / 2.0)
        frm = f((m + b) / 2.0)
        evaluations += 2
        left = _simpson(fa, flm, fm, h / 2.0)
        right = _simpson(fm, frm, fb, h / 2.0)
        combined = left + right
        estimate = (combined - whole) / 15.0

        accept = abs(estimate) <= max(tol, rel_tol * abs(combined))
        if not accept and evaluations >= budget:
            accept = True
            exhausted = True
        if not accept and depth >= max_depth:
            accept = True
        if accept:
            # Compensated sum over accepted panels.
            y = (combined + estimate) - compensation
            t = total + y
            compensation = (t - total) - y
            total = t
            error += abs(estimate)
            continue
        stack.append((m, b, fm, frm, fb, right, depth + 1, tol / 2.0))
        stack.append((a, m, fa, flm, fm, left, depth + 1, tol / 2.0))

    return QuadratureResult(total, error, evaluations, exhausted)


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = DEFAULT_TOLERANCE,
    rel_tol: float = RELATIVE_FLOOR,
    max_depth: int = DEFAULT_MAX_DEPTH,
    breakpoints: Iterable[float] = (),
) -> QuadratureResult:
    """Integrate ``f`` over ``[a, b]`` by adaptive Simpson.

    Args:
        f: Integrand, evaluated at scalar points only.
        a: Lower bound.
        b: Upper bound.
        tol: Absolute error tolerance, halved at every subdivision.
        rel_tol: Per-panel relative acceptance floor.
        max_depth: Maximum subdivision depth of a panel.
        breakpoints: Points inside ``(a, b)`` where ``f`` is not smooth.

    Returns:
        The integral, the summed error estimate and the number of evaluations.
        ``exhausted`` is set when the evaluation budget ran out.
    """
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)
    if a > b:
        flipped = integrate(f, b, a, tol, rel_tol, max_depth, breakpoints)
        return QuadratureResult(
            -flipped.value, flipped.error, flipped.evaluations, flipped.exhausted
        )

    edges = [a, *sorted(x for x in set(breakpoints) if a < x < b), b]
    panels = len(edges) - 1
    values = []
    error = 0.0
    evaluations = 0
    exhausted = False
    for lo, hi in zip(edges, edges[1:]):
        if hi - lo <= 0.0:
            continue
        result = _integrate_panel(
            f,
            lo,
            hi,
            tol / panels,
            rel_tol,
            max_depth,
            max(MAX_EVALUATIONS - evaluations, 16),
        )
        values.append(result.value)
        error += result.error
        evaluations += result.evaluations
        exhausted = exhausted or result.exhausted
    return QuadratureResult(math.fsum(values), error, evaluations, exhausted)
