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
import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass

from ndcg_lab.measures.discount import Discount
from ndcg_lab.measures.quadrature import integrate

from .exceptions import AssumptionViolated

logger = logging.getLogger(__name__)

PSEUDO_EXPECTATION_RELATIVE_TOLERANCE = 1e-8


@dataclass(frozen=True)
class PseudoExpectation:
    n: int
    p: float
    unnormalized: float
    ideal: float
    error: float

    @property
    def normalized(self) -> float:
        return self.unnormalized / self.ideal


def pseudo_expectation(
    curve: Callable[[float], float],
    discount: Discount,
    n: int,
    p: float,
    breakpoints: Iterable[float] = (),
) -> PseudoExpectation:
    """``Ñ(n) = ∫₁ⁿ ȳ(1 - s/n) D(s) ds`` and its ratio to the ideal ``F(np)``.

    ``curve`` is the top-grade probability ``ȳ`` on the canonical scale and
    ``breakpoints`` its kinks, which are mapped onto the integration variable.
    """
    if discount.cutoff is not None:
        raise AssumptionViolated(f"{discount.label} is cut off", assumption="untruncated-discount")
    if discount.is_summable:
        raise AssumptionViolated(
            f"{discount.label} is summable", assumption="non-summable-discount"
        )
    if n < 2:
        raise AssumptionViolated(f"n must be at least 2, got {n}", assumption="size")
    if not 0.0 < p <= 1.0 or n * p <= 1.0:
        raise AssumptionViolated(
            f"the ideal prefix n*p = {n * p:g} must exceed one", assumption="positive-top-mass"
        )

    # s = e^v spreads the range [1, n] evenly on a log scale.
    log_n = math.log(n)
    kinks = [math.log(n * (1.0 - b)) for b in breakpoints if 0.0 <= b < 1.0 - 1.0 / n]
    ideal = discount.antiderivative(n * p)
    result = integrate(
        lambda v: curve(1.0 - math.exp(v) / n) * discount.density(math.exp(v)) * math.exp(v),
        0.0,
        log_n,
        tol=PSEUDO_EXPECTATION_RELATIVE_TOLERANCE * 1e-3 * discount.antiderivative(n),
        rel_tol=PSEUDO_EXPECTATION_RELATIVE_TOLERANCE,
        breakpoints=kinks,
    )
    logger.debug(f"Pseudo-expectation at n={n}: {result.value:.10g} over F(np)={ideal:.10g}")
    return PseudoExpectation(int(n), float(p), result.value, ideal, result.error)
