# File: algorithms/golden_section.py
# Golden-section line search (maximization)

import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from pathway.models import GoldenSectionConfig
from utils.errors import InvalidInterval

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


@dataclass
class GoldenSectionResult:
    x: float
    value: float
    iterations: int
    lower: float
    upper: float
    evaluations: int

    def __iter__(self) -> Iterator[float]:
        # unpacks as (x, value)
        yield self.x
        yield self.value


def required_iterations(width: float, tolerance: float) -> int:
    if width <= tolerance:
        return 0
    return int(math.ceil(math.log(tolerance / width) / math.log(INV_PHI)))


def golden_section_search(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    config: Optional[GoldenSectionConfig] = None,
) -> GoldenSectionResult:
    """
    Golden-section search for the maximum of f on [lo, hi].

    f is assumed unimodal on the interval. Each iteration keeps the
    sub-interval around the better interior point and shrinks the bracket
    by INV_PHI, reusing one point, so an iteration costs one evaluation.
    Stops once the bracket is no wider than the tolerance or after
    max_iterations. Returns the better of the two final interior points.
    """
    config = config or GoldenSectionConfig()
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise InvalidInterval(f"need finite lo < hi, got [{lo}, {hi}]")

    a, b = float(lo), float(hi)
    h = b - a
    n = min(required_iterations(h, config.tolerance), config.max_iterations)

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)
    evaluations = 2

    for _ in range(n):
        if yc > yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)
        evaluations += 1

    x, value = (c, yc) if yc > yd else (d, yd)
    logger.debug(f"Golden section on [{lo}, {hi}]: {n} iterations, x={x:.6f}, f={value:.6f}")
    return GoldenSectionResult(x=x, value=value, iterations=n, lower=a, upper=b, evaluations=evaluations)
