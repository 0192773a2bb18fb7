# File: utils/validators.py
# Checks for objects that may bypass pydantic validation (model_construct, mutation)

import math
import numbers
from typing import Iterable, Sequence

from utils.errors import InvalidParams, InvalidPlan, NonFiniteAction


def check_noise_params(params) -> None:
    """Re-check NoiseParams invariants: mu_t > 0, kappa in [0, 1], sigma >= 0"""
    from pathway.models import SERIES_ORDER

    series = getattr(params, "series", None)
    if not isinstance(series, dict):
        raise InvalidParams("noise parameters need a 'series' mapping")
    for sid in SERIES_ORDER:
        noise = series.get(sid)
        if noise is None:
            raise InvalidParams(f"missing price series {sid.value}")
        if not noise.reference or any(not math.isfinite(mu) or mu <= 0 for mu in noise.reference):
            raise InvalidParams(f"{sid.value}: reference prices must be finite and positive")
        if not (0.0 <= noise.kappa <= 1.0):
            raise InvalidParams(f"{sid.value}: kappa must lie in [0, 1], got {noise.kappa}")
        if not (noise.sigma >= 0.0) or math.isinf(noise.sigma):
            raise InvalidParams(f"{sid.value}: sigma must be finite and >= 0, got {noise.sigma}")


def check_finite(values: Iterable[float], what: str = "action") -> None:
    for v in values:
        if not isinstance(v, numbers.Real) or not math.isfinite(v):
            raise NonFiniteAction(f"{what} contains a non-finite value: {v!r}")


def check_plan_rows(rows: Sequence[Sequence[float]], horizon: int = 20) -> None:
    if len(rows) != horizon:
        raise InvalidPlan(f"plan must have {horizon} rows, got {len(rows)}")
    for t, row in enumerate(rows):
        if len(row) != 3:
            raise InvalidPlan(f"plan row {t} must hold 3 values (w, b, g), got {len(row)}")
        try:
            check_finite(row, what=f"plan row {t}")
        except NonFiniteAction as e:
            raise InvalidPlan(str(e)) from e
