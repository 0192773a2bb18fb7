# File: algorithms/coordinate_search.py
# Backward-recursive coordinate ascent with golden-section line searches

import logging
import time
from typing import Optional

import numpy as np

from algorithms.golden_section import golden_section_search
from algorithms.objective import Objective, SolverResult
from pathway.models import GoldenSectionConfig

logger = logging.getLogger(__name__)

INITS = ("zero", "random")
SWEEPS = ("backward", "alternating")


def _start(objective: Objective, init: str, seed: Optional[int]) -> np.ndarray:
    if init == "zero":
        return objective.zero()
    if init == "random":
        if seed is None:
            raise ValueError("random initialization needs a seed")
        rng = np.random.default_rng(seed)
        return rng.uniform(objective.lower, objective.upper)
    raise ValueError(f"init must be one of {INITS}, got {init!r}")


def eg_coordinate_maximize(
    objective: Objective,
    config: Optional[GoldenSectionConfig] = None,
    passes: int = 1,
    init: str = "zero",
    sweep: str = "backward",
    seed: Optional[int] = None,
) -> SolverResult:
    """
    Maximize one coordinate at a time, holding all others fixed.

    A pass visits the coordinates from the last year back to the first and
    within a year in (w, b, g) order. With sweep="alternating" every second
    pass runs forward instead. Each coordinate is line-searched over its
    bounds; both endpoints are evaluated as well. The best candidate replaces
    the incumbent only when it does not lower the objective, so `history`
    (the incumbent value after every coordinate) never decreases.
    """
    config = config or GoldenSectionConfig()
    if passes < 1:
        raise ValueError("passes must be at least 1")
    if sweep not in SWEEPS:
        raise ValueError(f"sweep must be one of {SWEEPS}, got {sweep!r}")

    started = time.time()
    x = _start(objective, init, seed)
    best = objective(x)
    history = [best]

    for p in range(passes):
        backward = sweep == "backward" or p % 2 == 0
        for i in objective.sweep_order(backward=backward):
            lo, hi = objective.lower[i], objective.upper[i]
            if hi <= lo:
                continue
            current = x[i]

            def along(s: float) -> float:
                trial = x.copy()
                trial[i] = s
                return objective(trial)

            result = golden_section_search(along, lo, hi, config)
            candidate, value = result.x, result.value
            for endpoint in (lo, hi):
                endpoint_value = best if endpoint == current else along(endpoint)
                if endpoint_value > value:
                    candidate, value = endpoint, endpoint_value

            if value >= best:
                x[i] = candidate
                best = value
            history.append(best)
        logger.info(f"EG pass {p + 1}/{passes} ({'backward' if backward else 'forward'}): objective {best:.3f}")

    return SolverResult(
        x=x,
        value=best,
        history=history,
        evaluations=objective.evaluations,
        rounds=passes,
        certified=False,
        wall_time=time.time() - started,
        plan=objective.result_plan(x),
    )
