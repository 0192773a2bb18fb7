# File: algorithms/baselines.py
# Reference agents and the exhaustive oracle for tiny instances

import itertools
import logging
import time
from typing import Optional, Sequence, Tuple

import numpy as np

from algorithms.objective import plan_objective
from pathway.models import ACTION_UPPER, HORIZON, Plan, TinyInstance
from utils.errors import SearchSpaceTooLarge

logger = logging.getLogger(__name__)

MAX_GRID_PLANS = 10 ** 6


def random_plan(seed: int) -> Plan:
    """Every entry uniform over its bound interval"""
    rng = np.random.default_rng(seed)
    rows = rng.uniform(0.0, ACTION_UPPER, size=(HORIZON, 3))
    return Plan.from_rows(rows.tolist())


def rule_based_plan(fractions: Sequence[float]) -> Plan:
    """Constant yearly build at the given fractions of each technology's bound"""
    fractions = [float(f) for f in fractions]
    if len(fractions) != 3 or any(not 0.0 <= f <= 1.0 for f in fractions):
        raise ValueError(f"need three fractions in [0, 1], got {fractions}")
    row = [f * hi for f, hi in zip(fractions, ACTION_UPPER)]
    return Plan.from_rows([row] * HORIZON)


def brute_force_oracle(tiny: TinyInstance, levels: Optional[Sequence[float]] = None) -> Tuple[Plan, float]:
    """
    Best plan on a level grid, by exhaustive search on the noise-free objective.

    Levels are fractions of each technology's upper bound. Plans are
    enumerated in lexicographic grid order and ties keep the first.
    """
    levels = list(tiny.levels if levels is None else levels)
    if not levels:
        raise ValueError("levels must not be empty")
    if any(not 0.0 <= lvl <= 1.0 for lvl in levels):
        raise ValueError(f"levels are fractions of the bounds and must lie in [0, 1], got {levels}")

    objective = plan_objective(tiny.env, technologies=tiny.technologies, deterministic=True)
    size = len(levels) ** objective.dimension
    if size > MAX_GRID_PLANS:
        raise SearchSpaceTooLarge(f"{size} grid plans exceed the limit of {MAX_GRID_PLANS}")

    started = time.time()
    grids = [[lvl * hi for lvl in levels] for hi in objective.upper]
    best_x, best_score = None, float("-inf")
    for point in itertools.product(*grids):
        score = objective(point)
        if score > best_score:
            best_x, best_score = point, score
    logger.info(f"Oracle searched {size} plans in {time.time() - started:.2f}s: best {best_score:.3f}")
    return objective.to_plan(best_x), best_score
