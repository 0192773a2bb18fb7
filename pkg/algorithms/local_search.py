# File: algorithms/local_search.py
# Greedy add/remove neighbourhood search on a deterministic objective

import logging
import time
from typing import Optional, Sequence, Union

import numpy as np

from algorithms.objective import Objective, SolverResult
from pathway.models import LocalSearchConfig, Plan
from utils.errors import NondeterministicObjective

logger = logging.getLogger(__name__)

DIRECTIONS = (1.0, -1.0)  # add before remove


def _start_vector(objective: Objective, start: Union[Plan, Sequence[float], None]) -> np.ndarray:
    if start is None:
        return objective.zero()
    if isinstance(start, Plan):
        return objective.clip(objective.from_plan(start))
    return objective.clip(start)


def best_move(objective: Objective, x: np.ndarray, value: float, delta: float):
    """Best strictly improving single move from x.

    Moves are +delta/-delta on one coordinate, clamped to the bounds; moves
    that leave x unchanged are skipped. Candidates are scanned in
    (coordinate, direction) order and ties keep the earliest one.
    Returns (index, new_coordinate_value, new_objective) or None.
    """
    best = None
    best_value = value
    for i in range(objective.dimension):
        for direction in DIRECTIONS:
            moved = min(max(x[i] + direction * delta, objective.lower[i]), objective.upper[i])
            if moved == x[i]:
                continue
            trial = x.copy()
            trial[i] = moved
            trial_value = objective(trial)
            if trial_value > best_value:
                best, best_value = (i, moved, trial_value), trial_value
    return best


def vultures_local_search(
    objective: Objective,
    start: Union[Plan, Sequence[float], None] = None,
    config: Optional[LocalSearchConfig] = None,
) -> SolverResult:
    """
    Apply the single best improving +/-delta move per round until none is left.

    The objective must be deterministic. One declared stochastic, or one
    whose two evaluations of the start point disagree, raises
    NondeterministicObjective. The result is `certified` when the search
    stopped because no move improved (a delta-local optimum) rather than at
    max_rounds.
    """
    config = config or LocalSearchConfig()
    started = time.time()

    x = _start_vector(objective, start)
    if not objective.deterministic:
        raise NondeterministicObjective(f"{objective.name} is declared stochastic")
    value = objective(x)
    check = objective(x)
    if check != value:
        raise NondeterministicObjective(
            f"two evaluations of the start plan disagree ({value!r} vs {check!r})"
        )

    history = [value]
    rounds = 0
    certified = False
    while rounds < config.max_rounds:
        move = best_move(objective, x, value, config.delta)
        if move is None:
            certified = True
            break
        i, moved, value = move
        x[i] = moved
        rounds += 1
        history.append(value)
        if rounds % 50 == 0:
            logger.debug(f"Local search round {rounds}: objective {value:.3f}")

    if certified:
        logger.info(f"Local search converged after {rounds} rounds: objective {value:.3f}")
    else:
        logger.warning(f"Local search stopped at max_rounds={config.max_rounds}: objective {value:.3f}")

    return SolverResult(
        x=x,
        value=value,
        history=history,
        evaluations=objective.evaluations,
        rounds=rounds,
        certified=certified,
        wall_time=time.time() - started,
        plan=objective.result_plan(x),
    )
