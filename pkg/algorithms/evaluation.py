# File: algorithms/evaluation.py
# Seed-set evaluation of a plan with an order-fixed reduction

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Sequence, Tuple, Union

import numpy as np

from pathway import env
from pathway.models import EnvConfig, Plan, SeedSet

logger = logging.getLogger(__name__)


def mean_and_stderr(scores: Sequence[float]) -> Tuple[float, float]:
    """Sample mean and its standard error, summed in input order"""
    values = np.asarray(scores, dtype=np.float64)
    n = len(values)
    if n == 0:
        raise ValueError("no scores to reduce")
    total = 0.0
    for v in values:
        total += float(v)
    mean = total / n
    if n == 1:
        return mean, 0.0
    squares = 0.0
    for v in values:
        squares += (float(v) - mean) ** 2
    return mean, math.sqrt(squares / (n - 1)) / math.sqrt(n)


def _seeds(seeds: Union[SeedSet, Sequence[int]]) -> List[int]:
    values = list(seeds.seeds) if isinstance(seeds, SeedSet) else [int(s) for s in seeds]
    if not values:
        raise ValueError("seed set is empty")
    return values


def episode_scores(
    config: EnvConfig, plan: Plan, seeds: Union[SeedSet, Sequence[int]], max_workers: int = 1
) -> List[float]:
    """run_plan score for every seed, returned in seed order"""
    values = _seeds(seeds)

    def score(seed: int) -> float:
        return env.run_plan(config, seed, plan).score

    if max_workers <= 1 or len(values) == 1:
        return [score(s) for s in values]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(score, values))


def evaluate_plan_mean(
    config: EnvConfig, plan: Plan, seeds: Union[SeedSet, Sequence[int]], max_workers: int = 1
) -> Tuple[float, float]:
    scores = episode_scores(config, plan, seeds, max_workers)
    mean, std_error = mean_and_stderr(scores)
    logger.debug(f"Evaluated plan over {len(scores)} seeds: mean {mean:.3f} +/- {std_error:.3f}")
    return mean, std_error
