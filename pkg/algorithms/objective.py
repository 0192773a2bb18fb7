# File: algorithms/objective.py
# Box-constrained black-box objectives over flat decision vectors

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from algorithms.evaluation import mean_and_stderr
from pathway import env, pricing
from pathway.models import ACTION_UPPER, HORIZON, TECHNOLOGIES, EnvConfig, Plan

logger = logging.getLogger(__name__)

Label = Tuple[int, int]  # (t, technology index)


class Objective:
    """Maximization target: x -> number, with per-coordinate bounds.

    Coordinates carry (t, technology) labels so that solvers can sweep
    them in calendar order and results map back onto a Plan.
    """

    def __init__(
        self,
        fn: Callable[[np.ndarray], float],
        lower: Sequence[float],
        upper: Sequence[float],
        labels: Optional[Sequence[Label]] = None,
        name: str = "objective",
        deterministic: bool = True,
        maps_to_plan: bool = False,
    ):
        self.fn = fn
        self.lower = np.asarray(lower, dtype=np.float64)
        self.upper = np.asarray(upper, dtype=np.float64)
        if self.lower.shape != self.upper.shape or np.any(self.lower > self.upper):
            raise ValueError("lower and upper bounds must have equal shape with lower <= upper")
        self.labels: List[Label] = list(labels) if labels is not None else [
            (i // 3, i % 3) for i in range(len(self.lower))
        ]
        self.name = name
        self.deterministic = deterministic
        self.maps_to_plan = maps_to_plan
        self.evaluations = 0

    @property
    def dimension(self) -> int:
        return len(self.lower)

    def __call__(self, x: Sequence[float]) -> float:
        self.evaluations += 1
        return float(self.fn(np.asarray(x, dtype=np.float64)))

    def clip(self, x: Sequence[float]) -> np.ndarray:
        return np.clip(np.asarray(x, dtype=np.float64), self.lower, self.upper)

    def zero(self) -> np.ndarray:
        return self.clip(np.zeros(self.dimension))

    def sweep_order(self, backward: bool = True) -> List[int]:
        """Coordinate order: by year (last year first when backward), then (w, b, g)"""
        if backward:
            return sorted(range(self.dimension), key=lambda i: (-self.labels[i][0], self.labels[i][1]))
        return sorted(range(self.dimension), key=lambda i: (self.labels[i][0], self.labels[i][1]))

    def to_plan(self, x: Sequence[float], base: Optional[Plan] = None) -> Plan:
        rows = base.to_array() if base is not None else np.zeros((HORIZON, 3))
        for value, (t, k) in zip(np.asarray(x, dtype=np.float64), self.labels):
            rows[t, k] = value
        return Plan.from_rows(rows.tolist())

    def result_plan(self, x: Sequence[float]) -> Optional[Plan]:
        return self.to_plan(self.clip(x)) if self.maps_to_plan else None

    def from_plan(self, plan: Plan) -> np.ndarray:
        rows = plan.to_array()
        return np.array([rows[t, k] for t, k in self.labels], dtype=np.float64)


@dataclass
class SolverResult:
    x: np.ndarray
    value: float
    history: List[float] = field(default_factory=list)
    evaluations: int = 0
    rounds: int = 0
    certified: bool = False
    wall_time: float = 0.0
    plan: Optional[Plan] = None


def plan_objective(
    config: EnvConfig,
    seeds: Optional[Sequence[int]] = None,
    technologies: Sequence[str] = TECHNOLOGIES,
    deterministic: bool = False,
) -> Objective:
    """Mean episode score over fixed seeds, as a function of the plan entries.

    Only steps t < config.horizon and the given technologies are free
    coordinates; every other plan entry stays 0. With `deterministic`
    the price noise is removed and a single path is scored.
    """
    if deterministic:
        config = env.deterministic(config)
        seeds = [0]
    if not seeds:
        raise ValueError("a stochastic objective needs at least one seed")
    tech_index = [TECHNOLOGIES.index(k) for k in technologies]
    labels = [(t, k) for t in range(config.horizon) for k in tech_index]

    started = time.time()
    paths = np.stack([pricing.price_path(config.noise, int(s), config.horizon) for s in seeds])
    logger.debug(f"Prepared {len(seeds)} price paths in {time.time() - started:.2f}s")

    rows = np.zeros((HORIZON, 3))

    def evaluate(x: np.ndarray) -> float:
        for value, (t, k) in zip(x, labels):
            rows[t, k] = value
        mean, _ = mean_and_stderr(env.score_plans(config, paths, rows))
        return mean

    lower = [0.0] * len(labels)
    upper = [ACTION_UPPER[k] for _, k in labels]
    name = "deterministic" if deterministic else f"mean over {len(seeds)} seeds"
    return Objective(evaluate, lower, upper, labels=labels, name=name, deterministic=True, maps_to_plan=True)
