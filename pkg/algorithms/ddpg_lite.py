# File: algorithms/ddpg_lite.py
# Single-round actor-critic: the whole plan is one action, the episode score its return

import logging
import time
from typing import Optional

import numpy as np

from algorithms.objective import Objective, SolverResult
from algorithms.surrogate import Adam, SurrogateNet
from pathway.models import SurrogateConfig

logger = logging.getLogger(__name__)

FINAL_ACTOR_RATE = 0.02  # actor learning rate decays linearly to this fraction


def sigmoid(theta: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * theta))


class DdpgLite:
    """
    Deterministic actor over the unit box with a surrogate critic.

    The actor is one unconstrained parameter per coordinate, squashed by a
    sigmoid into [0, 1] and scaled onto the objective's bounds. The critic
    sees actions relative to the actor, in units of the exploration std,
    and predicts standardized returns.
    """

    def __init__(self, objective: Objective, config: SurrogateConfig, seed: int):
        self.objective = objective
        self.config = config
        self.rng = np.random.default_rng(seed)
        self.width = objective.upper - objective.lower
        d = objective.dimension
        self.theta = np.zeros(d)
        self.critic = SurrogateNet([d] + list(config.hidden_widths) + [1], self.rng)
        self.critic_optimizer = Adam(self.critic.params, config.critic_learning_rate)
        self.actor_optimizer = Adam([self.theta], config.actor_learning_rate)

    def unit_action(self) -> np.ndarray:
        return sigmoid(self.theta)

    def action(self) -> np.ndarray:
        return self.objective.clip(self.objective.lower + self.unit_action() * self.width)

    def exploration_std(self, iteration: int) -> float:
        c = self.config
        if c.iterations == 1:
            return c.exploration_std
        frac = iteration / (c.iterations - 1)
        return c.exploration_std + frac * (c.final_exploration_std - c.exploration_std)

    def actor_rate(self, iteration: int) -> float:
        c = self.config
        frac = iteration / max(c.iterations - 1, 1)
        return c.actor_learning_rate * (1.0 - (1.0 - FINAL_ACTOR_RATE) * frac)

    def sample_batch(self, std: float) -> np.ndarray:
        """Mirrored Gaussian perturbations of the actor, clamped to [0, 1]"""
        u = self.unit_action()
        half = self.config.batch_size // 2
        eps = self.rng.normal(0.0, std, size=(half, len(u))) if std > 0 else np.zeros((half, len(u)))
        return np.clip(np.vstack([u + eps, u - eps]), 0.0, 1.0)

    def actor_step(self, scale: float, learning_rate: float) -> np.ndarray:
        """Ascend the critic at the actor's own action through the squashing"""
        u = self.unit_action()
        grad_u = self.critic.input_gradient(np.zeros_like(u)) / scale
        grad_theta = grad_u * u * (1.0 - u)
        self.actor_optimizer.step([grad_theta], learning_rate=learning_rate, ascend=True)
        return grad_theta

    def iterate(self, iteration: int) -> Optional[float]:
        std = self.exploration_std(iteration)
        scale = std if std > 0 else 1.0
        U = self.sample_batch(std)
        returns = np.array([self.objective(self.objective.lower + u * self.width) for u in U])

        spread = returns.std()
        if not spread > 0:
            return None
        targets = (returns - returns.mean()) / spread
        inputs = (U - self.unit_action()) / scale
        loss = self.critic.fit(inputs, targets, self.critic_optimizer, self.config.critic_steps)
        self.actor_step(scale, self.actor_rate(iteration))
        return loss


def ddpg_lite_optimize(objective: Objective, config: Optional[SurrogateConfig] = None, seed: int = 0) -> SolverResult:
    """
    Train the actor for `config.iterations` rounds and return its plan.

    Each round evaluates a mirrored exploration batch on the true objective,
    refits the critic (warm-started) and takes one actor step along the
    critic's action gradient. The returned plan is the mean of the actor's
    actions over the last `averaging_fraction` of rounds (the final action
    when that is zero). Raises DivergenceDetected if the critic loss stops
    being finite.
    """
    config = config or SurrogateConfig()
    started = time.time()
    agent = DdpgLite(objective, config, seed)

    averaged = max(int(round(config.averaging_fraction * config.iterations)), 1)
    first_averaged = config.iterations - averaged
    total = np.zeros(objective.dimension)

    history = []
    for iteration in range(config.iterations):
        loss = agent.iterate(iteration)
        if iteration >= first_averaged:
            total += agent.unit_action()
        if iteration % 25 == 0 or iteration == config.iterations - 1:
            value = objective(agent.action())
            history.append(value)
            loss_text = "n/a" if loss is None else f"{loss:.4f}"
            logger.info(f"DDPG iteration {iteration}: objective {value:.3f}, critic loss {loss_text}")

    x = objective.clip(objective.lower + (total / averaged) * agent.width)
    value = objective(x)
    logger.info(f"DDPG averaged the last {averaged} actions: objective {value:.3f}")
    return SolverResult(
        x=x,
        value=value,
        history=history,
        evaluations=objective.evaluations,
        rounds=config.iterations,
        certified=False,
        wall_time=time.time() - started,
        plan=objective.result_plan(x),
    )
