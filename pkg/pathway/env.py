# File: pathway/env.py
# The yearly deployment MDP: reset, step, observations and whole-plan episodes

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Mapping, Sequence, Tuple, Union

import numpy as np
from pydantic import ValidationError

from pathway import pricing
from pathway.models import (
    ACTION_UPPER, FIRST_YEAR, Action, EnvConfig, EpisodeTrace, Observation, ObservationMode,
    Plan, PriceSeriesId, RewardBreakdown, SERIES_ORDER, StepRecord,
)
from pathway.pricing import PriceState
from utils.errors import EpisodeDone, InvalidConfig, InvalidPlan
from utils.validators import check_finite

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnvState:
    t: int
    capacities: Tuple[float, float, float]
    previous_action: Tuple[float, float, float]
    price_state: PriceState
    cumulative_reward: float
    prev_capture: float
    last_reward: float
    mode: ObservationMode = ObservationMode.OPEN


# ==================== REWARD ====================

def reward_terms(
    config: EnvConfig,
    t: int,
    prices: Sequence[Any],
    action: Sequence[Any],
    previous_action: Sequence[Any],
    capacities: Sequence[Any],
    prev_capture: Any,
) -> Dict[str, Any]:
    """All terms of the step-t reward.

    Works elementwise on floats or numpy arrays (one entry per price path),
    with the same operation order either way so both give identical numbers.
    `capacities` are the cumulative capacities after this step's build.
    """
    wind, blue, green = config.wind, config.blue, config.green
    carbon, ccs_capex, wind_capex, wind_devex = prices
    a_w, a_b, a_g = action
    p_w, p_b, p_g = previous_action
    c_w, c_b, c_g = capacities

    revenue = (wind.revenue_rate * wind.capacity_factor * c_w
               + blue.revenue_rate * blue.capacity_factor * c_b
               + green.revenue_rate * green.capacity_factor * c_g)
    capex = (wind_capex + wind_devex) * a_w + blue.capex_rate * a_b + green.capex_rate * a_g
    opex = wind.opex_rate * c_w + blue.opex_rate * c_b + green.opex_rate * c_g
    decom = wind.decom_rate * a_w + blue.decom_rate * a_b + green.decom_rate * a_g

    gross = wind.emission_intensity * c_w + blue.emission_intensity * c_b + green.emission_intensity * c_g
    capture = config.ramp(t) * gross
    ccus_new = np.maximum(0.0, capture - prev_capture)
    net = gross - capture
    carbon_cost = carbon * net
    ccus_cost = ccs_capex * ccus_new
    co2 = carbon_cost + ccus_cost

    jobs = ((wind.build_jobs * (a_w - p_w) + wind.ops_jobs * a_w)
            + (blue.build_jobs * (a_b - p_b) + blue.ops_jobs * a_b)
            + (green.build_jobs * (a_g - p_g) + green.ops_jobs * a_g))
    jobs_term = (t + config.jobs_weight_start) * jobs

    total = revenue - (capex + opex + decom + co2) + jobs_term
    return {
        "revenue": revenue, "capex": capex, "opex": opex, "decom": decom, "co2": co2,
        "jobs_term": jobs_term, "total": total, "net_emissions": net,
        "carbon_cost": carbon_cost, "ccus_cost": ccus_cost, "jobs": jobs, "capture": capture,
    }


# ==================== CONFIG HELPERS ====================

def coerce_config(config: Union[EnvConfig, Mapping[str, Any]]) -> EnvConfig:
    if isinstance(config, EnvConfig):
        return config
    try:
        return EnvConfig.model_validate(config)
    except ValidationError as e:
        raise InvalidConfig(str(e)) from e


def deterministic(config: EnvConfig) -> EnvConfig:
    """Config with every price volatility set to zero (itself when already noise-free)"""
    if config.noise.is_deterministic:
        return config
    return config.model_copy(update={"noise": config.noise.without_noise()})


def reduced(config: EnvConfig, horizon: int) -> EnvConfig:
    """Reduced-horizon variant: ramp reaches 1 in step horizon - 1"""
    return coerce_config({**config.model_dump(mode="json"), "horizon": horizon})


# ==================== MDP ====================

def clamp_action(raw: Sequence[float]) -> Action:
    values = list(raw)
    if len(values) != 3:
        raise InvalidPlan(f"an action is a (w, b, g) triple, got {len(values)} values")
    check_finite(values)
    w, b, g = (min(max(float(v), 0.0), hi) for v, hi in zip(values, ACTION_UPPER))
    return Action(w=w, b=b, g=g)


def observe(state: EnvState, mode: ObservationMode = None, config: EnvConfig = None) -> Observation:
    mode = ObservationMode(mode) if mode is not None else state.mode
    if mode == ObservationMode.OPEN:
        return Observation(mode=mode, step=state.t, last_reward=state.last_reward)
    horizon = config.horizon if config is not None else None
    return Observation(
        mode=mode,
        step=state.t,
        last_reward=state.last_reward,
        forecasts=pricing.forecast(state.price_state, horizon=horizon),
    )


def reset(config: EnvConfig, seed: int, mode: ObservationMode = ObservationMode.OPEN) -> Tuple[EnvState, Observation]:
    config = coerce_config(config)
    mode = ObservationMode(mode)
    state = EnvState(
        t=0,
        capacities=(0.0, 0.0, 0.0),
        previous_action=(0.0, 0.0, 0.0),
        price_state=pricing.reset(config.noise, seed),
        cumulative_reward=0.0,
        prev_capture=0.0,
        last_reward=0.0,
        mode=mode,
    )
    return state, observe(state, mode, config)


def step(
    state: EnvState, config: EnvConfig, action: Union[Action, Sequence[float]]
) -> Tuple[EnvState, Observation, RewardBreakdown, bool]:
    if state.t >= config.horizon:
        raise EpisodeDone(f"episode finished after {config.horizon} steps")
    if not isinstance(action, Action):
        try:
            action = Action(w=action[0], b=action[1], g=action[2])
        except ValidationError as e:
            raise InvalidPlan(f"action outside bounds, clamp it first: {e}") from e

    a = action.as_tuple()
    capacities = tuple(c + x for c, x in zip(state.capacities, a))
    realized = state.price_state.levels
    terms = reward_terms(config, state.t, realized, a, state.previous_action, capacities, state.prev_capture)
    terms = {name: float(value) for name, value in terms.items()}
    capture = terms.pop("capture")
    breakdown = RewardBreakdown(**terms)

    # prices advance after the reward is computed
    price_state = state.price_state
    if state.t + 1 < config.horizon:
        price_state = pricing.sample_next(price_state)

    next_state = EnvState(
        t=state.t + 1,
        capacities=capacities,
        previous_action=a,
        price_state=price_state,
        cumulative_reward=state.cumulative_reward + breakdown.total,
        prev_capture=capture,
        last_reward=breakdown.total,
        mode=state.mode,
    )
    done = next_state.t == config.horizon
    return next_state, observe(next_state, config=config), breakdown, done


def run_plan(
    config: EnvConfig, seed: int, plan: Plan, mode: ObservationMode = ObservationMode.OPEN
) -> EpisodeTrace:
    """Play every step of a fixed plan; deterministic in (config, seed, plan)"""
    config = coerce_config(config)
    state, _ = reset(config, seed, mode)
    records = []
    done = False
    while not done:
        t = state.t
        action = plan.actions[t]
        realized = pricing.prices(state.price_state)
        state, observation, breakdown, done = step(state, config, action)
        records.append(StepRecord(
            t=t,
            year=FIRST_YEAR + t,
            action=action,
            observation=observation,
            breakdown=breakdown,
            prices=realized,
            cumulative_reward=state.cumulative_reward,
        ))
    score = 0.0
    for record in records:
        score += record.breakdown.total
    logger.debug(f"Episode seed={seed} finished after {len(records)} steps, score {score:.3f}")
    return EpisodeTrace(seed=seed, mode=ObservationMode(mode), steps=records, score=score)


def check_reset(config: EnvConfig, seed: int) -> bool:
    """Reset, take two zero steps, reset again: both resets must agree"""
    config = coerce_config(config)
    first, first_obs = reset(config, seed)
    state = first
    for _ in range(min(2, config.horizon)):
        state, _, _, _ = step(state, config, Action())
    second, second_obs = reset(config, seed)
    if first != second or first_obs != second_obs:
        raise AssertionError(f"reset with seed {seed} is not reproducible")
    return True


def score_plans(config: EnvConfig, price_paths: np.ndarray, plan: Union[Plan, np.ndarray]) -> np.ndarray:
    """Episode scores of one plan under many realized price paths at once.

    `price_paths` has shape (n_paths, horizon, 4). Uses reward_terms on
    arrays, so each score equals run_plan's score for the matching seed.
    """
    rows = plan.to_array() if isinstance(plan, Plan) else np.asarray(plan, dtype=np.float64)
    n_paths = price_paths.shape[0]
    single = n_paths == 1
    # plain floats for a single path
    zeros = 0.0 if single else np.zeros(n_paths)
    capacities = (0.0, 0.0, 0.0)
    previous = (0.0, 0.0, 0.0)
    prev_capture = zeros
    score = zeros
    for t in range(config.horizon):
        a = (float(rows[t, 0]), float(rows[t, 1]), float(rows[t, 2]))
        capacities = (capacities[0] + a[0], capacities[1] + a[1], capacities[2] + a[2])
        if single:
            prices_t = tuple(float(price_paths[0, t, i]) for i in range(len(SERIES_ORDER)))
        else:
            prices_t = tuple(price_paths[:, t, i] for i in range(len(SERIES_ORDER)))
        terms = reward_terms(config, t, prices_t, a, previous, capacities, prev_capture)
        score = score + terms["total"]
        prev_capture = terms["capture"] + zeros
        previous = a
    return np.array([float(score)]) if single else score
