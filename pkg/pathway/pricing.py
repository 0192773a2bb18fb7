# File: pathway/pricing.py
# Mean-reverting log-price process for the four randomized price series

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Tuple, Union

import numpy as np
from pydantic import ValidationError

from pathway.models import NoiseParams, PriceSeriesId, SERIES_ORDER
from utils.errors import EpisodeExhausted, InvalidParams
from utils.validators import check_noise_params


@dataclass(frozen=True)
class PriceState:
    """Value object: step index, log-prices and the embedded generator state.

    `levels` holds the emitted prices; at reset they are the reference
    values themselves so that prices() returns mu_0 exactly.
    """
    t: int
    x: Tuple[float, ...]
    levels: Tuple[float, ...]
    rng_state: Dict[str, Any]
    params: NoiseParams

    @property
    def last_step(self) -> int:
        return self.params.horizon - 1


def _coerce(params: Union[NoiseParams, Mapping[str, Any]]) -> NoiseParams:
    if isinstance(params, NoiseParams):
        check_noise_params(params)
        return params
    try:
        return NoiseParams.model_validate(params)
    except ValidationError as e:
        raise InvalidParams(str(e)) from e


def reset(params: Union[NoiseParams, Mapping[str, Any]], seed: int) -> PriceState:
    params = _coerce(params)
    if not isinstance(seed, (int, np.integer)) or seed < 0:
        raise InvalidParams(f"seed must be a non-negative integer, got {seed!r}")
    rng = np.random.default_rng(int(seed))
    references = [params.of(s).reference[0] for s in SERIES_ORDER]
    return PriceState(
        t=0,
        x=tuple(math.log(mu) for mu in references),
        levels=tuple(float(mu) for mu in references),
        rng_state=rng.bit_generator.state,
        params=params,
    )


def sample_next(state: PriceState) -> PriceState:
    """Advance one step: x' = (1 - kappa) x + kappa ln mu_{t+1} + sigma eps.

    One standard normal per series, drawn in SERIES_ORDER.
    """
    if state.t >= state.last_step:
        raise EpisodeExhausted(f"price process is at its final step {state.t}")
    bit_generator = np.random.PCG64()
    bit_generator.state = state.rng_state
    rng = np.random.Generator(bit_generator)
    eps = rng.standard_normal(len(SERIES_ORDER))

    t_next = state.t + 1
    x_next = []
    for i, series in enumerate(SERIES_ORDER):
        noise = state.params.of(series)
        target = math.log(noise.reference[t_next])
        x_next.append((1.0 - noise.kappa) * state.x[i] + noise.kappa * target + noise.sigma * float(eps[i]))
    return PriceState(
        t=t_next,
        x=tuple(x_next),
        levels=tuple(math.exp(v) for v in x_next),
        rng_state=rng.bit_generator.state,
        params=state.params,
    )


def prices(state: PriceState) -> Dict[PriceSeriesId, float]:
    return {series: state.levels[i] for i, series in enumerate(SERIES_ORDER)}


def log_forecast(state: PriceState, params: NoiseParams = None, horizon: int = None) -> Dict[PriceSeriesId, List[float]]:
    """Conditional means E[x_{t+h}] for steps t+1 .. last, in log space.

    Iterated exactly like sample_next with the noise switched off.
    """
    params = params or state.params
    last = min(params.horizon, horizon or params.horizon) - 1
    result: Dict[PriceSeriesId, List[float]] = {}
    for i, series in enumerate(SERIES_ORDER):
        noise = params.of(series)
        mean = state.x[i]
        path = []
        for step in range(state.t + 1, last + 1):
            mean = (1.0 - noise.kappa) * mean + noise.kappa * math.log(noise.reference[step])
            path.append(mean)
        result[series] = path
    return result


def forecast(state: PriceState, params: NoiseParams = None, horizon: int = None) -> Dict[PriceSeriesId, List[float]]:
    """Conditional median price path: exp of the log-space conditional mean"""
    return {
        series: [math.exp(m) for m in means]
        for series, means in log_forecast(state, params, horizon).items()
    }


def price_path(params: NoiseParams, seed: int, horizon: int = None) -> np.ndarray:
    """Realized prices as a (horizon, 4) array in SERIES_ORDER columns"""
    horizon = horizon or params.horizon
    state = reset(params, seed)
    rows = [state.levels]
    for _ in range(horizon - 1):
        state = sample_next(state)
        rows.append(state.levels)
    return np.array(rows, dtype=np.float64)
