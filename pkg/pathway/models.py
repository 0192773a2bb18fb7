# File: pathway/models.py
# Pydantic models for the pathway environment, solvers and harness

from datetime import datetime
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

HORIZON = 20
FIRST_YEAR = 2031
TECHNOLOGIES = ("wind", "blue", "green")
ACTION_UPPER = (27.0, 25.0, 24.0)  # GW per year for (w, b, g)

# IEV baseline scenarios: documentation only, never simulated
IEV_SCENARIOS: Dict[str, Dict[str, str]] = {
    "Today": {"economy": "£40bn", "jobs": "140,000", "investment": "£10bn"},
    "Breeze": {"economy": "£80bn", "jobs": "113,000", "investment": "£6.5bn"},
    "Gale": {"economy": "£100bn", "jobs": "158,000", "investment": "£9.4bn"},
    "Storm": {"economy": "£125bn", "jobs": "232,000", "investment": "£13.4bn"},
}


class PriceSeriesId(str, Enum):
    CARBON_PRICE = "CarbonPrice"
    CCS_CAPEX = "CcsCapex"
    WIND_CAPEX = "WindCapex"
    WIND_DEVEX = "WindDevex"


# fixed draw order for the price noise
SERIES_ORDER = (
    PriceSeriesId.CARBON_PRICE,
    PriceSeriesId.CCS_CAPEX,
    PriceSeriesId.WIND_CAPEX,
    PriceSeriesId.WIND_DEVEX,
)


class ObservationMode(str, Enum):
    OPEN = "open"
    CLOSED = "closed"


# ==================== PRICE NOISE MODELS ====================

class SeriesNoise(BaseModel):
    model_config = ConfigDict(frozen=True)

    reference: List[float] = Field(..., min_length=1, max_length=HORIZON, description="Reference trajectory mu_t")
    kappa: float = Field(..., ge=0.0, le=1.0, description="Mean-reversion rate")
    sigma: float = Field(..., ge=0.0, description="Log-price volatility")

    @field_validator("reference")
    @classmethod
    def reference_positive(cls, value: List[float]) -> List[float]:
        if any(not np.isfinite(v) or v <= 0 for v in value):
            raise ValueError("reference prices must be finite and positive")
        return value


class NoiseParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    series: Dict[PriceSeriesId, SeriesNoise]

    @field_validator("series")
    @classmethod
    def all_series_present(cls, value: Dict[PriceSeriesId, SeriesNoise]) -> Dict[PriceSeriesId, SeriesNoise]:
        missing = [s.value for s in SERIES_ORDER if s not in value]
        if missing:
            raise ValueError(f"missing price series: {missing}")
        return value

    def of(self, series: PriceSeriesId) -> SeriesNoise:
        return self.series[series]

    @property
    def horizon(self) -> int:
        return min(len(s.reference) for s in self.series.values())

    def without_noise(self) -> "NoiseParams":
        return NoiseParams(series={
            sid: SeriesNoise(reference=s.reference, kappa=s.kappa, sigma=0.0)
            for sid, s in self.series.items()
        })

    @property
    def is_deterministic(self) -> bool:
        return all(s.sigma == 0.0 for s in self.series.values())


# ==================== ENVIRONMENT MODELS ====================

class TechnologyCoefficients(BaseModel):
    model_config = ConfigDict(frozen=True)

    capacity_factor: float = Field(..., ge=0.0)
    revenue_rate: float = Field(..., ge=0.0, description="currency per GW-year at full output")
    capex_rate: float = Field(0.0, ge=0.0, description="currency per GW built (wind uses price series)")
    opex_rate: float = Field(..., ge=0.0, description="currency per GW-year")
    decom_rate: float = Field(..., ge=0.0, description="provision per GW built")
    emission_intensity: float = Field(0.0, ge=0.0, description="tCO2 per GW-year")
    build_jobs: float = Field(0.0, ge=0.0, description="jobs per GW of build-rate change")
    ops_jobs: float = Field(0.0, ge=0.0, description="jobs per GW built")


class EnvConfig(BaseModel):
    """Coefficients behind every term of the yearly reward.

    Default coefficient files under data/ are illustrative placeholders:
    the calibrated spreadsheet figures were never published.
    """
    model_config = ConfigDict(frozen=True)

    wind: TechnologyCoefficients
    blue: TechnologyCoefficients
    green: TechnologyCoefficients
    noise: NoiseParams
    horizon: int = Field(HORIZON, ge=1, le=HORIZON)
    jobs_weight_start: int = Field(0, ge=0, le=1, description="jobs_term = (t + start) * J_t")
    description: Optional[str] = None

    @model_validator(mode="after")
    def check_consistency(self) -> "EnvConfig":
        if self.wind.emission_intensity != 0.0 or self.green.emission_intensity != 0.0:
            raise ValueError("wind and green hydrogen must have zero emission intensity")
        if self.noise.horizon < self.horizon:
            raise ValueError(f"reference trajectories cover {self.noise.horizon} steps, horizon is {self.horizon}")
        return self

    @property
    def technologies(self) -> List[TechnologyCoefficients]:
        return [self.wind, self.blue, self.green]

    def ramp(self, t: int) -> float:
        """CCUS capture share in step t; reaches 1 in the final step"""
        if self.horizon == 1:
            return 1.0
        return t / (self.horizon - 1)


class Action(BaseModel):
    model_config = ConfigDict(frozen=True)

    w: float = Field(0.0, ge=0.0, le=ACTION_UPPER[0], description="GW of new offshore wind")
    b: float = Field(0.0, ge=0.0, le=ACTION_UPPER[1], description="GW of new blue hydrogen")
    g: float = Field(0.0, ge=0.0, le=ACTION_UPPER[2], description="GW of new green hydrogen")

    def as_tuple(self) -> tuple:
        return (self.w, self.b, self.g)


class Plan(BaseModel):
    """20 yearly action triples, index t <-> year 2031 + t"""
    model_config = ConfigDict(frozen=True)

    actions: List[Action] = Field(..., min_length=HORIZON, max_length=HORIZON)

    @classmethod
    def zero(cls) -> "Plan":
        return cls(actions=[Action() for _ in range(HORIZON)])

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "Plan":
        return cls(actions=[Action(w=r[0], b=r[1], g=r[2]) for r in rows])

    def to_rows(self) -> List[List[float]]:
        return [list(a.as_tuple()) for a in self.actions]

    def to_array(self) -> np.ndarray:
        return np.array(self.to_rows(), dtype=np.float64)


class RewardBreakdown(BaseModel):
    model_config = ConfigDict(frozen=True)

    revenue: float
    capex: float
    opex: float
    decom: float
    co2: float
    jobs_term: float
    total: float
    # components behind co2 and jobs_term, kept for export
    net_emissions: float = 0.0
    carbon_cost: float = 0.0
    ccus_cost: float = 0.0
    jobs: float = 0.0


class Observation(BaseModel):
    model_config = ConfigDict(frozen=True)

    mode: ObservationMode
    step: int
    last_reward: float
    forecasts: Optional[Dict[PriceSeriesId, List[float]]] = None

    def to_vector(self) -> List[float]:
        vector = [float(self.step), self.last_reward]
        if self.forecasts is not None:
            for series in SERIES_ORDER:
                vector.extend(self.forecasts[series])
        return vector


class StepRecord(BaseModel):
    t: int
    year: int
    action: Action
    observation: Observation
    breakdown: RewardBreakdown
    prices: Dict[PriceSeriesId, float]
    cumulative_reward: float


class EpisodeTrace(BaseModel):
    seed: int
    mode: ObservationMode
    steps: List[StepRecord]
    score: float


# ==================== SOLVER MODELS ====================

class GoldenSectionConfig(BaseModel):
    tolerance: float = Field(1e-3, gt=0.0)
    max_iterations: int = Field(200, ge=1)


class LocalSearchConfig(BaseModel):
    delta: float = Field(1.0, gt=0.0, description="GW step per move")
    max_rounds: int = Field(5000, ge=1)


class SurrogateConfig(BaseModel):
    hidden_widths: List[int] = Field(default_factory=lambda: [64, 64])
    critic_learning_rate: float = Field(3e-3, gt=0.0)
    actor_learning_rate: float = Field(5e-2, gt=0.0)
    exploration_std: float = Field(0.1, ge=0.0, description="std in box-normalized action units")
    final_exploration_std: float = Field(0.02, ge=0.0)
    batch_size: int = Field(256, ge=2, description="mirrored pairs, so batch_size // 2 directions per round")
    iterations: int = Field(300, ge=1)
    critic_steps: int = Field(30, ge=1, description="critic updates per iteration")
    averaging_fraction: float = Field(0.25, ge=0.0, le=1.0,
                                      description="final share of iterations whose actions are averaged")

    @field_validator("hidden_widths")
    @classmethod
    def widths_positive(cls, value: List[int]) -> List[int]:
        if any(w < 1 for w in value):
            raise ValueError("layer widths must be >= 1")
        return value


class EgConfig(BaseModel):
    golden: GoldenSectionConfig = Field(default_factory=GoldenSectionConfig)
    passes: int = Field(1, ge=1)
    init: str = Field("zero", pattern="^(zero|random)$")
    sweep: str = Field("backward", pattern="^(backward|alternating)$")


class LocalConfig(BaseModel):
    search: LocalSearchConfig = Field(default_factory=LocalSearchConfig)
    seed: Optional[int] = Field(None, description="single fixed seed instead of the noise-free variant")


class SolverSettings(BaseModel):
    eg: EgConfig = Field(default_factory=EgConfig)
    local: LocalConfig = Field(default_factory=LocalConfig)
    ddpg: SurrogateConfig = Field(default_factory=SurrogateConfig)
    training_seeds: int = Field(100, ge=1, description="seeds averaged by the eg and ddpg objectives")


class TinyInstance(BaseModel):
    """Reduced-horizon problem small enough for exhaustive search"""
    env: EnvConfig
    technologies: List[str] = Field(..., min_length=1, max_length=2)
    levels: List[float] = Field(default_factory=lambda: [0.0, 1.0], description="fractions of each bound")

    @field_validator("technologies")
    @classmethod
    def known_technologies(cls, value: List[str]) -> List[str]:
        unknown = [k for k in value if k not in TECHNOLOGIES]
        if unknown or len(set(value)) != len(value):
            raise ValueError(f"technologies must be distinct names from {TECHNOLOGIES}")
        return value

    @model_validator(mode="after")
    def short_horizon(self) -> "TinyInstance":
        if self.env.horizon > 4:
            raise ValueError("tiny instances have at most 4 steps")
        return self


# ==================== HARNESS MODELS ====================

class SeedSet(BaseModel):
    name: str
    seeds: List[int] = Field(..., min_length=1)

    @field_validator("seeds")
    @classmethod
    def unique_seeds(cls, value: List[int]) -> List[int]:
        if len(set(value)) != len(value):
            raise ValueError("seed set contains duplicates")
        return value


class RunManifest(BaseModel):
    command: str
    config_path: Optional[str] = None
    config_sha256: Optional[str] = None
    solver: Optional[str] = None
    solver_config: Optional[Dict[str, Any]] = None
    seed_set: Optional[SeedSet] = None
    options: Dict[str, Any] = Field(default_factory=dict)
    tool_version: str
    started_at: datetime
    finished_at: Optional[datetime] = None
    artifacts: List[str] = Field(default_factory=list)
    status: str = "running"


class LeaderboardRow(BaseModel):
    solver: str
    mean_score: Optional[float] = None
    std_error: Optional[float] = None
    wall_time: float = 0.0
    plan_path: Optional[str] = None
    status: str = "ok"  # "ok" or "DNF"
    error: Optional[str] = None
