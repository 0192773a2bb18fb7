import pytest

from pathway import env
from pathway.config import DATA_DIR, load_env_config, load_tiny_instance
from pathway.models import PriceSeriesId


def make_config(horizon=20, sigma=0.0, kappa=0.3, **overrides):
    """Small EnvConfig built in code; coefficient overrides as wind={...} etc."""
    def tech(**values):
        base = {"capacity_factor": 0.0, "revenue_rate": 0.0, "capex_rate": 0.0, "opex_rate": 0.0,
                "decom_rate": 0.0, "emission_intensity": 0.0, "build_jobs": 0.0, "ops_jobs": 0.0}
        base.update(values)
        return base

    references = {
        PriceSeriesId.CARBON_PRICE.value: [100.0 + 5 * t for t in range(horizon)],
        PriceSeriesId.CCS_CAPEX.value: [50.0 - t for t in range(horizon)],
        PriceSeriesId.WIND_CAPEX.value: [1000.0 - 10 * t for t in range(horizon)],
        PriceSeriesId.WIND_DEVEX.value: [200.0 - 2 * t for t in range(horizon)],
    }
    payload = {
        "horizon": horizon,
        "wind": tech(**overrides.pop("wind", {})),
        "blue": tech(**overrides.pop("blue", {})),
        "green": tech(**overrides.pop("green", {})),
        "noise": {"series": {
            name: {"reference": ref, "kappa": kappa, "sigma": sigma} for name, ref in references.items()
        }},
        **overrides,
    }
    return env.coerce_config(payload)


@pytest.fixture(scope="session")
def default_config():
    return load_env_config()


@pytest.fixture(scope="session")
def jobs_config():
    return load_env_config(DATA_DIR / "jobs_dominant.json")


@pytest.fixture(scope="session")
def tiny_two_tech():
    return load_tiny_instance(DATA_DIR / "tiny_two_tech.json")


@pytest.fixture(scope="session")
def tiny_one_tech():
    return load_tiny_instance(DATA_DIR / "tiny_one_tech.json")


@pytest.fixture(scope="session")
def short_config(default_config):
    """Default economics on a four-step horizon, for quick harness runs"""
    return env.reduced(default_config, 4)
