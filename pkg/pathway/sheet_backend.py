# File: pathway/sheet_backend.py
# The reward model expressed as a formula sheet and evaluated through sheetdag

import logging
from typing import Dict, List, Sequence

import numpy as np

from pathway import pricing
from pathway.models import EnvConfig, Plan, SERIES_ORDER
from sheetdag import SheetGraph, build_graph

logger = logging.getLogger(__name__)

TECH_KEYS = (("w", "wind"), ("b", "blue"), ("g", "green"))
PRICE_CELLS = ("p_carbon", "p_ccs", "p_wind_capex", "p_wind_devex")  # SERIES_ORDER
DERIVED = ("revenue", "capex", "opex", "decom", "co2", "jobs_term", "reward")


def _num(value: float) -> str:
    return repr(float(value))


def sheet_definitions(config: EnvConfig) -> Dict[str, str]:
    """Cell formulas for every step of the episode.

    Inputs per step t: a_w_t, a_b_t, a_g_t and the four price cells; the
    coefficients are constant cells too. Derived per step: cap_*_t,
    revenue_t, capex_t, opex_t, decom_t, co2_t, jobs_term_t, reward_t.
    """
    defs: Dict[str, str] = {}
    for short, name in TECH_KEYS:
        tech = getattr(config, name)
        defs[f"cf_{name}"] = _num(tech.capacity_factor)
        defs[f"rev_{name}"] = _num(tech.revenue_rate)
        defs[f"capex_{name}"] = _num(tech.capex_rate)
        defs[f"opex_{name}"] = _num(tech.opex_rate)
        defs[f"decom_{name}"] = _num(tech.decom_rate)
        defs[f"em_{name}"] = _num(tech.emission_intensity)
        defs[f"bj_{name}"] = _num(tech.build_jobs)
        defs[f"oj_{name}"] = _num(tech.ops_jobs)

    for t in range(config.horizon):
        for short, _ in TECH_KEYS:
            defs[f"a_{short}_{t}"] = "0"
        for cell, series in zip(PRICE_CELLS, SERIES_ORDER):
            defs[f"{cell}_{t}"] = _num(config.noise.of(series).reference[t])
        defs[f"ramp_{t}"] = _num(config.ramp(t))
        defs[f"jw_{t}"] = _num(t + config.jobs_weight_start)

        for short, _ in TECH_KEYS:
            defs[f"cap_{short}_{t}"] = f"a_{short}_{t}" if t == 0 else f"cap_{short}_{t - 1} + a_{short}_{t}"

        defs[f"revenue_{t}"] = (f"rev_wind * cf_wind * cap_w_{t} + rev_blue * cf_blue * cap_b_{t}"
                                f" + rev_green * cf_green * cap_g_{t}")
        defs[f"capex_{t}"] = (f"(p_wind_capex_{t} + p_wind_devex_{t}) * a_w_{t}"
                              f" + capex_blue * a_b_{t} + capex_green * a_g_{t}")
        defs[f"opex_{t}"] = f"opex_wind * cap_w_{t} + opex_blue * cap_b_{t} + opex_green * cap_g_{t}"
        defs[f"decom_{t}"] = f"decom_wind * a_w_{t} + decom_blue * a_b_{t} + decom_green * a_g_{t}"
        defs[f"gross_{t}"] = f"em_wind * cap_w_{t} + em_blue * cap_b_{t} + em_green * cap_g_{t}"
        defs[f"capture_{t}"] = f"ramp_{t} * gross_{t}"
        previous_capture = "0" if t == 0 else f"capture_{t - 1}"
        defs[f"ccus_new_{t}"] = f"MAX(0, capture_{t} - {previous_capture})"
        defs[f"co2_{t}"] = f"p_carbon_{t} * (gross_{t} - capture_{t}) + p_ccs_{t} * ccus_new_{t}"

        parts = []
        for short, name in TECH_KEYS:
            previous = "0" if t == 0 else f"a_{short}_{t - 1}"
            parts.append(f"(bj_{name} * (a_{short}_{t} - {previous}) + oj_{name} * a_{short}_{t})")
        defs[f"jobs_{t}"] = " + ".join(parts)
        defs[f"jobs_term_{t}"] = f"jw_{t} * jobs_{t}"
        defs[f"reward_{t}"] = f"revenue_{t} - (capex_{t} + opex_{t} + decom_{t} + co2_{t}) + jobs_term_{t}"
    return defs


def bind_sheet_backend(config: EnvConfig) -> SheetGraph:
    """Compile the reward sheet into a dependency graph"""
    graph = build_graph(sheet_definitions(config))
    logger.debug(f"Bound sheet backend: {len(graph)} cells, {len(graph.inputs)} inputs")
    return graph


class SheetBackend:
    """One episode's sheet: set action and price cells, read reward cells"""

    def __init__(self, config: EnvConfig):
        self.config = config
        self.graph = bind_sheet_backend(config)

    def step(self, t: int, action: Sequence[float], prices: Sequence[float]) -> Dict[str, float]:
        for (short, _), value in zip(TECH_KEYS, action):
            self.graph.set_input(f"a_{short}_{t}", value)
        for cell, value in zip(PRICE_CELLS, prices):
            self.graph.set_input(f"{cell}_{t}", value)
        values = self.graph.recompute_dirty()
        return {name: values[f"{name}_{t}"] for name in DERIVED}

    def rewards(self, plan: Plan, price_path: np.ndarray) -> List[float]:
        rows = plan.to_rows()
        return [self.step(t, rows[t], price_path[t])["reward"] for t in range(self.config.horizon)]


def sheet_rewards(config: EnvConfig, seed: int, plan: Plan) -> List[float]:
    """Per-step rewards of a plan evaluated on the sheet backend"""
    path = pricing.price_path(config.noise, seed, config.horizon)
    return SheetBackend(config).rewards(plan, path)
