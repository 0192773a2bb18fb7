# File: harness/export.py
# Plan sources, trace/plan/score files (CSV via pandas, JSON via pydantic)

import json
import logging
from pathlib import Path
from typing import Iterable, List, Sequence, Union

import pandas as pd

from algorithms.baselines import random_plan, rule_based_plan
from pathway.models import HORIZON, SERIES_ORDER, EpisodeTrace, Plan
from utils.errors import InvalidPlan
from utils.validators import check_plan_rows

logger = logging.getLogger(__name__)

TRACE_COLUMNS = [
    "t", "year", "a_w", "a_b", "a_g",
    "revenue", "capex", "opex", "decom", "co2", "jobs_term", "total",
    "p_carbon", "p_ccs", "p_wind_capex", "p_wind_devex",
    "cumulative_reward",
]
PLAN_COLUMNS = ["w", "b", "g"]


# ==================== PLANS ====================

def read_plan(path: Union[str, Path]) -> Plan:
    """Plan from a JSON [20][3] array (or {"actions": ...}) or a CSV with columns w,b,g"""
    path = Path(path)
    if not path.exists():
        raise InvalidPlan(f"plan file not found: {path}")
    try:
        if path.suffix.lower() == ".csv":
            frame = pd.read_csv(path)
            missing = [c for c in PLAN_COLUMNS if c not in frame.columns]
            if missing:
                raise InvalidPlan(f"plan CSV {path} lacks columns {missing}")
            rows = frame[PLAN_COLUMNS].astype(float).values.tolist()
        else:
            document = json.loads(path.read_text(encoding="utf-8"))
            if isinstance(document, dict):
                document = document.get("actions", document.get("plan"))
            rows = [[float(v) for v in row] for row in document]
    except (ValueError, TypeError, KeyError) as e:
        raise InvalidPlan(f"cannot read plan {path}: {e}") from e
    check_plan_rows(rows, HORIZON)
    try:
        return Plan.from_rows(rows)
    except ValueError as e:
        raise InvalidPlan(f"plan {path} has entries outside the action bounds: {e}") from e


def plan_from_source(source: str) -> Plan:
    """Resolve a --plan value: zero, random:<seed>, constant:<fw>,<fb>,<fg> or a file path"""
    kind, _, arg = source.partition(":")
    if source == "zero":
        return Plan.zero()
    if kind == "random" and arg:
        try:
            seed = int(arg)
        except ValueError as e:
            raise ValueError(f"random plan source needs an integer seed, got {arg!r}") from e
        return random_plan(seed)
    if kind == "constant" and arg:
        try:
            fractions = [float(v) for v in arg.split(",")]
        except ValueError as e:
            raise ValueError(f"constant plan source needs three fractions, got {arg!r}") from e
        return rule_based_plan(fractions)
    return read_plan(source)


def write_plan(plan: Plan, json_path: Path, csv_path: Path = None) -> List[Path]:
    rows = plan.to_rows()
    json_path.write_text(json.dumps(rows, indent=2) + "\n", encoding="utf-8")
    written = [json_path]
    if csv_path is not None:
        pd.DataFrame(rows, columns=PLAN_COLUMNS).to_csv(csv_path, index=False)
        written.append(csv_path)
    return written


# ==================== TRACES & SCORES ====================

def trace_frame(trace: EpisodeTrace) -> pd.DataFrame:
    records = []
    for step in trace.steps:
        b = step.breakdown
        records.append([
            step.t, step.year, step.action.w, step.action.b, step.action.g,
            b.revenue, b.capex, b.opex, b.decom, b.co2, b.jobs_term, b.total,
            *(step.prices[series] for series in SERIES_ORDER),
            step.cumulative_reward,
        ])
    return pd.DataFrame(records, columns=TRACE_COLUMNS)


def write_trace(trace: EpisodeTrace, out_dir: Path, stem: str) -> List[Path]:
    csv_path = out_dir / f"{stem}.csv"
    json_path = out_dir / f"{stem}.json"
    trace_frame(trace).to_csv(csv_path, index=False)
    json_path.write_text(trace.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info(f"Wrote trace for seed {trace.seed} ({len(trace.steps)} steps, score {trace.score:.3f}) to {csv_path}")
    return [csv_path, json_path]


def write_scores(seeds: Sequence[int], scores: Sequence[float], path: Path) -> Path:
    pd.DataFrame({"seed": list(seeds), "score": list(scores)}).to_csv(path, index=False)
    return path


def write_incumbents(history: Iterable[float], path: Path) -> Path:
    values = list(history)
    pd.DataFrame({"evaluation": range(len(values)), "objective": values}).to_csv(path, index=False)
    return path


def write_json(payload, path: Path) -> Path:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
