# File: harness/leaderboard.py
# Running solvers by name and ranking their plans on a shared seed set

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence

import pandas as pd

from algorithms.baselines import random_plan, rule_based_plan
from algorithms.coordinate_search import eg_coordinate_maximize
from algorithms.ddpg_lite import ddpg_lite_optimize
from algorithms.evaluation import evaluate_plan_mean
from algorithms.local_search import vultures_local_search
from algorithms.objective import Objective, SolverResult, plan_objective
from harness.export import write_plan
from harness.seeds import named_seed_set
from pathway.models import EnvConfig, LeaderboardRow, Plan, SeedSet, SolverSettings

logger = logging.getLogger(__name__)

SOLVERS = ("eg", "local", "ddpg", "random", "rule")
DEFAULT_LEADERBOARD = ("eg", "local", "ddpg", "random")
RULE_FRACTIONS = (0.5, 0.5, 0.5)
LEADERBOARD_COLUMNS = ["rank", "solver", "mean_score", "std_error", "status", "plan_path", "error"]
NOISE_FREE = SeedSet(name="noise-free", seeds=[0])


def objective_seed_set(
    solver: str,
    settings: SolverSettings,
    seed_set: Optional[SeedSet] = None,
    deterministic: bool = False,
) -> SeedSet:
    """
    Seeds a solver's objective averages over.

    Noise-free runs score a single path. Otherwise an explicit seed set wins;
    without one local search uses `local.seed` (noise-free when unset) and
    every other solver the `train` set.
    """
    if deterministic:
        return NOISE_FREE
    if seed_set is not None:
        return seed_set
    if solver == "local":
        seed = settings.local.seed
        return NOISE_FREE if seed is None else SeedSet(name=f"local:{seed}", seeds=[seed])
    return named_seed_set("train", settings.training_seeds)


def _objective(config: EnvConfig, seed_set: SeedSet) -> Objective:
    if seed_set == NOISE_FREE:
        return plan_objective(config, deterministic=True)
    return plan_objective(config, seed_set.seeds)


def _baseline_result(plan: Plan, objective: Objective, started: float) -> SolverResult:
    x = objective.from_plan(plan)
    value = objective(x)
    return SolverResult(x=x, value=value, history=[value], evaluations=1,
                        wall_time=time.time() - started, plan=plan)


def run_solver(
    solver: str,
    config: EnvConfig,
    settings: SolverSettings,
    seed: int = 0,
    deterministic: bool = False,
    seed_set: Optional[SeedSet] = None,
) -> SolverResult:
    """Run one solver by name on the full plan objective over `objective_seed_set`"""
    if solver not in SOLVERS:
        raise ValueError(f"unknown solver {solver!r}; choose from {', '.join(SOLVERS)}")
    started = time.time()
    seeds = objective_seed_set(solver, settings, seed_set, deterministic)
    objective = _objective(config, seeds)
    logger.info(f"Running solver {solver} (seed {seed}, objective {objective.name}, seed set {seeds.name})")

    if solver == "eg":
        eg = settings.eg
        result = eg_coordinate_maximize(objective, eg.golden, passes=eg.passes, init=eg.init,
                                        sweep=eg.sweep, seed=seed)
    elif solver == "local":
        result = vultures_local_search(objective, None, settings.local.search)
    elif solver == "ddpg":
        result = ddpg_lite_optimize(objective, settings.ddpg, seed)
    elif solver == "random":
        result = _baseline_result(random_plan(seed), objective, started)
    else:
        result = _baseline_result(rule_based_plan(RULE_FRACTIONS), objective, started)

    result.wall_time = time.time() - started
    logger.info(f"Solver {solver} finished: objective {result.value:.3f}, "
                f"{result.evaluations} evaluations, {result.wall_time:.2f}s")
    return result


def _rank(rows: List[LeaderboardRow]) -> List[LeaderboardRow]:
    finished = sorted((r for r in rows if r.status == "ok"), key=lambda r: (-r.mean_score, r.solver))
    failed = sorted((r for r in rows if r.status != "ok"), key=lambda r: r.solver)
    return finished + failed


def build_leaderboard(
    config: EnvConfig,
    settings: SolverSettings,
    solvers: Sequence[str],
    seed_set: SeedSet,
    out_dir: Path,
    seed: int = 0,
    deterministic: bool = False,
    max_workers: int = 1,
) -> List[LeaderboardRow]:
    """
    Run every solver, evaluate each plan on the same seed set, rank by mean.

    A solver that raises becomes a DNF row and the others still run.
    """
    if not solvers:
        raise ValueError("at least one solver is required")
    plans_dir = out_dir / "plans"
    plans_dir.mkdir(parents=True, exist_ok=True)

    def entry(solver: str) -> LeaderboardRow:
        started = time.time()
        try:
            result = run_solver(solver, config, settings, seed=seed, deterministic=deterministic)
            plan_path = plans_dir / f"{solver}.json"
            write_plan(result.plan, plan_path)
            mean, std_error = evaluate_plan_mean(config, result.plan, seed_set)
        except Exception as e:
            logger.error(f"Solver {solver} did not finish: {type(e).__name__}: {e}")
            return LeaderboardRow(solver=solver, wall_time=time.time() - started, status="DNF", error=str(e))
        return LeaderboardRow(
            solver=solver,
            mean_score=mean,
            std_error=std_error,
            wall_time=time.time() - started,
            plan_path=f"plans/{plan_path.name}",
        )

    if max_workers > 1 and len(solvers) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(entry, solvers))
    else:
        rows = [entry(s) for s in solvers]
    return _rank(rows)


def leaderboard_frame(rows: Sequence[LeaderboardRow]) -> pd.DataFrame:
    """CSV view; wall times stay out so reruns are byte-identical"""
    records = [
        [rank, r.solver, r.mean_score, r.std_error, r.status, r.plan_path or "", r.error or ""]
        for rank, r in enumerate(rows, start=1)
    ]
    return pd.DataFrame(records, columns=LEADERBOARD_COLUMNS)


def write_leaderboard(rows: Sequence[LeaderboardRow], out_dir: Path) -> List[Path]:
    csv_path = out_dir / "leaderboard.csv"
    json_path = out_dir / "leaderboard.json"
    leaderboard_frame(rows).to_csv(csv_path, index=False)
    payload = [row.model_dump(mode="json") for row in rows]
    json_path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return [csv_path, json_path]
