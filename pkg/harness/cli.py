# File: harness/cli.py
# Command-line front end: episode, optimize, evaluate, leaderboard, oracle

import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

import click

from algorithms.baselines import brute_force_oracle
from algorithms.evaluation import episode_scores, mean_and_stderr
from harness import export
from harness.leaderboard import (
    DEFAULT_LEADERBOARD, SOLVERS, build_leaderboard, objective_seed_set, run_solver, write_leaderboard,
)
from harness.manifest import finish_manifest, start_manifest
from harness.seeds import named_seed_set, parse_seed_set
from pathway import env
from pathway.config import DEFAULT_CONFIG, DATA_DIR, load_env_config, load_solver_settings, load_tiny_instance
from pathway.models import EnvConfig, ObservationMode, SeedSet, SolverSettings
from utils.errors import PathwayError
from utils.logging_config import configure_logging
from utils.settings import get_settings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2


class PathwayGroup(click.Group):
    """click group with a fixed exit-code contract: 0 ok, 1 usage, 2 runtime/model error"""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        if not standalone_mode:
            return super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
        try:
            super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
        except click.UsageError as e:
            e.show()
            sys.exit(EXIT_USAGE)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_USAGE)
        except click.ClickException as e:
            e.show()
            sys.exit(EXIT_RUNTIME)
        except PathwayError as e:
            logger.error(f"{type(e).__name__}: {e}")
            click.echo(f"Error: {e}", err=True)
            sys.exit(EXIT_RUNTIME)
        except OSError as e:
            click.echo(f"Error: {e}", err=True)
            sys.exit(EXIT_RUNTIME)
        sys.exit(EXIT_OK)


@dataclass
class RunContext:
    config_path: Path
    out_dir: Path
    seed_set: Optional[SeedSet]
    mode: ObservationMode
    deterministic: bool
    max_workers: int

    def env_config(self) -> EnvConfig:
        config = load_env_config(self.config_path)
        return env.deterministic(config) if self.deterministic else config

    def evaluation_seed_set(self) -> SeedSet:
        return self.seed_set or named_seed_set("default")

    def solver_settings(self, path: Optional[Path] = None) -> SolverSettings:
        return load_solver_settings(path or self.config_path)

    def options(self, **extra) -> dict:
        return {"mode": self.mode.value, "deterministic": self.deterministic, **extra}


def _usage(fn, *args, **kwargs):
    """Call fn, turning argument errors into click usage errors"""
    try:
        return fn(*args, **kwargs)
    except PathwayError:
        raise
    except ValueError as e:
        raise click.UsageError(str(e)) from e


@click.group(cls=PathwayGroup)
@click.option("--config", "config_path", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Environment config (JSON, YAML or TOML); defaults to the shipped config")
@click.option("--out", "out_dir", type=click.Path(file_okay=False, path_type=Path), default=None,
              help="Output directory (default: $PTNZ_OUTPUT_DIR or ./runs)")
@click.option("--seed-set", "seed_set", default=None,
              help="Named seed set (default, train, holdout[:count]), list '1,2,3' or range '5..9'; "
                   "evaluation defaults to 'default', solver objectives to their own training seeds")
@click.option("--mode", type=click.Choice([m.value for m in ObservationMode]), default="open", show_default=True)
@click.option("--deterministic", is_flag=True, help="Remove all price noise (sigma = 0)")
@click.option("--log-level", default=None, help="Logging level (default: $PTNZ_LOG_LEVEL or INFO)")
@click.pass_context
def cli(ctx, config_path, out_dir, seed_set, mode, deterministic, log_level):
    """Net-zero technology pathway environment, solvers and benchmark harness."""
    settings = get_settings(load_env_file=True)
    configure_logging(log_level or settings.log_level)
    ctx.obj = RunContext(
        config_path=config_path or DEFAULT_CONFIG,
        out_dir=out_dir or settings.output_dir,
        seed_set=_usage(parse_seed_set, seed_set) if seed_set is not None else None,
        mode=ObservationMode(mode),
        deterministic=deterministic,
        max_workers=settings.max_workers,
    )


@cli.command()
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--plan", "plan_source", default="zero", show_default=True,
              help="zero, random:<seed>, constant:<fw>,<fb>,<fg> or a plan file")
@click.pass_obj
def episode(run: RunContext, seed: int, plan_source: str):
    """Play one episode and write its trace (CSV + JSON)."""
    config = run.env_config()
    plan = _usage(export.plan_from_source, plan_source)
    manifest = start_manifest(run.out_dir, "episode", run.config_path,
                              options=run.options(seed=seed, plan=plan_source))
    trace = env.run_plan(config, seed, plan, run.mode)
    artifacts = export.write_trace(trace, run.out_dir, f"episode_seed{seed}")
    finish_manifest(manifest, artifacts)
    click.echo(f"score {trace.score!r}")


@cli.command()
@click.option("--solver", type=click.Choice(SOLVERS), required=True)
@click.option("--solver-config", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
              help="File whose 'solvers' section overrides the one in --config")
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_obj
def optimize(run: RunContext, solver: str, solver_config: Optional[Path], seed: int):
    """Optimize a plan with one solver; write the plan and its incumbent log."""
    config = run.env_config()
    settings = run.solver_settings(solver_config)
    solver_payload = getattr(settings, solver).model_dump(mode="json") if hasattr(settings, solver) else None
    seed_set = objective_seed_set(solver, settings, run.seed_set, run.deterministic)
    if run.seed_set is not None and seed_set != run.seed_set:
        logger.warning(f"--seed-set {run.seed_set.name} ignored: noise-free objective")
    manifest = start_manifest(run.out_dir, "optimize", run.config_path, seed_set=seed_set, solver=solver,
                              solver_config=solver_payload, options=run.options(seed=seed))

    result = run_solver(solver, config, settings, seed=seed, deterministic=run.deterministic, seed_set=seed_set)
    artifacts: List[Path] = export.write_plan(result.plan, run.out_dir / f"plan_{solver}.json",
                                              run.out_dir / f"plan_{solver}.csv")
    artifacts.append(export.write_incumbents(result.history, run.out_dir / f"incumbents_{solver}.csv"))
    if solver == "local":
        if result.certified:
            logger.info(f"Termination certificate: no single +/-{settings.local.search.delta} move improves "
                        f"the objective after {result.rounds} rounds")
        else:
            logger.warning(f"No termination certificate: stopped after {result.rounds} rounds")
    finish_manifest(manifest, artifacts)
    click.echo(f"{solver} objective {result.value!r}")


@cli.command()
@click.option("--plan", "plan_source", required=True,
              help="zero, random:<seed>, constant:<fw>,<fb>,<fg> or a plan file")
@click.pass_obj
def evaluate(run: RunContext, plan_source: str):
    """Score a plan on the seed set: mean, standard error and per-seed scores."""
    config = run.env_config()
    plan = _usage(export.plan_from_source, plan_source)
    seed_set = run.evaluation_seed_set()
    manifest = start_manifest(run.out_dir, "evaluate", run.config_path, seed_set=seed_set,
                              options=run.options(plan=plan_source))
    scores = episode_scores(config, plan, seed_set, run.max_workers)
    mean, std_error = mean_and_stderr(scores)
    artifacts = [
        export.write_scores(seed_set.seeds, scores, run.out_dir / "scores.csv"),
        export.write_json({"plan": plan_source, "seed_set": seed_set.name, "episodes": len(scores),
                           "mean": mean, "std_error": std_error}, run.out_dir / "report.json"),
    ]
    finish_manifest(manifest, artifacts)
    click.echo(f"mean {mean!r} std_error {std_error!r} over {len(scores)} seeds")


@cli.command()
@click.option("--solver", "solvers", multiple=True, type=click.Choice(SOLVERS),
              help="Repeat to add solvers (default: eg, local, ddpg, random)")
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_obj
def leaderboard(run: RunContext, solvers, seed: int):
    """Run several solvers and rank their plans on one shared seed set."""
    config = run.env_config()
    settings = run.solver_settings()
    solvers = list(solvers) or list(DEFAULT_LEADERBOARD)
    seed_set = run.evaluation_seed_set()
    manifest = start_manifest(run.out_dir, "leaderboard", run.config_path, seed_set=seed_set,
                              solver_config=settings.model_dump(mode="json"),
                              options=run.options(solvers=solvers, seed=seed))
    rows = build_leaderboard(config, settings, solvers, seed_set, run.out_dir, seed=seed,
                             deterministic=run.deterministic, max_workers=run.max_workers)
    artifacts = write_leaderboard(rows, run.out_dir)
    finish_manifest(manifest, artifacts)
    for rank, row in enumerate(rows, start=1):
        if row.status == "ok":
            click.echo(f"{rank}. {row.solver}: {row.mean_score:.3f} +/- {row.std_error:.3f}")
        else:
            click.echo(f"{rank}. {row.solver}: DNF ({row.error})")


def _parse_levels(text: Optional[str]) -> Optional[List[float]]:
    if text is None:
        return None
    try:
        levels = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise click.UsageError(f"levels must be comma-separated numbers, got {text!r}") from e
    if not levels:
        raise click.UsageError("levels must not be empty")
    return levels


@cli.command()
@click.option("--tiny", "tiny_path", type=click.Path(dir_okay=False, path_type=Path),
              default=DATA_DIR / "tiny_two_tech.json", show_default=True)
@click.option("--levels", default=None, help="Comma-separated fractions of each bound (default: from the file)")
@click.pass_obj
def oracle(run: RunContext, tiny_path: Path, levels: Optional[str]):
    """Exhaustively solve a tiny instance on a level grid."""
    grid = _parse_levels(levels)
    tiny = load_tiny_instance(tiny_path)
    manifest = start_manifest(run.out_dir, "oracle", tiny_path, options=run.options(levels=grid))
    plan, score = _usage(brute_force_oracle, tiny, grid)
    artifacts = export.write_plan(plan, run.out_dir / "oracle_plan.json")
    artifacts.append(export.write_json({
        "tiny": str(tiny_path),
        "technologies": tiny.technologies,
        "levels": grid if grid is not None else tiny.levels,
        "score": score,
    }, run.out_dir / "oracle.json"))
    finish_manifest(manifest, artifacts)
    click.echo(f"oracle score {score!r}")
