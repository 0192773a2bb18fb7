import json
import re

import pandas as pd
import pytest
from click.testing import CliRunner

from algorithms.objective import plan_objective
from harness import leaderboard
from harness.cli import cli
from harness.export import plan_from_source, read_plan, write_plan
from harness.seeds import named_seed_set, parse_seed_set
from pathway.config import DEFAULT_CONFIG, file_sha256, load_document, load_env_config
from pathway.models import ACTION_UPPER, Plan, SeedSet, SolverSettings
from utils.errors import InvalidPlan


@pytest.fixture
def short_config_file(tmp_path):
    """Default economics on four steps with cheap solver settings"""
    document = load_document(DEFAULT_CONFIG)
    document["horizon"] = 4
    document["solvers"] = {
        "training_seeds": 3,
        "eg": {"golden": {"tolerance": 0.01}},
        "ddpg": {"hidden_widths": [8], "iterations": 5, "batch_size": 8, "critic_steps": 3},
    }
    path = tmp_path / "short.json"
    path.write_text(json.dumps(document))
    return path


def invoke(*args):
    return CliRunner().invoke(cli, ["--log-level", "WARNING", *args])


# ==================== EPISODE ====================

def test_episode_zero_plan(tmp_path):
    result = invoke("--out", str(tmp_path), "episode", "--seed", "3", "--plan", "zero")
    assert result.exit_code == 0, result.output
    assert "score 0.0" in result.output

    frame = pd.read_csv(tmp_path / "episode_seed3.csv")
    assert len(frame) == 20
    assert frame["total"].eq(0.0).all()
    assert list(frame["year"]) == list(range(2031, 2051))
    assert (tmp_path / "episode_seed3.json").exists()


def test_episode_csv_is_byte_identical(tmp_path):
    for name in ("first", "second"):
        result = invoke("--out", str(tmp_path / name), "--mode", "closed", "episode", "--seed", "5",
                        "--plan", "random:3")
        assert result.exit_code == 0, result.output
    first = (tmp_path / "first" / "episode_seed5.csv").read_bytes()
    assert first == (tmp_path / "second" / "episode_seed5.csv").read_bytes()


def test_episode_writes_manifest(tmp_path):
    result = invoke("--out", str(tmp_path), "episode", "--plan", "constant:1,0,0.5")
    assert result.exit_code == 0, result.output
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["command"] == "episode"
    assert manifest["status"] == "ok"
    assert manifest["config_sha256"] == file_sha256(DEFAULT_CONFIG)
    assert manifest["options"]["plan"] == "constant:1,0,0.5"
    assert sorted(manifest["artifacts"]) == ["episode_seed0.csv", "episode_seed0.json"]
    assert manifest["finished_at"] is not None


# ==================== EVALUATE ====================

def test_evaluate_zero_plan(tmp_path):
    result = invoke("--out", str(tmp_path), "--seed-set", "default:5", "evaluate", "--plan", "zero")
    assert result.exit_code == 0, result.output
    assert "mean 0.0 std_error 0.0 over 5 seeds" in result.output
    scores = pd.read_csv(tmp_path / "scores.csv")
    assert list(scores["seed"]) == [0, 1, 2, 3, 4]
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["episodes"] == 5


def test_evaluate_plan_file(tmp_path):
    plan_path = tmp_path / "plan.json"
    write_plan(Plan.from_rows([[1.0, 2.0, 3.0]] * 20), plan_path)
    result = invoke("--out", str(tmp_path / "out"), "--seed-set", "1..3", "evaluate", "--plan", str(plan_path))
    assert result.exit_code == 0, result.output
    assert "over 3 seeds" in result.output


def test_evaluate_missing_plan_file(tmp_path):
    result = invoke("--out", str(tmp_path), "evaluate", "--plan", str(tmp_path / "missing.json"))
    assert result.exit_code == 2


def test_bad_config_file(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text('{"horizon": 20}')
    result = invoke("--config", str(broken), "--out", str(tmp_path), "episode")
    assert result.exit_code == 2


def test_bad_seed_set_is_usage_error(tmp_path):
    result = invoke("--out", str(tmp_path), "--seed-set", "abc", "evaluate", "--plan", "zero")
    assert result.exit_code == 1


def test_bad_plan_source_is_usage_error(tmp_path):
    result = invoke("--out", str(tmp_path), "episode", "--plan", "constant:2,0,0")
    assert result.exit_code == 1


# ==================== OPTIMIZE / LEADERBOARD ====================

def test_optimize_eg_on_short_config(tmp_path, short_config_file):
    out = tmp_path / "out"
    result = invoke("--config", str(short_config_file), "--out", str(out), "optimize", "--solver", "eg")
    assert result.exit_code == 0, result.output
    assert "eg objective" in result.output

    plan = read_plan(out / "plan_eg.json")
    rows = plan.to_array()
    assert (rows >= 0).all() and (rows <= ACTION_UPPER).all()
    assert (rows[4:] == 0).all()

    incumbents = pd.read_csv(out / "incumbents_eg.csv")
    assert incumbents["objective"].is_monotonic_increasing
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["solver"] == "eg"
    assert manifest["solver_config"]["golden"]["tolerance"] == 0.01


def test_optimize_local_on_short_config(tmp_path, short_config_file):
    result = invoke("--config", str(short_config_file), "--out", str(tmp_path), "optimize", "--solver", "local")
    assert result.exit_code == 0, result.output
    assert (tmp_path / "plan_local.csv").exists()


def test_leaderboard_ranks_by_mean(tmp_path, short_config_file):
    out = tmp_path / "out"
    result = invoke("--config", str(short_config_file), "--out", str(out), "--seed-set", "default:5",
                    "leaderboard", "--solver", "random", "--solver", "rule", "--solver", "eg")
    assert result.exit_code == 0, result.output

    board = pd.read_csv(out / "leaderboard.csv")
    assert sorted(board["solver"]) == ["eg", "random", "rule"]
    assert list(board["rank"]) == [1, 2, 3]
    assert board["mean_score"].is_monotonic_decreasing
    assert (board["status"] == "ok").all()
    for path in board["plan_path"]:
        assert (out / path).exists()


def test_leaderboard_csv_is_byte_identical(tmp_path, short_config_file):
    for name in ("first", "second"):
        result = invoke("--config", str(short_config_file), "--out", str(tmp_path / name),
                        "--seed-set", "default:4", "leaderboard", "--solver", "random", "--solver", "ddpg")
        assert result.exit_code == 0, result.output
    first = (tmp_path / "first" / "leaderboard.csv").read_bytes()
    assert first == (tmp_path / "second" / "leaderboard.csv").read_bytes()


def test_optimize_records_training_seed_set(tmp_path, short_config_file):
    result = invoke("--config", str(short_config_file), "--out", str(tmp_path), "optimize", "--solver", "random")
    assert result.exit_code == 0, result.output
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["seed_set"] == {"name": "train", "seeds": [10000, 10001, 10002]}


def test_optimize_honors_seed_set(tmp_path, short_config_file):
    result = invoke("--config", str(short_config_file), "--out", str(tmp_path), "--seed-set", "1,2",
                    "optimize", "--solver", "eg")
    assert result.exit_code == 0, result.output
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["seed_set"] == {"name": "1,2", "seeds": [1, 2]}

    # the reported objective is the mean over seeds 1 and 2
    plan = read_plan(tmp_path / "plan_eg.json")
    config = load_env_config(short_config_file)
    expected = plan_objective(config, [1, 2])
    reported = float(re.search(r"eg objective (\S+)", result.output).group(1))
    assert reported == pytest.approx(expected(expected.from_plan(plan)), rel=1e-12)


def test_deterministic_local_logs_certificate(tmp_path, short_config_file, caplog):
    result = CliRunner().invoke(cli, ["--log-level", "INFO", "--config", str(short_config_file),
                                      "--out", str(tmp_path), "--deterministic", "optimize", "--solver", "local"])
    assert result.exit_code == 0, result.output
    assert "Termination certificate: no single +/-1.0 move improves the objective" in caplog.text
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["seed_set"]["name"] == "noise-free"


def test_failing_solver_is_ranked_dnf(tmp_path, short_config, monkeypatch):
    original = leaderboard.run_solver

    def flaky(solver, *args, **kwargs):
        if solver == "eg":
            raise RuntimeError("solver crashed")
        return original(solver, *args, **kwargs)

    monkeypatch.setattr(leaderboard, "run_solver", flaky)
    rows = leaderboard.build_leaderboard(short_config, SolverSettings(training_seeds=2), ["eg", "random", "rule"],
                                         named_seed_set("default", 3), tmp_path)
    assert [row.solver for row in rows][-1] == "eg"
    assert rows[-1].status == "DNF"
    assert rows[-1].error == "solver crashed"
    assert all(row.status == "ok" for row in rows[:-1])


def test_objective_seed_sets():
    settings = SolverSettings(training_seeds=2)
    explicit = SeedSet(name="1,2", seeds=[1, 2])
    assert leaderboard.objective_seed_set("eg", settings).seeds == [10000, 10001]
    assert leaderboard.objective_seed_set("ddpg", settings, explicit) == explicit
    assert leaderboard.objective_seed_set("local", settings, explicit) == explicit
    assert leaderboard.objective_seed_set("local", settings).name == "noise-free"
    assert leaderboard.objective_seed_set("eg", settings, explicit, deterministic=True).name == "noise-free"
    seeded = SolverSettings(local={"seed": 7})
    assert leaderboard.objective_seed_set("local", seeded).seeds == [7]


# ==================== ORACLE ====================

def test_oracle_default_instance(tmp_path):
    result = invoke("--out", str(tmp_path), "oracle")
    assert result.exit_code == 0, result.output
    assert "oracle score" in result.output
    report = json.loads((tmp_path / "oracle.json").read_text())
    assert report["technologies"] == ["wind", "blue"]
    assert report["levels"] == [0.0, 0.5, 1.0]


def test_oracle_empty_levels(tmp_path):
    result = invoke("--out", str(tmp_path), "oracle", "--levels", "")
    assert result.exit_code == 1


def test_oracle_levels_out_of_range(tmp_path):
    result = invoke("--out", str(tmp_path), "oracle", "--levels", "0,1.5")
    assert result.exit_code == 1


# ==================== SEEDS & PLAN FILES ====================

@pytest.mark.parametrize("text, seeds", [
    ("default:3", [0, 1, 2]),
    ("train:2", [10000, 10001]),
    ("4,2,9", [4, 2, 9]),
    ("5..8", [5, 6, 7, 8]),
])
def test_parse_seed_set(text, seeds):
    assert parse_seed_set(text).seeds == seeds


@pytest.mark.parametrize("text", ["", "default:0", "9..5", "1,1", "x..y", "nope"])
def test_parse_seed_set_rejects(text):
    with pytest.raises(ValueError):
        parse_seed_set(text)


def test_named_seed_sets_are_disjoint():
    default = set(named_seed_set("default").seeds)
    assert len(default) == 100
    assert not default & set(named_seed_set("train").seeds)
    assert not default & set(named_seed_set("holdout").seeds)


def test_read_plan_formats(tmp_path):
    plan = Plan.from_rows([[float(t), 1.0, 0.5] for t in range(20)])
    json_path, csv_path = write_plan(plan, tmp_path / "p.json", tmp_path / "p.csv")
    assert read_plan(json_path) == plan
    assert read_plan(csv_path) == plan

    wrapped = tmp_path / "wrapped.json"
    wrapped.write_text(json.dumps({"actions": plan.to_rows()}))
    assert read_plan(wrapped) == plan


@pytest.mark.parametrize("content", [
    "[[1, 2, 3]]",
    json.dumps([[30.0, 0.0, 0.0]] * 20),
    json.dumps([["a", 0, 0]] * 20),
])
def test_read_plan_rejects(tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_text(content)
    with pytest.raises(InvalidPlan):
        read_plan(path)


def test_plan_sources():
    assert plan_from_source("zero") == Plan.zero()
    assert plan_from_source("random:4") == plan_from_source("random:4")
    assert plan_from_source("constant:1,1,1").actions[0].as_tuple() == ACTION_UPPER
    with pytest.raises(ValueError):
        plan_from_source("random:x")
