import json
from pathlib import Path

import pytest

from app.cli.dependencies import load_config, parse_bounds, parse_params
from app.main import main
from app.models.config_models import RunConfigFile
from app.utils.helpers import read_table, write_table_atomic
from app.utils.validators import ConfigurationError, InputError

RECIPES = Path(__file__).resolve().parent.parent / "recipes"


def recipe(name: str) -> dict:
    return json.loads((RECIPES / name).read_text())


def write_config(tmp_path: Path, data: dict, name: str = "config.json") -> str:
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def test_ex51_run_follows_inverse_square_root(tmp_path, capsys):
    out = tmp_path / "trace.csv"
    code = main(["run", "--config", str(RECIPES / "ex51.json"), "--out", str(out)])
    assert code == 0
    assert "status: converged" in capsys.readouterr().out

    rows = read_table(out)
    assert len(rows) == 64
    for row in rows:
        k, x, tau = int(row["k"]), float(row["x_1"]), float(row["tau"])
        assert tau == pytest.approx(1.0 / k)
        assert x == pytest.approx(k ** -0.5, abs=1e-4)
        assert float(row["phi"]) == pytest.approx(x + tau / x, rel=1e-9)
        assert row["alpha_1"] == ""


def test_invalid_schedule_names_the_field(tmp_path, capsys):
    data = recipe("ex51.json")
    data["schedule"]["tau0"] = -1.0
    code = main(["run", "--config", write_config(tmp_path, data), "--out", str(tmp_path / "trace.csv")])
    assert code == 1
    assert "schedule.tau0" in capsys.readouterr().err
    assert not (tmp_path / "trace.csv").exists()


def test_unknown_config_key_is_rejected(tmp_path):
    data = recipe("ex51.json")
    data["shedule"] = {"rule": "harmonic"}
    assert main(["run", "--config", write_config(tmp_path, data)]) == 1


def test_missing_config_file(tmp_path):
    assert main(["run", "--config", str(tmp_path / "absent.json")]) == 1


def test_infeasible_start_is_invalid(tmp_path):
    data = recipe("ex51.json")
    data["start"] = [-1.0]
    assert main(["run", "--config", write_config(tmp_path, data), "--out", str(tmp_path / "t.csv")]) == 1


def test_ex52_local_run_recovers_weights(tmp_path, capsys):
    out = tmp_path / "trace.csv"
    code = main(["run", "--config", str(RECIPES / "ex52_local.json"), "--out", str(out)])
    printed = capsys.readouterr().out
    assert code == 0
    assert "classification: approx_pareto" in printed

    last = read_table(out)[-1]
    assert float(last["x_1"]) == pytest.approx(0.5, abs=1e-3)
    assert float(last["alpha_1"]) == pytest.approx(0.5, abs=0.02)
    assert float(last["alpha_2"]) == pytest.approx(0.5, abs=0.02)
    assert float(last["kkt_residual"]) <= 1e-4


def test_budget_exhausted_run_exits_with_two(tmp_path):
    data = recipe("ex51.json")
    data["outer_iterations"] = 5
    assert main(["run", "--config", write_config(tmp_path, data), "--out", str(tmp_path / "t.csv")]) == 2
    assert len(read_table(tmp_path / "t.csv")) == 5


def test_ex52_sweep_traces_pareto_interval(tmp_path, capsys):
    out = tmp_path / "front.csv"
    code = main(["sweep", "--config", str(RECIPES / "ex52_sweep.json"), "--out", str(out), "--workers", "4"])
    assert code == 0
    assert "members: 21, converged: 21" in capsys.readouterr().out

    rows = read_table(out)
    assert [int(row["index"]) for row in rows] == list(range(21))
    for row in rows:
        alpha = float(row["param_1"])
        t = float(row["x_1"])
        assert t == pytest.approx(-alpha / 2, abs=1e-3)
        assert row["status"] == "converged"
        assert row["classification"] != "dominated"
        if 0.1 <= t <= 0.9:
            assert row["classification"] == "approx_pareto"


def test_empty_sweep_is_invalid(tmp_path):
    data = recipe("ex52_sweep.json")
    data["sweep"] = {"family": "shifted_max", "base": [0.0, 0.0], "values": []}
    assert main(["sweep", "--config", write_config(tmp_path, data), "--out", str(tmp_path / "f.csv")]) == 1


def test_sweep_without_section_is_invalid(tmp_path):
    assert main(["sweep", "--config", str(RECIPES / "ex52_global.json"), "--out", str(tmp_path / "f.csv")]) == 1


def test_disk_sweep_writes_front(tmp_path):
    data = recipe("disk2d_sweep.json")
    data["outer_iterations"] = 12
    out = tmp_path / "front.csv"
    code = main(["sweep", "--config", write_config(tmp_path, data), "--out", str(out)])
    assert code in (0, 2)

    rows = read_table(out)
    assert len(rows) == 9
    for row in rows:
        assert float(row["param_1"]) + float(row["param_2"]) == pytest.approx(1.0)
        assert float(row["x_1"]) ** 2 + float(row["x_2"]) ** 2 < 1.0
        assert row["classification"] in {"approx_pareto", "approx_weak_pareto_only", "dominated"}


def test_disk_sweep_member_is_classified_pareto(tmp_path, capsys):
    data = recipe("disk2d_sweep.json")
    data["outer_iterations"] = 40
    data["sweep"]["values"] = [0.5]
    out = tmp_path / "front.csv"
    code = main(["sweep", "--config", write_config(tmp_path, data), "--out", str(out)])
    assert code in (0, 2)
    assert "members: 1" in capsys.readouterr().out

    row = read_table(out)[0]
    assert float(row["x_1"]) == pytest.approx(-(0.5 ** 0.5), abs=2e-3)
    assert float(row["x_2"]) == pytest.approx(-(0.5 ** 0.5), abs=2e-3)
    assert row["classification"] == "approx_pareto"


def test_oracle_lists_ex52_pareto_interval(tmp_path, capsys):
    out = tmp_path / "nd.csv"
    code = main(["oracle", "--problem", "ex52", "--bounds=-2:3", "--counts", "501", "--out", str(out)])
    assert code == 0
    values = [float(row["x_1"]) for row in read_table(out)]
    assert min(values) >= -0.01
    assert max(values) <= 1.01
    assert "nondominated points" in capsys.readouterr().out


def test_oracle_keeps_every_ex51_point(tmp_path):
    out = tmp_path / "nd.csv"
    assert main(["oracle", "--problem", "ex51", "--param", "a=9", "--bounds=0:10", "--counts", "101",
                 "--out", str(out)]) == 0
    assert len(read_table(out)) == 101


def test_oracle_classifies_candidates(tmp_path, capsys):
    candidates = write_table_atomic(tmp_path / "candidates.csv", ["x_1"], [[2.0], [0.5]])
    out = tmp_path / "classification.csv"
    code = main(["oracle", "--problem", "ex52", "--bounds=-2:3", "--counts", "501",
                 "--candidates", str(candidates), "--out", str(out)])
    assert code == 0
    assert [row["classification"] for row in read_table(out)] == ["dominated", "approx_pareto"]
    assert "candidate 0: dominated" in capsys.readouterr().out


def test_oracle_grid_over_cap_is_invalid(tmp_path):
    assert main(["oracle", "--problem", "disk2d", "--bounds=-1:1", "--bounds=-1:1", "--counts", "2000", "2000",
                 "--out", str(tmp_path / "nd.csv")]) == 1


def test_unknown_problem_is_invalid(tmp_path, capsys):
    code = main(["oracle", "--problem", "zdt1", "--bounds=0:1", "--counts", "11", "--out", str(tmp_path / "x.csv")])
    assert code == 1
    assert "ex52" in capsys.readouterr().err


def test_weighting_grid_reports_failures(tmp_path, capsys):
    out = tmp_path / "weighting.csv"
    code = main(["weighting", "--problem", "ex51", "--param", "a=9", "--grid", "11", "--out", str(out)])
    assert code == 0
    assert "failure fraction" in capsys.readouterr().out

    rows = read_table(out)
    assert len(rows) == 11
    for row in rows:
        alpha = float(row["alpha_1"])
        if alpha < 0.85:
            assert row["outcome"] == "unbounded"
        elif alpha > 0.95:
            assert row["outcome"] == "minimizer"


def test_weighting_single_alpha(tmp_path):
    out = tmp_path / "weighting.csv"
    assert main(["weighting", "--problem", "disk2d", "--alpha", "0.5", "0.5", "--out", str(out)]) == 0
    row = read_table(out)[0]
    assert row["outcome"] == "minimizer"
    assert float(row["x_1"]) == pytest.approx(-(0.5 ** 0.5), abs=1e-2)


def test_weighting_rejects_off_simplex_alpha(tmp_path):
    assert main(["weighting", "--problem", "ex51", "--alpha", "0.7", "0.7", "--out", str(tmp_path / "w.csv")]) == 1


def test_weighting_needs_alpha_or_grid(tmp_path):
    assert main(["weighting", "--problem", "ex51", "--out", str(tmp_path / "w.csv")]) == 1


def test_weighting_zero_budget_is_invalid(tmp_path):
    assert main(["weighting", "--problem", "disk2d", "--alpha", "0.5", "0.5", "--budget", "0",
                 "--out", str(tmp_path / "w.csv")]) == 1


@pytest.mark.parametrize("command", ["oracle", "weighting"])
def test_grid_commands_take_no_config(tmp_path, command):
    with pytest.raises(SystemExit):
        main([command, "--problem", "ex51", "--config", str(RECIPES / "ex51.json"),
              "--out", str(tmp_path / "x.csv")])


@pytest.mark.parametrize("name", sorted(p.name for p in RECIPES.glob("*.json")))
def test_recipes_round_trip(name):
    config = load_config(RECIPES / name)
    assert RunConfigFile.model_validate_json(config.model_dump_json()) == config


def test_mbm_config_drops_file_sections():
    config = load_config(RECIPES / "ex52_local.json")
    outer = config.mbm_config()
    assert outer.local_box == config.local_box
    assert outer.recover_weights
    assert not hasattr(outer, "problem")


def test_load_config_requires_existing_file(tmp_path):
    with pytest.raises(ConfigurationError):
        load_config(tmp_path / "missing.json")


def test_parse_helpers():
    assert parse_params(["a=9", "b = 2.5"]) == {"a": 9.0, "b": 2.5}
    assert parse_bounds("-2:3") == (-2.0, 3.0)
    with pytest.raises(InputError):
        parse_params(["a"])
    with pytest.raises(ValueError):
        parse_bounds("-2")
