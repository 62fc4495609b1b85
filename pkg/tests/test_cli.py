"""Command-line interface: subcommands, streams, exit codes, experiments."""

import io
import json

import pytest

from netprice import dumps_instance, gen_er, gen_spider, loads_instance
from netprice.cli import (
    EXPERIMENT_HEADERS,
    ExperimentSpec,
    experiment_tasks,
    run_cli,
    run_experiment,
)

SAMPLE_CNF = """\
p cnf 3 3
1 2 3 0
-1 -2 3 0
1 -2 -3 0
"""


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def _spider_file(tmp_path, k=3):
    return _write(tmp_path, f"spider{k}.json", dumps_instance(gen_spider(k)))


# --- gen -----------------------------------------------------------------------


def test_gen_writes_canonical_instance(tmp_path, capsys):
    out = str(tmp_path / "er.json")
    assert run_cli(["gen", "--family", "er", "--n", "12", "--eta", "0.5",
                    "--seed", "3", "--out", out]) == 0
    text = open(out, encoding="utf-8").read()
    assert text == dumps_instance(gen_er(12, 0.5, seed=3))
    assert run_cli(["gen", "--family", "er", "--n", "12", "--eta", "0.5",
                    "--seed", "3"]) == 0
    assert capsys.readouterr().out == text


def test_gen_is_byte_reproducible(tmp_path):
    paths = [str(tmp_path / f"ba{i}.json") for i in range(2)]
    for path in paths:
        assert run_cli(["gen", "--family", "ba", "--n", "25", "--beta", "2",
                        "--seed", "9", "--out", path]) == 0
    assert open(paths[0], "rb").read() == open(paths[1], "rb").read()


def test_gen_missing_parameter(capsys):
    assert run_cli(["gen", "--family", "er", "--n", "10"]) == 1
    assert "--eta is required for family 'er'" in capsys.readouterr().err


def test_gen_unknown_family_is_usage_error(capsys):
    assert run_cli(["gen", "--family", "smallworld", "--n", "5"]) == 2
    capsys.readouterr()


# --- simulate -------------------------------------------------------------------


def test_simulate_human_output(tmp_path, capsys):
    path = _write(tmp_path, "p3.json", '{"n":3,"edges":[[0,1,1],[1,2,1]]}\n')
    assert run_cli(["simulate", path, "--prices", "2", "1"]) == 0
    out = capsys.readouterr().out
    assert "total revenue: 2" in out
    assert "unsold: 2" in out


def test_simulate_json_output(tmp_path, capsys):
    path = _write(tmp_path, "p3.json", '{"n":3,"edges":[[0,1,1],[1,2,1]]}\n')
    assert run_cli(["simulate", path, "--prices", "2", "1", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload == {
        "prices": [2, 1],
        "rounds": [
            {"price": 2, "buyers": [1], "revenue": 2},
            {"price": 1, "buyers": [], "revenue": 0},
        ],
        "total_revenue": 2,
        "unsold": [0, 2],
    }


def test_simulate_rejects_negative_price(tmp_path, capsys):
    path = _write(tmp_path, "p3.json", '{"n":3,"edges":[[0,1,1],[1,2,1]]}\n')
    assert run_cli(["simulate", path, "--prices", "3", "-1"]) == 1
    assert "error:" in capsys.readouterr().err


# --- strategies and the oracle ----------------------------------------------------


def test_strategy_pipeline_from_stdin(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO(dumps_instance(gen_spider(3))))
    assert run_cli(["greedy"]) == 0
    assert "revenue: 9" in capsys.readouterr().out


def test_oracle_on_file(tmp_path, capsys):
    assert run_cli(["oracle", _spider_file(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "revenue: 9" in out
    assert "states:" in out


def test_single_price_on_hub_of_cliques(tmp_path, capsys):
    out = str(tmp_path / "ex1.json")
    assert run_cli(["gen", "--family", "example1", "--k", "3", "--out", out]) == 0
    assert run_cli(["single", out]) == 0
    text = capsys.readouterr().out
    assert "prices: 6" in text
    assert "revenue: 42" in text


def test_forest_single_on_spider(tmp_path, capsys):
    assert run_cli(["forest-single", _spider_file(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "prices: 2" in out
    assert "revenue: 8" in out


def test_split_dp_matches_oracle(tmp_path, capsys):
    path = str(tmp_path / "split.json")
    assert run_cli(["gen", "--family", "split", "--n", "10", "--seed", "4",
                    "--out", path]) == 0
    assert run_cli(["split-dp", path, "--json"]) == 0
    dp = json.loads(capsys.readouterr().out)
    assert run_cli(["oracle", path, "--json"]) == 0
    oracle = json.loads(capsys.readouterr().out)
    assert dp["total_revenue"] == oracle["revenue"]


def test_strategy_json_shape(tmp_path, capsys):
    assert run_cli(["greedy", _spider_file(tmp_path), "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert set(payload) == {"prices", "rounds", "total_revenue", "unsold"}
    assert payload["total_revenue"] == 9


def test_oracle_json_and_budget(tmp_path, capsys):
    path = _write(
        tmp_path, "er.json", dumps_instance(gen_er(12, 0.4, seed=1))
    )
    assert run_cli(["oracle", path, "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert set(payload) == {"revenue", "prices", "states"}
    assert run_cli(["oracle", path, "--state-budget", "2"]) == 1
    assert "state budget exhausted" in capsys.readouterr().err


def test_oracle_missing_file(tmp_path, capsys):
    assert run_cli(["oracle", str(tmp_path / "absent.json")]) == 1
    assert "error:" in capsys.readouterr().err


def test_malformed_instance_file(tmp_path, capsys):
    path = _write(tmp_path, "bad.json", "not json at all\n")
    assert run_cli(["greedy", path]) == 1
    assert "not valid JSON" in capsys.readouterr().err


# --- reduce and verify-gadgets ------------------------------------------------------


def test_reduce_writes_instance_and_meta(tmp_path):
    cnf = _write(tmp_path, "sample.cnf", SAMPLE_CNF)
    out = str(tmp_path / "reduced.json")
    meta_path = str(tmp_path / "meta.json")
    assert run_cli(["reduce", cnf, "--out", out, "--meta", meta_path]) == 0
    instance = loads_instance(open(out, encoding="utf-8").read())
    assert instance.node_count == 24
    meta = json.loads(open(meta_path, encoding="utf-8").read())
    assert meta["threshold"] == 172869
    assert meta["node_count"] == 24


def test_reduce_json_combined(tmp_path, capsys):
    cnf = _write(tmp_path, "sample.cnf", SAMPLE_CNF)
    assert run_cli(["reduce", cnf, "--json"]) == 0
    combined = json.loads(capsys.readouterr().out)
    assert combined["instance"]["n"] == 24
    assert combined["metadata"]["variable_scales"] == [5781, 1156, 231]


def test_reduce_from_stdin(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO(SAMPLE_CNF))
    assert run_cli(["reduce"]) == 0
    assert loads_instance(capsys.readouterr().out).node_count == 24


def test_reduce_rejects_bad_cnf(tmp_path, capsys):
    cnf = _write(tmp_path, "bad.cnf", "p cnf 3 3\n1 2 0\n")
    assert run_cli(["reduce", cnf]) == 1
    assert "clause 1 has 2 literals" in capsys.readouterr().err


def test_verify_gadgets(tmp_path, capsys):
    cnf = _write(tmp_path, "sample.cnf", SAMPLE_CNF)
    assert run_cli(["verify-gadgets", cnf]) == 0
    assert "42/42 gadget checks passed" in capsys.readouterr().out
    assert run_cli(["verify-gadgets", cnf, "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["ok"] is True
    assert len(payload["checks"]) == 42
    assert all(check["passed"] for check in payload["checks"])


# --- experiments ---------------------------------------------------------------------


def test_forest_experiment_csv(tmp_path):
    out = str(tmp_path / "forest.csv")
    assert run_cli(["experiment", "--family", "forest_ratio", "--trials", "3",
                    "--n", "8", "--trees", "2", "--out", out]) == 0
    lines = open(out, encoding="utf-8").read().splitlines()
    assert lines[0] == ",".join(EXPERIMENT_HEADERS["forest_ratio"])
    assert len(lines) == 4
    for seed, line in enumerate(lines[1:]):
        cells = line.split(",")
        assert cells[0] == str(seed)
        assert cells[1] == "8"
        assert float(cells[6]) >= 1.0  # optimum at least the 1.5-approx revenue


def test_er_experiment_row_content(capsys):
    assert run_cli(["experiment", "--family", "er_ratio", "--trials", "2",
                    "--n", "40", "--eta", "0.3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == ",".join(EXPERIMENT_HEADERS["er_ratio"])
    for line in lines[1:]:
        cells = line.split(",")
        assert cells[3] == "10"  # floor(0.9 * 39 * 0.3)
        assert int(cells[4]) % 10 == 0


def test_ba_experiment_row_content(capsys):
    assert run_cli(["experiment", "--family", "ba_ratio", "--trials", "2",
                    "--n", "60", "--beta", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    for line in lines[1:]:
        cells = line.split(",")
        assert cells[4] == "120"  # single price beta sells to everyone: n * beta
        assert cells[7] in {"0", "1"}


def test_bound_sweep_grid_order(capsys):
    assert run_cli(["experiment", "--family", "bound_sweep", "--trials", "2",
                    "--n-min", "5", "--n-max", "7", "--eta", "0.5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    rows = [line.split(",") for line in lines[1:]]
    assert [r[0] for r in rows] == [str(i) for i in range(6)]
    assert [r[1] for r in rows] == ["5", "5", "6", "6", "7", "7"]


def test_parallel_experiment_is_byte_identical():
    spec = ExperimentSpec("forest_ratio", trials=4, master_seed=2, params={"n": 8})
    assert run_experiment(spec, jobs=2) == run_experiment(spec, jobs=1)


def test_jobs_env_default(monkeypatch):
    spec = ExperimentSpec("forest_ratio", trials=2, master_seed=5, params={"n": 7})
    serial = run_experiment(spec, jobs=1)
    monkeypatch.setenv("NETPRICE_JOBS", "2")
    assert run_experiment(spec) == serial


def test_experiment_spec_validation():
    with pytest.raises(ValueError, match="unknown experiment"):
        ExperimentSpec("volume_sweep")
    with pytest.raises(ValueError, match="at least 1"):
        ExperimentSpec("er_ratio", trials=0)
    with pytest.raises(ValueError, match="match the trial count"):
        ExperimentSpec("er_ratio", trials=3, seeds=(1, 2))
    spec = ExperimentSpec("er_ratio", trials=3, master_seed=10)
    assert spec.seed_list() == (10, 11, 12)
    assert ExperimentSpec("er_ratio", trials=2, seeds=(7, 3)).seed_list() == (7, 3)


def test_experiment_tasks_respect_overrides():
    spec = ExperimentSpec("er_ratio", trials=2, params={"n": 50, "eta": 0.2})
    tasks = experiment_tasks(spec)
    assert [seed for _, seed, _ in tasks] == [0, 1]
    assert all(params["n"] == 50 and params["eta"] == 0.2 for _, _, params in tasks)
    assert all(params["delta"] == 0.1 for _, _, params in tasks)


def test_run_experiment_rejects_bad_jobs():
    spec = ExperimentSpec("er_ratio", trials=1, params={"n": 30})
    with pytest.raises(ValueError, match="jobs must be at least 1"):
        run_experiment(spec, jobs=0)


# --- top-level dispatch ---------------------------------------------------------------


def test_no_command_is_usage_error(capsys):
    assert run_cli([]) == 2
    capsys.readouterr()


def test_help_exits_cleanly(capsys):
    assert run_cli(["--help"]) == 0
    assert "netprice" in capsys.readouterr().out
