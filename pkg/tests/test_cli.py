import csv
import dataclasses
import json
from pathlib import Path

import jsonschema
import pytest

import proxcycle.cli as cli
from proxcycle.gallery import make_kirk_interval
from proxcycle.spaces import INFINITY

SCHEMA = json.loads(
    (Path(cli.__file__).parent / "schemas" / "summary.schema.json").read_text()
)


def base_config(**overrides):
    data = {
        "system": {"id": "kirk_interval", "parameters": {"alpha": 0.5}},
        "p": 2,
        "phi": {"kind": "linear", "alpha": 0.5},
        "run": "banach",
        "iterations": 1000,
        "tolerance": 1e-10,
        "seed": 42,
    }
    data.update(overrides)
    return data


def write_config(tmp_path, data, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return path


# --- config validation --------------------------------------------------------


def test_parse_config_happy_path():
    config = cli.parse_config(base_config(p="inf"))
    assert config.system_id == "kirk_interval"
    assert config.p == INFINITY
    assert config.seed == 42


@pytest.mark.parametrize(
    "mutation",
    [
        {"bogus": 1},
        {"run": "explore"},
        {"p": 0.5},
        {"phi": {"kind": "cubic"}},
        {"phi": {"kind": "linear", "alpha": 0.5, "beta": 1}},
        {"iterations": 0},
        {"tolerance": -1e-9},
        {"seed": "now"},
        {"system": {"id": "kirk_interval", "extra": 1}},
    ],
)
def test_parse_config_rejects_invalid(mutation):
    with pytest.raises(cli.ConfigError):
        cli.parse_config(base_config(**mutation))


def test_parse_config_requires_seed():
    data = base_config()
    del data["seed"]
    with pytest.raises(cli.ConfigError):
        cli.parse_config(data)


# --- end-to-end runs ------------------------------------------------------------


def read_summary(out_dir):
    summary = json.loads((Path(out_dir) / "summary.json").read_text())
    jsonschema.validate(summary, SCHEMA)
    return summary


def test_run_banach_kirk(tmp_path):
    config = write_config(tmp_path, base_config())
    code = cli.main(["run", "--config", str(config), "--out", str(tmp_path / "out")])
    assert code == 0
    summary = read_summary(tmp_path / "out")
    assert summary["run"] == "banach"
    assert summary["result"]["converged"] is True
    assert abs(summary["result"]["point"][0]) < 1e-8
    assert summary["d_p_sets"] == 0.0


def test_run_periodic_affine_strip(tmp_path):
    data = base_config(
        system={"id": "affine_strip", "parameters": {"alpha": 0.5, "h": 1.0}},
        run="periodic",
    )
    config = write_config(tmp_path, data)
    out = tmp_path / "out"
    assert cli.main(["run", "--config", str(config), "--out", str(out)]) == 0
    summary = read_summary(out)
    assert summary["result"]["converged"] is True
    assert summary["result"]["proximity_residual"] < 1e-6

    with open(out / "trace.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert set(rows[0]) == {"n", "chain_dp", "edge_1", "edge_2", "block_drift_1", "block_drift_2"}
    assert abs(float(rows[-1]["edge_1"]) - 1.0) < 1e-6  # edge settles at h
    # round-trip float formatting parses back exactly
    assert repr(float(rows[3]["chain_dp"])) == rows[3]["chain_dp"]


def test_run_proximity_family_flags_non_attainment(tmp_path):
    data = base_config(system={"id": "paper_lq_family"}, run="proximity", iterations=500)
    config = write_config(tmp_path, data)
    out = tmp_path / "out"
    assert cli.main(["run", "--config", str(config), "--out", str(out)]) == 0
    summary = read_summary(out)
    assert summary["result"]["converged"] is False
    assert "not attained" in summary["result"]["note"]


def test_run_certify(tmp_path):
    data = base_config(run="certify", iterations=300)
    config = write_config(tmp_path, data)
    out = tmp_path / "out"
    assert cli.main(["run", "--config", str(config), "--out", str(out)]) == 0
    summary = read_summary(out)
    cert = summary["certificate"]
    assert cert["passed"] is True
    assert cert["cyclicity_ok"] is True and cert["phi_ok"] is True
    assert cert["min_margin"] >= -1e-10


def test_output_dir_from_config(tmp_path):
    out = tmp_path / "configured"
    config = write_config(tmp_path, base_config(output_dir=str(out)))
    assert cli.main(["run", "--config", str(config)]) == 0
    assert (out / "summary.json").exists()


# --- exit codes ------------------------------------------------------------------


def test_exit_2_on_bad_config(tmp_path):
    config = write_config(tmp_path, base_config(run="explore"))
    assert cli.main(["run", "--config", str(config), "--out", str(tmp_path / "o")]) == 2


def test_exit_2_on_missing_config(tmp_path):
    assert cli.main(["run", "--config", str(tmp_path / "nope.json"), "--out", "o"]) == 2


def test_exit_2_on_unknown_subcommand():
    with pytest.raises(SystemExit) as err:
        cli.main(["frobnicate"])
    assert err.value.code == 2


def test_exit_3_on_map_error(tmp_path, monkeypatch):
    def broken_build(system_id, parameters):
        gs = make_kirk_interval(0.5)
        bad_system = dataclasses.replace(
            gs.system, map=lambda x: (float("nan"),)
        )
        return dataclasses.replace(gs, system=bad_system)

    monkeypatch.setattr(cli.gallery, "build", broken_build)
    config = write_config(tmp_path, base_config())
    assert cli.main(["run", "--config", str(config), "--out", str(tmp_path / "o")]) == 3


def test_exit_4_on_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("occupied")
    config = write_config(tmp_path, base_config())
    out = blocker / "nested"
    assert cli.main(["run", "--config", str(config), "--out", str(out)]) == 4


# --- gallery listing ----------------------------------------------------------------


def test_gallery_list_text(capsys):
    assert cli.main(["gallery", "list"]) == 0
    out = capsys.readouterr().out
    for system_id in ("kirk_interval", "affine_strip", "paper_lq_family", "scaled_pair"):
        assert system_id in out


def test_gallery_list_json(capsys):
    assert cli.main(["gallery", "list", "--json"]) == 0
    entries = json.loads(capsys.readouterr().out)
    assert len(entries) == 4
