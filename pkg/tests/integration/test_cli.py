"""End-to-end tests of the campana command line."""

import json

import pytest
import yaml
from click.testing import CliRunner

from campana_cli import __version__
from campana_cli.cli import main


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def non_smooth_fan(tmp_path):
    path = tmp_path / "p112.json"
    path.write_text(
        json.dumps(
            {
                "name": "p112",
                "dim": 2,
                "rays": [[1, 0], [0, 1], [-1, -2]],
                "max_cones": [[1, 2], [2, 3], [3, 1]],
            }
        )
    )
    return path


def _report(path):
    return json.loads(path.read_text())


def test_version(runner):
    result = runner.invoke(main, ["--version"])
    assert result.exit_code == 0
    assert __version__ in result.output


def test_validate_bundled(runner, tmp_path):
    out = tmp_path / "validate.json"
    result = runner.invoke(main, ["validate", "p2", "--out", str(out)])
    assert result.exit_code == 0
    payload = _report(out)["payload"]
    assert payload["valid"] is True
    assert (payload["n"], payload["s"], payload["r"]) == (2, 3, 1)


def test_validate_non_smooth(runner, non_smooth_fan):
    result = runner.invoke(main, ["validate", str(non_smooth_fan)])
    assert result.exit_code == 11


def test_fan_command_rejects_non_smooth(runner, non_smooth_fan):
    result = runner.invoke(main, ["count", str(non_smooth_fan), "-B", "100"])
    assert result.exit_code == 11


def test_unknown_fan(runner):
    result = runner.invoke(main, ["validate", "no-such-fan"])
    assert result.exit_code == 10


def test_mfull_count(runner, tmp_path):
    out = tmp_path / "mfull.json"
    csv = tmp_path / "mfull.csv"
    result = runner.invoke(
        main, ["mfull", "count", "-m", "2", "-B", "100", "-B", "10000", "--out", str(out), "--csv", str(csv)]
    )
    assert result.exit_code == 0
    rows = _report(out)["payload"]["rows"]
    assert [row["F"] for row in rows] == [14, 185]
    assert csv.read_text().splitlines()[0] == "B,F,main_term,normalised_error"


def test_count_p1(runner, tmp_path):
    out = tmp_path / "count.json"
    result = runner.invoke(main, ["count", "p1", "-B", "100", "--out", str(out)])
    assert result.exit_code == 0
    report = _report(out)
    assert report["command"] == "count"
    assert report["payload"]["rows"] == [{"B": 100, "N": 126}]


def test_count_with_weights(runner, tmp_path):
    out = tmp_path / "count.json"
    result = runner.invoke(main, ["count", "p1", "-m", "2", "-B", "100", "--out", str(out)])
    assert result.exit_code == 0
    assert _report(out)["payload"]["m"] == [2, 2]


def test_lp_p2(runner, tmp_path):
    out = tmp_path / "lp.json"
    result = runner.invoke(main, ["lp", "p2", "--out", str(out)])
    assert result.exit_code == 0
    payload = _report(out)["payload"]
    assert payload["a"]["exact"] == "1"
    assert payload["b"] == 1


def test_init_config(runner, tmp_path):
    path = tmp_path / "campana.yaml"
    result = runner.invoke(main, ["init-config", "-o", str(path), "--command", "count", "--fan", "p1"])
    assert result.exit_code == 0
    data = yaml.safe_load(path.read_text())
    assert data["command"] == "count"
    assert data["fan"] == "p1"


def test_config_file_drives_run(runner, tmp_path):
    config = tmp_path / "campana.yaml"
    out = tmp_path / "count.json"
    runner.invoke(main, ["init-config", "-o", str(config), "--command", "count", "--fan", "p1"])
    result = runner.invoke(main, ["count", "p1", "-c", str(config), "--out", str(out)])
    assert result.exit_code == 0
    assert _report(out)["payload"]["rows"][0]["N"] == 126


def test_bad_config(runner, tmp_path):
    config = tmp_path / "bad.yaml"
    config.write_text("work_cap: -5\n")
    result = runner.invoke(main, ["mfull", "count", "-c", str(config)])
    assert result.exit_code == 2


def test_work_cap_exceeded(runner):
    result = runner.invoke(main, ["count", "p1", "-B", "1000000", "--work-cap", "10"])
    assert result.exit_code == 20


def test_repeated_runs_are_byte_identical(runner, tmp_path):
    outputs = []
    for k in range(2):
        out = tmp_path / f"run{k}.json"
        csv = tmp_path / f"run{k}.csv"
        args = ["asymptotic", "p1", "-B", "100", "-B", "1000", "--prime-cutoff", "1000"]
        result = runner.invoke(main, args + ["--out", str(out), "--csv", str(csv)])
        assert result.exit_code == 0
        outputs.append((out.read_bytes(), csv.read_bytes()))
    assert outputs[0] == outputs[1]
    assert outputs[0][1].startswith(b"B,N,prediction,ratio\n")


def test_inner_warnings_reach_envelope(runner, tmp_path):
    fan = tmp_path / "unused_ray.json"
    fan.write_text(
        json.dumps(
            {
                "name": "p2-extra-ray",
                "dim": 2,
                "rays": [[1, 0], [0, 1], [-1, -1], [1, 1]],
                "max_cones": [[1, 2], [2, 3], [3, 1]],
            }
        )
    )
    out = tmp_path / "validate.json"
    result = runner.invoke(main, ["validate", str(fan), "--out", str(out)])
    assert result.exit_code == 0
    warnings = _report(out)["warnings"]
    assert any("ray 4" in w for w in warnings)


def test_empty_bounds_give_header_only_csv(runner, tmp_path):
    config = tmp_path / "campana.yaml"
    config.write_text(yaml.dump({"command": "count", "fan": "p1", "bounds": []}))
    out = tmp_path / "count.json"
    csv = tmp_path / "count.csv"
    result = runner.invoke(main, ["count", "p1", "-c", str(config), "--out", str(out), "--csv", str(csv)])
    assert result.exit_code == 0
    assert _report(out)["payload"]["rows"] == []
    assert csv.read_bytes() == b"B,N\n"


def test_inversion_check_without_bounds_is_config_error(runner, tmp_path):
    config = tmp_path / "campana.yaml"
    config.write_text(yaml.dump({"command": "count", "fan": "p1", "bounds": []}))
    result = runner.invoke(main, ["count", "p1", "-c", str(config), "--inversion-check"])
    assert result.exit_code == 2
