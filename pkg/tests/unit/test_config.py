"""Tests for configuration layering, report envelopes and the dispatcher."""

import json

import pytest
import yaml

from campana_cli.config import (
    ReportEnvelope,
    dumps_envelope,
    emit_plot_data,
    export_config,
    load_config,
    write_envelope,
)
from campana_cli.config.settings import WORK_CAP_ENV, RunConfig
from campana_cli.errors import ConfigError
from campana_cli.runner import dispatch, input_hash, run


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text(
        yaml.dump({"command": "count", "fan": "p1", "bounds": [100], "work_cap": 5000, "seed": 7})
    )
    return path


class TestLoadConfig:
    def test_defaults(self):
        config = load_config(env={})
        assert config.command == "validate"
        assert config.bounds == [100]
        assert config.work_cap == 10**8

    def test_file_values(self, config_file):
        config = load_config(config_file, env={})
        assert config.command == "count"
        assert config.seed == 7
        assert config.work_cap == 5000

    def test_precedence(self, config_file):
        env = {WORK_CAP_ENV: "9000"}
        assert load_config(config_file, env=env).work_cap == 9000
        config = load_config(config_file, overrides={"work_cap": 42, "seed": None}, env=env)
        assert config.work_cap == 42
        assert config.seed == 7

    def test_options_merge(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text(yaml.dump({"command": "mfull.count", "options": {"m": 3, "d": 2}}))
        config = load_config(path, overrides={"options": {"d": 5}}, env={})
        assert config.options == {"m": 3, "d": 5}

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.yaml"
        path.write_text("")
        assert load_config(path, env={}) == RunConfig()

    @pytest.mark.parametrize(
        "overrides",
        [
            {"command": "frobnicate"},
            {"bounds": [0]},
            {"work_cap": -1},
            {"workers": 0},
            {"prime_cutoff": 1},
            {"precision_bits": 20},
            {"colour": "blue"},
        ],
    )
    def test_invalid_values(self, overrides):
        with pytest.raises(ConfigError):
            load_config(overrides=overrides, env={})

    def test_bad_env(self):
        with pytest.raises(ConfigError):
            load_config(env={WORK_CAP_ENV: "lots"})

    def test_not_a_mapping(self, tmp_path):
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(ConfigError):
            load_config(path, env={})


class TestExport:
    def test_export_round_trip(self, tmp_path):
        config = load_config(overrides={"command": "asymptotic", "fan": "p2"}, env={})
        path = tmp_path / "template.yaml"
        export_config(config, path)
        text = path.read_text()
        assert text.startswith("# campana-cli run configuration")
        assert load_config(path, env={}) == config

    def test_plot_data_header_only(self, tmp_path):
        path = tmp_path / "series.csv"
        emit_plot_data([], ["B", "N"], path)
        assert path.read_bytes() == b"B,N\n"

    def test_plot_data_rows(self, tmp_path):
        path = tmp_path / "series.csv"
        emit_plot_data([{"B": 100, "N": 126, "extra": 1}], ["B", "N"], path)
        assert path.read_bytes() == b"B,N\n100,126\n"

    def test_envelope_json(self, tmp_path):
        envelope = ReportEnvelope(command="count", input_hash="abc", seed=0, payload={"z": 1, "a": 2})
        path = tmp_path / "out" / "report.json"
        write_envelope(envelope, path)
        text = path.read_text()
        assert text.endswith("}\n")
        data = json.loads(text)
        assert list(data) == sorted(data)
        assert "timings" not in data
        assert data["tool"] == "campana-cli"

    def test_envelope_stdout(self, capsys):
        envelope = ReportEnvelope(command="count", input_hash="abc", seed=0, payload={})
        write_envelope(envelope)
        assert capsys.readouterr().out == dumps_envelope(envelope)


class TestDispatch:
    def test_reproducible(self):
        config = load_config(overrides={"command": "count", "fan": "p1", "bounds": [100]}, env={})
        first = dumps_envelope(dispatch(config))
        second = dumps_envelope(dispatch(config))
        assert first == second
        assert json.loads(first)["payload"]["rows"] == [{"B": 100, "N": 126}]

    def test_hash_depends_on_fan(self):
        from campana_cli.core.fanfile import load_instance

        config = load_config(overrides={"command": "count", "fan": "p1"}, env={})
        assert input_hash(config, load_instance("p1")) != input_hash(config, load_instance("p2"))

    def test_hash_ignores_output_paths(self, tmp_path):
        base = load_config(overrides={"command": "mfull.count"}, env={})
        moved = load_config(overrides={"command": "mfull.count", "out": tmp_path / "r.json"}, env={})
        assert input_hash(base, None) == input_hash(moved, None)

    def test_timings_recorded_on_request(self):
        config = load_config(
            overrides={"command": "mfull.count", "bounds": [100], "record_timings": True}, env={}
        )
        result = run(config)
        assert "total_seconds" in result.envelope.timings
        assert result.columns == ["B", "F", "main_term", "normalised_error"]
        assert result.rows[0]["F"] == 14

    def test_demo_without_bounds(self):
        config = load_config(overrides={"command": "hyperbola.demo", "bounds": []}, env={})
        result = run(config)
        assert result.rows == []
        assert result.envelope.payload["rows"] == []
        assert result.envelope.payload["estimate"]["main_term"] > 0

    def test_demo_theta_needs_a_bound(self):
        config = load_config(
            overrides={"command": "hyperbola.demo", "bounds": [], "options": {"theta": "1/2"}},
            env={},
        )
        with pytest.raises(ConfigError, match="theta"):
            run(config)

    def test_inversion_check_needs_a_bound(self):
        config = load_config(
            overrides={
                "command": "count",
                "fan": "p1",
                "bounds": [],
                "options": {"inversion_check": True},
            },
            env={},
        )
        with pytest.raises(ConfigError, match="inversion_check"):
            run(config)

    def test_count_without_bounds(self):
        config = load_config(overrides={"command": "count", "fan": "p1", "bounds": []}, env={})
        result = run(config)
        assert result.rows == []
        assert result.envelope.payload["rows"] == []
