"""Tests for layered run configuration."""
import pytest
import yaml

from error_handling.exceptions import ConfigurationError
from output.generator import OutputGenerator
from qkd_protocol.security import Attack
from run_config.settings import SEED_ENV, RunConfig, Settings, load_settings, read_yaml


@pytest.fixture(autouse=True)
def isolated(monkeypatch, tmp_path):
    monkeypatch.delenv(SEED_ENV, raising=False)
    monkeypatch.chdir(tmp_path)


def test_defaults_without_file():
    settings = load_settings()
    assert settings == Settings()
    assert settings.protocol.attack == Attack.INDIVIDUAL
    assert settings.quadrature.n_points == 256


def test_working_directory_file_is_picked_up(tmp_path):
    (tmp_path / "gaussqkd.yaml").write_text("seed: 4\nprotocol:\n  attack: coherent\n", encoding="utf-8")
    settings = load_settings()
    assert settings.seed == 4
    assert settings.protocol.attack == Attack.COHERENT


def test_precedence_file_env_override(tmp_path, monkeypatch):
    """Model defaults < YAML file < GAUSSQKD_SEED < command-line overrides."""
    path = tmp_path / "run.yaml"
    path.write_text("seed: 1\nthreads: 2\nquadrature:\n  n_points: 64\n", encoding="utf-8")
    assert load_settings(path).seed == 1

    monkeypatch.setenv(SEED_ENV, "5")
    settings = load_settings(path)
    assert (settings.seed, settings.threads, settings.quadrature.n_points) == (5, 2, 64)

    settings = load_settings(path, {"seed": 9, "threads": None, "quadrature": {"n_points": 32}})
    assert (settings.seed, settings.threads, settings.quadrature.n_points) == (9, 2, 32)


def test_none_overrides_are_ignored():
    settings = load_settings(None, {"protocol": {"attack": None, "sigma": None}})
    assert settings.protocol.attack == Attack.INDIVIDUAL
    assert settings.protocol.sigma is None


def test_invalid_values(tmp_path, monkeypatch):
    path = tmp_path / "bad.yaml"
    path.write_text("quadrature:\n  n_points: 2\n", encoding="utf-8")
    with pytest.raises(ConfigurationError, match="quadrature.n_points"):
        load_settings(path)
    with pytest.raises(ConfigurationError):
        load_settings(None, {"protocol": {"attack": "collective"}})
    monkeypatch.setenv(SEED_ENV, "abc")
    with pytest.raises(ConfigurationError):
        load_settings()


def test_read_yaml_errors(tmp_path):
    with pytest.raises(ConfigurationError):
        read_yaml(tmp_path / "missing.yaml")
    listing = tmp_path / "list.yaml"
    listing.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ConfigurationError):
        read_yaml(listing)
    empty = tmp_path / "empty.yaml"
    empty.write_text("", encoding="utf-8")
    assert read_yaml(empty) == {}


def test_quadrature_config_takes_root_seed():
    settings = Settings(seed=11)
    assert settings.quadrature_config().rng_seed == 11
    assert settings.quadrature.rng_seed == 0


def test_dump_yaml_round_trip(tmp_path):
    settings = load_settings(None, {"seed": 3, "protocol": {"attack": "coherent"}})
    path = settings.dump_yaml(OutputGenerator(tmp_path / "out"))
    data = yaml.safe_load(open(path, encoding="utf-8"))
    assert data["protocol"]["attack"] == "coherent"
    assert Settings.model_validate(data) == settings


def test_run_config_rejects_unknown_format():
    with pytest.raises(ValueError):
        RunConfig(output_format="xml")


def test_cad_trials_below_minimum_rejected():
    with pytest.raises(ConfigurationError, match="cad_trials"):
        load_settings(None, {"protocol": {"cad_trials": 9_999}})
    assert load_settings(None, {"protocol": {"cad_trials": 10_000}}).protocol.cad_trials == 10_000
