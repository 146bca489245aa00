"""
Spike Forecaster - Settings Tests
"""

import pytest

from app.config import Settings

ENV_NAMES = ("SPIKE_LOG_LEVEL", "SPIKE_LOG_JSON", "SPIKE_JOBS", "SPIKE_SEED", "SPIKE_OUT_DIR", "SPIKE_CONFIG_PATH")


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ENV_NAMES:
        monkeypatch.delenv(name, raising=False)


def test_defaults_without_env_file(tmp_path):
    settings = Settings(_env_file=tmp_path / "missing.env")
    assert settings.log_level == "INFO"
    assert settings.jobs == 1
    assert settings.config_path is None


def test_dotenv_file_is_read(tmp_path):
    env_file = tmp_path / ".env"
    env_file.write_text(
        "SPIKE_LOG_LEVEL=DEBUG\n"
        "SPIKE_LOG_JSON=true\n"
        "SPIKE_JOBS=4\n"
        "SPIKE_OUT_DIR=runs/feb\n"
        "SPIKE_CONFIG_PATH=configs/model1_psa.json\n"
    )
    settings = Settings(_env_file=env_file)
    assert settings.log_level == "DEBUG"
    assert settings.log_json is True
    assert settings.jobs == 4
    assert settings.out_dir == "runs/feb"
    assert settings.config_path == "configs/model1_psa.json"


def test_exported_variable_wins_over_dotenv(tmp_path, monkeypatch):
    env_file = tmp_path / ".env"
    env_file.write_text("SPIKE_SEED=5\n")
    monkeypatch.setenv("SPIKE_SEED", "9")
    assert Settings(_env_file=env_file).seed == 9
