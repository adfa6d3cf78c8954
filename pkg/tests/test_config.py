import pytest

from quantum_search.config import Settings
from quantum_search.errors import ConfigError

_VARS = [
    "QSEARCH_SEED", "QSEARCH_ENGINE", "QSEARCH_FORMAT", "QSEARCH_OUTPUT_DIR", "QSEARCH_LOG_LEVEL",
    "QSEARCH_IDENTITY_TOL", "QSEARCH_ROUNDOFF_TOL", "QSEARCH_KICKBACK_TOL", "QSEARCH_DISENTANGLE_TOL",
]


@pytest.fixture
def clean_env(monkeypatch, tmp_path):
    for name in _VARS:
        monkeypatch.delenv(name, raising=False)
    return tmp_path / "missing.env"


def test_defaults(clean_env):
    settings = Settings.from_env(clean_env)
    assert settings == Settings()
    assert settings.engine == "synthesized" and settings.output_format == "csv"


def test_environment_overrides(clean_env, monkeypatch):
    monkeypatch.setenv("QSEARCH_SEED", "42")
    monkeypatch.setenv("QSEARCH_ENGINE", "Dense")
    monkeypatch.setenv("QSEARCH_KICKBACK_TOL", "1e-9")
    settings = Settings.from_env(clean_env)
    assert settings.seed == 42
    assert settings.engine == "dense"
    assert settings.kickback_tol == 1e-9


def test_dotenv_file(clean_env, tmp_path):
    env_file = tmp_path / ".env"
    env_file.write_text("QSEARCH_FORMAT=json\nQSEARCH_LOG_LEVEL=debug\n")
    settings = Settings.from_env(env_file)
    assert settings.output_format == "json"
    assert settings.log_level == "DEBUG"


def test_bad_number(clean_env, monkeypatch):
    monkeypatch.setenv("QSEARCH_SEED", "many")
    with pytest.raises(ConfigError):
        Settings.from_env(clean_env)


def test_bad_choice(clean_env, monkeypatch):
    monkeypatch.setenv("QSEARCH_FORMAT", "xml")
    with pytest.raises(ConfigError):
        Settings.from_env(clean_env)
