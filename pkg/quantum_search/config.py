import os
from dataclasses import dataclass

from dotenv import load_dotenv

from .errors import ConfigError

ENGINES = ("synthesized", "closed_form", "dense")
FORMATS = ("csv", "json")


def _read(name, default, cast):
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return cast(raw.strip())
    except ValueError as e:
        raise ConfigError(f"{name}={raw!r} is not a valid {cast.__name__}") from e


def _choice(name, default, choices):
    value = _read(name, default, str).lower()
    if value not in choices:
        raise ConfigError(f"{name}={value!r} must be one of {', '.join(choices)}")
    return value


@dataclass(frozen=True)
class Settings:
    """Run defaults. CLI flags take precedence over these values."""

    seed: int = 0
    engine: str = "synthesized"
    output_format: str = "csv"
    output_root: str = "csv_outputs"
    log_level: str = "WARNING"
    identity_tol: float = 1e-12
    roundoff_tol: float = 1e-10
    kickback_tol: float = 1e-10
    disentangle_tol: float = 1e-8

    @classmethod
    def from_env(cls, dotenv_path=None):
        load_dotenv(dotenv_path)
        return cls(
            seed=_read("QSEARCH_SEED", cls.seed, int),
            engine=_choice("QSEARCH_ENGINE", cls.engine, ENGINES),
            output_format=_choice("QSEARCH_FORMAT", cls.output_format, FORMATS),
            output_root=_read("QSEARCH_OUTPUT_DIR", cls.output_root, str),
            log_level=_read("QSEARCH_LOG_LEVEL", cls.log_level, str).upper(),
            identity_tol=_read("QSEARCH_IDENTITY_TOL", cls.identity_tol, float),
            roundoff_tol=_read("QSEARCH_ROUNDOFF_TOL", cls.roundoff_tol, float),
            kickback_tol=_read("QSEARCH_KICKBACK_TOL", cls.kickback_tol, float),
            disentangle_tol=_read("QSEARCH_DISENTANGLE_TOL", cls.disentangle_tol, float),
        )
