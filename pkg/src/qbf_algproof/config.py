import logging
from pathlib import Path
from functools import lru_cache
from contextlib import contextmanager
from contextvars import ContextVar
from collections.abc import Iterator
from typing import Any

from pydantic import Field, validate_call
from pydantic_settings import BaseSettings, SettingsConfigDict

from .constants import (
    ENV_PREFIX,
    DEFAULT_MAX_VARS,
    DEFAULT_MAX_MODELS,
    DEFAULT_MAX_UNKNOWNS,
    DEFAULT_MAX_TABLE_VARS,
    DEFAULT_MAX_QDEG,
)
from ._base import deep_merge
from .io import read_config_file

logger = logging.getLogger(__name__)


class QalgSettings(BaseSettings):
    """Caps and defaults shared by every exhaustive procedure.

    Values come from (lowest to highest priority) defaults, a `.env` file, `QALG_*` environment
    variables, and explicit overrides passed to `load_settings`.
    """

    model_config = SettingsConfigDict(
        env_prefix=ENV_PREFIX,
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        frozen=True,
    )

    max_vars: int = Field(default=DEFAULT_MAX_VARS, ge=1, le=64)
    max_models: int = Field(default=DEFAULT_MAX_MODELS, ge=1)
    max_unknowns: int = Field(default=DEFAULT_MAX_UNKNOWNS, ge=1)
    max_table_vars: int = Field(default=DEFAULT_MAX_TABLE_VARS, ge=0, le=32)
    max_qdeg: int = Field(default=DEFAULT_MAX_QDEG, ge=0)
    log_level: str = Field(default="WARNING", min_length=4, max_length=8)


_active_settings: ContextVar[QalgSettings | None] = ContextVar("qalg_settings", default=None)


@lru_cache(maxsize=1)
def _env_settings() -> QalgSettings:
    return QalgSettings()


def get_settings() -> QalgSettings:
    """Settings installed by `use_settings`, else the process-wide ones read from the environment."""

    _settings = _active_settings.get()
    if _settings is not None:
        return _settings

    return _env_settings()


@contextmanager
def use_settings(settings: QalgSettings) -> Iterator[QalgSettings]:
    """Install `settings` as the ones `get_settings` and `resolve_cap` return inside the block.

    Args:
        settings (QalgSettings, required): Settings to install, usually from `load_settings`.

    Yields:
        QalgSettings: The installed settings.
    """

    _token = _active_settings.set(settings)
    try:
        yield settings
    finally:
        _active_settings.reset(_token)


@validate_call
def load_settings(
    config_path: str | Path | None = None, **overrides: Any
) -> QalgSettings:
    """Build settings from an optional config file plus explicit overrides.

    Args:
        config_path (str | Path | None, optional): YAML, JSON or TOML file; the keys may sit at the
                                                    top level or under a `qalg` section. Defaults to None.
        **overrides (Any              , optional): Field values taking precedence over the file;
                                                    None values are ignored.

    Raises:
        FileNotFoundError: If `config_path` does not exist.
        ValidationError  : If a value is out of range.

    Returns:
        QalgSettings: New settings instance.
    """

    _config: dict[str, Any] = {}
    if config_path:
        _data = read_config_file(config_path=config_path)
        _config = _data.get("qalg", _data) if isinstance(_data, dict) else {}
        logger.debug(f"Loaded settings from '{config_path}': {_config}")

    _overrides = {_key: _val for _key, _val in overrides.items() if _val is not None}
    _config = deep_merge(_config, _overrides)
    _settings = QalgSettings(**_config)
    return _settings


def resolve_cap(value: int | None, field: str) -> int:
    """Return `value` or, when it is None, the named field of the active settings."""

    if value is not None:
        return value

    return getattr(get_settings(), field)


__all__ = [
    "QalgSettings",
    "get_settings",
    "load_settings",
    "use_settings",
    "resolve_cap",
]
