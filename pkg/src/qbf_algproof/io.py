# noqa: E402

import sys
import json
import logging
from pathlib import Path
from typing import Any

_binary_toml = False
if sys.version_info >= (3, 11):
    import tomllib  # type: ignore

    _binary_toml = True
else:
    import toml as tomllib  # type: ignore

import yaml
from pydantic import validate_call

from .constants import WarnEnum, ConfigFileFormatEnum, MAX_PATH_LENGTH

logger = logging.getLogger(__name__)


_SUFFIX_FORMATS: dict[str, ConfigFileFormatEnum] = {
    ".yaml": ConfigFileFormatEnum.YAML,
    ".yml": ConfigFileFormatEnum.YAML,
    ".json": ConfigFileFormatEnum.JSON,
    ".toml": ConfigFileFormatEnum.TOML,
}


def _as_path(file_path: str | Path) -> Path:
    _path = Path(file_path) if isinstance(file_path, str) else file_path
    if MAX_PATH_LENGTH < len(str(_path)):
        raise ValueError(f"Path is longer than {MAX_PATH_LENGTH} characters: '{str(_path)[:64]}...'")

    return _path


def _detect_format(file_path: Path) -> ConfigFileFormatEnum:
    _format = _SUFFIX_FORMATS.get(file_path.suffix.lower())
    if _format is None:
        raise ValueError(f"Unsupported data file suffix '{file_path.suffix}' for '{file_path}'!")

    return _format


def _ensure_parent(file_path: Path, warn_mode: WarnEnum) -> None:
    _parent = file_path.parent
    if _parent.is_dir():
        return

    if warn_mode == WarnEnum.ALWAYS:
        logger.info(f"Creating output directory '{_parent}'...")
    elif warn_mode == WarnEnum.DEBUG:
        logger.debug(f"Creating output directory '{_parent}'...")

    _parent.mkdir(parents=True, exist_ok=True)


@validate_call
def read_text_file(file_path: str | Path) -> str:
    """Read a UTF-8 text artifact (QDIMACS, certificate, strategy, table or proof trace).

    Args:
        file_path (str | Path, required): Artifact path.

    Raises:
        FileNotFoundError: If there is no such file.
        ValueError       : If the path is too long.

    Returns:
        str: Artifact text.
    """

    _path = _as_path(file_path)
    if not _path.is_file():
        raise FileNotFoundError(f"Input file '{_path}' does not exist!")

    try:
        return _path.read_text(encoding="utf-8")
    except Exception:
        logger.error(f"Could not read input file '{_path}'!")
        raise


@validate_call
def write_text_file(
    file_path: str | Path, content: str, warn_mode: WarnEnum | str = WarnEnum.DEBUG
) -> None:
    """Write a UTF-8 text artifact, creating missing parent directories.

    Args:
        file_path (str | Path     , required): Output path.
        content   (str            , required): Artifact text.
        warn_mode (WarnEnum | str , optional): How to log the parent directory creation. Defaults to 'DEBUG'.
    """

    if isinstance(warn_mode, str):
        warn_mode = WarnEnum(warn_mode.strip().upper())

    _path = _as_path(file_path)
    _ensure_parent(_path, warn_mode)
    try:
        _path.write_text(content, encoding="utf-8")
    except Exception:
        logger.error(f"Could not write output file '{_path}'!")
        raise


def _load_toml(path: Path) -> dict[str, Any]:
    if _binary_toml:
        with open(path, "rb") as _file:
            return tomllib.load(_file)  # type: ignore

    with open(path, encoding="utf-8") as _file:
        return tomllib.load(_file)  # type: ignore


@validate_call
def read_config_file(config_path: str | Path) -> dict[str, Any]:
    """Read a settings file, picking YAML, JSON or TOML by its suffix.

    An empty file reads as an empty dictionary.

    Args:
        config_path (str | Path, required): Settings file path.

    Raises:
        FileNotFoundError: If there is no such file.
        ValueError       : If the suffix is not one of '.yaml', '.yml', '.json', '.toml'.

    Returns:
        dict[str, Any]: Parsed settings.
    """

    _path = _as_path(config_path)
    if not _path.is_file():
        raise FileNotFoundError(f"Settings file '{_path}' does not exist!")

    _format = _detect_format(_path)
    try:
        if _format == ConfigFileFormatEnum.TOML:
            _data = _load_toml(_path)
        elif _format == ConfigFileFormatEnum.JSON:
            _data = json.loads(_path.read_text(encoding="utf-8") or "{}")
        else:
            _data = yaml.safe_load(_path.read_text(encoding="utf-8"))
    except Exception:
        logger.error(f"Could not parse {_format.value} settings file '{_path}'!")
        raise

    return _data or {}


@validate_call
def write_data_file(
    file_path: str | Path,
    data: dict[str, Any],
    warn_mode: WarnEnum | str = WarnEnum.DEBUG,
) -> None:
    """Write a report dictionary as YAML or JSON, chosen by the file suffix.

    Args:
        file_path (str | Path     , required): Output path ending in '.yaml', '.yml' or '.json'.
        data      (dict[str, Any] , required): JSON-compatible data.
        warn_mode (WarnEnum | str , optional): How to log the parent directory creation. Defaults to 'DEBUG'.

    Raises:
        ValueError: If the suffix is not a YAML or JSON one.
    """

    _path = _as_path(file_path)
    _format = _detect_format(_path)
    if _format == ConfigFileFormatEnum.YAML:
        _content = yaml.safe_dump(data, sort_keys=False, allow_unicode=True)
    elif _format == ConfigFileFormatEnum.JSON:
        _content = json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    else:
        raise ValueError(f"Reports cannot be written as {_format.value}: '{_path}'!")

    write_text_file(file_path=_path, content=_content, warn_mode=warn_mode)


__all__ = [
    "read_text_file",
    "write_text_file",
    "read_config_file",
    "write_data_file",
]
