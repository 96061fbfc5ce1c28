import logging
from pathlib import Path
from fractions import Fraction

import pytest
from pydantic import ValidationError

from qbf_algproof import io as io_utils
from qbf_algproof._base import (
    common_denominator,
    deep_merge,
    is_debug_mode,
    iter_assignments,
    to_rational,
)
from qbf_algproof.constants import DEFAULT_MAX_VARS
from qbf_algproof.exceptions import TooLargeError
from qbf_algproof.validator import check_cap, is_truthy
from qbf_algproof.config import QalgSettings, get_settings, load_settings, resolve_cap, use_settings


logger = logging.getLogger(__name__)


def test_deep_merge():
    logger.info("Testing 'deep_merge'...")

    _base = {"qalg": {"max_vars": 4, "log_level": "INFO"}, "other": 1}
    _merged = deep_merge(_base, {"qalg": {"max_vars": 8}})
    assert _merged == {"qalg": {"max_vars": 8, "log_level": "INFO"}, "other": 1}
    assert _base["qalg"]["max_vars"] == 4

    logger.info("Done: 'deep_merge'.\n")


def test_is_truthy():
    logger.info("Testing 'is_truthy'...")

    for _val in ("1", "true", " Yes ", "on", True, 2):
        assert is_truthy(_val)

    for _val in ("0", "false", "off", "", False, 0, None):
        assert not is_truthy(_val)

    with pytest.raises(ValueError):
        is_truthy("maybe")

    logger.info("Done: 'is_truthy'.\n")


def test_is_debug_mode(monkeypatch: pytest.MonkeyPatch):
    logger.info("Testing 'is_debug_mode'...")

    monkeypatch.delenv("DEBUG", raising=False)
    monkeypatch.delenv("ENV", raising=False)
    assert not is_debug_mode()

    monkeypatch.setenv("ENV", "development")
    assert is_debug_mode()

    monkeypatch.setenv("DEBUG", "false")
    assert not is_debug_mode()

    monkeypatch.setenv("DEBUG", "true")
    assert is_debug_mode()

    logger.info("Done: 'is_debug_mode'.\n")


def test_rationals():
    logger.info("Testing exact rational helpers...")

    assert to_rational(3) == 3
    assert to_rational(" -2/6 ") == Fraction(-1, 3)
    assert to_rational(Fraction(4, 8)) == Fraction(1, 2)

    for _val in (0.5, True):
        with pytest.raises(TypeError):
            to_rational(_val)

    assert common_denominator([Fraction(1, 4), Fraction(5, 6), Fraction(2)]) == 12
    assert common_denominator([]) == 1

    logger.info("Done: Exact rational helpers.\n")


def test_iter_assignments():
    logger.info("Testing 'iter_assignments'...")

    _all = list(iter_assignments([3, 1]))
    assert _all == [{3: 0, 1: 0}, {3: 0, 1: 1}, {3: 1, 1: 0}, {3: 1, 1: 1}]
    assert list(iter_assignments([])) == [{}]

    logger.info("Done: 'iter_assignments'.\n")


def test_check_cap():
    logger.info("Testing 'check_cap'...")

    check_cap("variables", 4, 4)
    with pytest.raises(TooLargeError) as _info:
        check_cap("variables", 5, 4)

    assert (_info.value.size, _info.value.cap) == (5, 4)

    logger.info("Done: 'check_cap'.\n")


def test_io(tmp_path: Path):
    logger.info("Testing file helpers...")

    _nested = tmp_path / "a" / "b" / "note.txt"
    io_utils.write_text_file(_nested, "hello\n")
    assert io_utils.read_text_file(_nested) == "hello\n"

    with pytest.raises(FileNotFoundError):
        io_utils.read_text_file(tmp_path / "missing.txt")

    _data = {"command": "check", "measures": {"qsize": 1}}
    for _name in ("report.json", "report.yaml"):
        io_utils.write_data_file(tmp_path / _name, _data)
        assert io_utils.read_config_file(tmp_path / _name) == _data

    with pytest.raises(ValueError):
        io_utils.write_data_file(tmp_path / "report.toml", _data)

    (tmp_path / "report.ini").write_text("", encoding="utf-8")
    with pytest.raises(ValueError):
        io_utils.read_config_file(tmp_path / "report.ini")

    logger.info("Done: File helpers.\n")


def test_load_settings(tmp_path: Path, monkeypatch: pytest.MonkeyPatch):
    logger.info("Testing settings...")

    for _var in ("QALG_MAX_VARS", "QALG_MAX_QDEG", "QALG_LOG_LEVEL"):
        monkeypatch.delenv(_var, raising=False)

    assert load_settings().max_vars == DEFAULT_MAX_VARS

    _yaml = tmp_path / "settings.yml"
    _yaml.write_text("qalg:\n  max_vars: 6\n  max_qdeg: 2\n", encoding="utf-8")
    _settings = load_settings(_yaml, max_vars=None)
    assert (_settings.max_vars, _settings.max_qdeg) == (6, 2)
    assert load_settings(_yaml, max_vars=3).max_vars == 3

    _json = tmp_path / "settings.json"
    _json.write_text('{"max_table_vars": 5}', encoding="utf-8")
    assert load_settings(str(_json)).max_table_vars == 5

    _toml = tmp_path / "settings.toml"
    _toml.write_text("[qalg]\nlog_level = 'DEBUG'\n", encoding="utf-8")
    assert load_settings(_toml).log_level == "DEBUG"

    with pytest.raises(ValidationError):
        load_settings(max_vars=65)

    with pytest.raises(FileNotFoundError):
        load_settings(tmp_path / "missing.yml")

    monkeypatch.setenv("QALG_MAX_VARS", "7")
    assert QalgSettings().max_vars == 7

    assert resolve_cap(3, "max_vars") == 3

    logger.info("Done: Settings.\n")


def test_use_settings(tmp_path: Path, monkeypatch: pytest.MonkeyPatch):
    logger.info("Testing installed settings...")

    monkeypatch.delenv("QALG_MAX_MODELS", raising=False)
    _default = resolve_cap(None, "max_models")

    _yaml = tmp_path / "caps.yaml"
    _yaml.write_text("qalg:\n  max_models: 1\n  max_table_vars: 2\n", encoding="utf-8")
    with use_settings(load_settings(_yaml)) as _settings:
        assert get_settings() is _settings
        assert resolve_cap(None, "max_models") == 1
        assert resolve_cap(None, "max_table_vars") == 2
        assert resolve_cap(5, "max_models") == 5

    assert resolve_cap(None, "max_models") == _default

    logger.info("Done: Installed settings.\n")
