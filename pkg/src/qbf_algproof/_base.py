import os
import copy
import logging
import itertools
from math import lcm
from fractions import Fraction
from collections.abc import Iterable, Iterator

from pydantic import validate_call

from .validator import is_truthy

logger = logging.getLogger(__name__)


@validate_call
def deep_merge(dict1: dict, dict2: dict) -> dict:
    """Overlay `dict2` on a copy of `dict1`, descending into sections present in both.

    Used to put command line overrides on top of a settings file. Neither input is modified.

    Args:
        dict1 (dict, required): Settings read from file.
        dict2 (dict, required): Overrides, winning on conflicting leaves.

    Returns:
        dict: Merged settings.
    """

    _merged = copy.deepcopy(dict1)
    for _key, _val in dict2.items():
        _old = _merged.get(_key)
        if isinstance(_old, dict) and isinstance(_val, dict):
            _merged[_key] = deep_merge(_old, _val)
            continue

        _merged[_key] = copy.deepcopy(_val)

    return _merged


def is_debug_mode() -> bool:
    """Whether verbose logging was asked for in the environment.

    A parseable `DEBUG` value decides; when `DEBUG` is unset, `ENV=development` turns it on.
    """

    _debug = os.getenv("DEBUG", "").strip()
    if _debug:
        try:
            return is_truthy(_debug)
        except ValueError:
            logger.warning(f"Ignoring unrecognized DEBUG value '{_debug}'.")
            return False

    return os.getenv("ENV", "").strip().lower() == "development"


def to_rational(value: int | Fraction | str) -> Fraction:
    """Convert an exact value to `Fraction`, rejecting floats.

    Args:
        value (int | Fraction | str, required): Integer, fraction or 'a/b' text.

    Raises:
        TypeError: If `value` is a float or another inexact type.

    Returns:
        Fraction: The value in lowest terms.
    """

    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"`value` argument type '{type(value).__name__}' is not exact!")

    if isinstance(value, (int, Fraction)):
        return Fraction(value)

    if isinstance(value, str):
        return Fraction(value.strip())

    raise TypeError(f"`value` argument type '{type(value).__name__}' is not supported!")


def common_denominator(values: Iterable[Fraction]) -> int:
    """Least common multiple of the denominators of `values` (1 for no values)."""

    _lcd = 1
    for _value in values:
        _lcd = lcm(_lcd, _value.denominator)

    return _lcd


def iter_assignments(variables: Iterable[int]) -> Iterator[dict[int, int]]:
    """Yield every 0/1 assignment of `variables` in lexicographic order (first variable slowest)."""

    _vars = list(variables)
    for _bits in itertools.product((0, 1), repeat=len(_vars)):
        yield dict(zip(_vars, _bits))


__all__ = [
    "deep_merge",
    "is_debug_mode",
    "to_rational",
    "common_denominator",
    "iter_assignments",
]
