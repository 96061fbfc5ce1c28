from pydantic import validate_call

from .exceptions import TooLargeError


_TRUE_WORDS = frozenset({"1", "true", "t", "yes", "y", "on"})
_FALSE_WORDS = frozenset({"", "0", "false", "f", "no", "n", "off"})


@validate_call
def is_truthy(val: str | bool | int | None) -> bool:
    """Interpret a flag as given in an environment variable or settings file.

    Args:
        val (str | bool | int | None, required): Flag value; strings are matched case-insensitively.

    Raises:
        ValueError: If `val` is a string that is neither a true nor a false word.

    Returns:
        bool: Flag state.
    """

    if not isinstance(val, str):
        return bool(val)

    _word = val.strip().lower()
    if _word in _TRUE_WORDS:
        return True

    if _word not in _FALSE_WORDS:
        raise ValueError(f"Cannot read '{val}' as a boolean flag!")

    return False


@validate_call
def check_cap(what: str, size: int, cap: int) -> None:
    """Reject sizes above a configured cap.

    Args:
        what (str, required): Human readable name of the measured quantity.
        size (int, required): Measured size.
        cap  (int, required): Maximum allowed size.

    Raises:
        TooLargeError: If `size` is greater than `cap`.
    """

    if cap < size:
        raise TooLargeError(what=what, size=size, cap=cap)

    return


__all__ = [
    "is_truthy",
    "check_cap",
]
