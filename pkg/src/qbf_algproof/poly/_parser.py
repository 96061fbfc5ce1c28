import re
import logging
from fractions import Fraction

from pydantic import validate_call

from ..constants import RATIONAL_REGEX, FACTOR_REGEX, POLY_TERM_REGEX
from ..exceptions import ParseError
from ._base import ExtVar, Monomial, Polynomial, format_poly

logger = logging.getLogger(__name__)


_RATIONAL_PATTERN = re.compile(RATIONAL_REGEX)
_FACTOR_PATTERN = re.compile(FACTOR_REGEX)
_TERM_PATTERN = re.compile(POLY_TERM_REGEX)


def _parse_term(body: str, line: int, column: int) -> tuple[Monomial, Fraction]:
    _coef = Fraction(1)
    _factors: list[tuple[ExtVar, int]] = []
    for _part in body.split("*"):
        if not _part:
            raise ParseError(f"Empty factor in term '{body}'!", line, column)

        if _RATIONAL_PATTERN.match(_part):
            _coef *= Fraction(_part)
            continue

        _match = _FACTOR_PATTERN.match(_part)
        if not _match:
            raise ParseError(f"Invalid factor '{_part}'!", line, column)

        _twin, _base, _exp = _match.groups()
        if int(_base) < 1:
            raise ParseError(f"Variable index in '{_part}' must be >= 1!", line, column)

        _factors.append((ExtVar(int(_base), bool(_twin)), int(_exp) if _exp else 1))

    return Monomial(_factors), _coef


@validate_call
def parse_poly(text: str, line: int = 0) -> Polynomial:
    """Parse a polynomial written in the text grammar, e.g. `-3/2*x2*~x3^2 + 1`.

    Args:
        text (str, required): Polynomial text; whitespace is ignored.
        line (int, optional): Line number reported in errors. Defaults to 0.

    Raises:
        ParseError: If the text does not follow the grammar.

    Returns:
        Polynomial: Parsed polynomial with like terms merged.
    """

    _compact = "".join(text.split())
    if not _compact:
        raise ParseError("Empty polynomial!", line, 1)

    _terms: dict[Monomial, Fraction] = {}
    _position = 0
    for _match in _TERM_PATTERN.finditer(_compact):
        if _match.start() != _position:
            raise ParseError(f"Unexpected text in '{text}'!", line, _position + 1)

        _sign, _body = _match.groups()
        try:
            _monomial, _coef = _parse_term(_body, line, _match.start() + 1)
        except ZeroDivisionError:
            raise ParseError(f"Zero denominator in '{_body}'!", line, _match.start() + 1) from None

        if _sign == "-":
            _coef = -_coef

        _terms[_monomial] = _terms.get(_monomial, Fraction(0)) + _coef
        _position = _match.end()

    if _position != len(_compact):
        raise ParseError(f"Dangling sign in '{text}'!", line, _position + 1)

    return Polynomial(_terms)


__all__ = [
    "parse_poly",
    "format_poly",
]
