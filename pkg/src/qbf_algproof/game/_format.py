import re
import logging

from pydantic import validate_call

from ..constants import STRATEGY_LINE_REGEX, TABLE_LINE_REGEX
from ..exceptions import ParseError
from ..poly import Polynomial, parse_poly, format_poly
from ..qbf import Qbf, EvalStrategy
from ..cert import strip_comment
from ._base import ScoreStrategy

logger = logging.getLogger(__name__)


_STRATEGY_PATTERN = re.compile(STRATEGY_LINE_REGEX)
_TABLE_PATTERN = re.compile(TABLE_LINE_REGEX)


@validate_call
def parse_strategy(text: str) -> ScoreStrategy:
    """Parse a strategy file: one `u <var> : <poly>` line per universal, `#` comments.

    Args:
        text (str, required): File content.

    Raises:
        ParseError: If a line is malformed or a universal repeats.

    Returns:
        ScoreStrategy: Parsed strategy; universals without a line score 0.
    """

    _scores: dict[int, Polynomial] = {}
    for _line_no, _raw in enumerate(text.splitlines(), start=1):
        _line = strip_comment(_raw)
        if not _line:
            continue

        _match = _STRATEGY_PATTERN.match(_line)
        if not _match:
            raise ParseError(f"Expected 'u <var> : <poly>', got '{_line}'!", _line_no, 1)

        _u = int(_match.group(1))
        if _u in _scores:
            raise ParseError(f"Duplicate score for universal {_u}!", _line_no, 1)

        _scores[_u] = parse_poly(_match.group(2), line=_line_no)

    return ScoreStrategy(scores={_u: _s for _u, _s in _scores.items() if _s})


@validate_call(config={"arbitrary_types_allowed": True})
def format_strategy(strategy: ScoreStrategy) -> str:
    _lines = [f"u {_u} : {format_poly(strategy.scores[_u])}" for _u in sorted(strategy.scores)]
    return "\n".join(_lines) + "\n" if _lines else ""


@validate_call(config={"arbitrary_types_allowed": True})
def parse_table(text: str, qbf: Qbf) -> EvalStrategy:
    """Parse a decision-table file for the universals of `qbf`.

    Each line `t <u> <bits> <0|1>` sets the move of `u` on one row; `bits` lists the values of the
    variables left of `u` in prefix order, or `-` when there are none. Missing rows read as 0.

    Args:
        text (str, required): File content.
        qbf  (Qbf, required): Formula fixing the row domains.

    Raises:
        ParseError: If a line is malformed, names a non-universal, has the wrong width, or repeats.

    Returns:
        EvalStrategy: Decision tables over the prefix domains.
    """

    _domains = {_u: tuple(qbf.left_of(_u)) for _u in qbf.universals}
    _tables: dict[int, dict[str, int]] = {_u: {} for _u in _domains}
    for _line_no, _raw in enumerate(text.splitlines(), start=1):
        _line = strip_comment(_raw)
        if not _line:
            continue

        _match = _TABLE_PATTERN.match(_line)
        if not _match:
            raise ParseError(f"Expected 't <var> <bits|-> <0|1>', got '{_line}'!", _line_no, 1)

        _u = int(_match.group(1))
        if _u not in _domains:
            raise ParseError(f"Variable {_u} is not universal!", _line_no, 1)

        _key = "" if _match.group(2) == "-" else _match.group(2)
        if len(_key) != len(_domains[_u]):
            raise ParseError(
                f"Row for {_u} needs {len(_domains[_u])} bits, got {len(_key)}!", _line_no, 1
            )

        if _key in _tables[_u]:
            raise ParseError(f"Duplicate row '{_match.group(2)}' for {_u}!", _line_no, 1)

        _tables[_u][_key] = int(_match.group(3))

    return EvalStrategy(domains=_domains, tables=_tables)


@validate_call(config={"arbitrary_types_allowed": True})
def format_table(tau: EvalStrategy) -> str:
    _lines = []
    for _u in sorted(tau.tables):
        for _key in sorted(tau.tables[_u]):
            _lines.append(f"t {_u} {_key or '-'} {tau.tables[_u][_key]}")

    return "\n".join(_lines) + "\n" if _lines else ""


__all__ = [
    "parse_strategy",
    "format_strategy",
    "parse_table",
    "format_table",
]
