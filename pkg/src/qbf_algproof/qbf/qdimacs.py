import re
import logging

from pydantic import validate_call

from ..constants import QuantifierEnum, QDIMACS_TOKEN_REGEX
from ..exceptions import ParseError, UndeclaredVariableError
from ._base import Qbf, Clause, normalize_clause

logger = logging.getLogger(__name__)


_TOKEN_PATTERN = re.compile(QDIMACS_TOKEN_REGEX)


def _tokenize(raw: str) -> tuple[list[str], list[int]]:
    """Tokens of a line and their 1-based columns."""

    _matches = list(_TOKEN_PATTERN.finditer(raw))
    return [_m.group() for _m in _matches], [_m.start() + 1 for _m in _matches]


def _to_int(token: str, line: int, column: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"Expected an integer, got '{token}'!", line, column) from None


@validate_call
def parse_qdimacs(text: str, allow_free: bool = False) -> Qbf:
    """Parse a QDIMACS formula.

    Args:
        text       (str , required): QDIMACS content.
        allow_free (bool, optional): Bind variables missing from the prefix existentially in an
                                        outermost block instead of rejecting them. Defaults to False.

    Raises:
        ParseError             : If the text is not valid QDIMACS (line and column attached).
        TautologyError         : If a clause contains a variable in both polarities.
        UndeclaredVariableError: If a clause variable is not quantified and `allow_free` is False.

    Returns:
        Qbf: Parsed formula with the prefix order exactly as declared.
    """

    _num_vars: int | None = None
    _num_clauses = 0
    _prefix: list[tuple[QuantifierEnum, int]] = []
    _declared: set[int] = set()
    _clauses: list[Clause] = []
    _pending: list[int] = []
    _pending_line = 0

    for _line_no, _raw in enumerate(text.splitlines(), start=1):
        _line = _raw.strip()
        if (not _line) or _line.startswith("c"):
            continue

        _tokens, _columns = _tokenize(_raw)
        _column = _columns[0]
        if _tokens[0] == "p":
            if _num_vars is not None:
                raise ParseError("Duplicate problem line!", _line_no, _column)

            if (len(_tokens) != 4) or (_tokens[1] != "cnf"):
                raise ParseError("Problem line must be 'p cnf <vars> <clauses>'!", _line_no, _column)

            _num_vars = _to_int(_tokens[2], _line_no, _columns[2])
            _num_clauses = _to_int(_tokens[3], _line_no, _columns[3])
            if (_num_vars < 0) or (_num_clauses < 0):
                raise ParseError("Problem line counts must be non-negative!", _line_no, _column)

            continue

        if _num_vars is None:
            raise ParseError("Missing problem line before content!", _line_no, _column)

        if _tokens[0] in ("e", "a"):
            if _clauses or _pending:
                raise ParseError("Quantifier line after the first clause!", _line_no, _column)

            if _tokens[-1] != "0":
                raise ParseError("Quantifier line must end with 0!", _line_no, _columns[-1])

            _quantifier = QuantifierEnum(_tokens[0])
            for _token, _at in zip(_tokens[1:-1], _columns[1:-1]):
                _var = _to_int(_token, _line_no, _at)
                if (_var < 1) or (_num_vars < _var):
                    raise ParseError(f"Variable {_var} is out of range!", _line_no, _at)

                if _var in _declared:
                    raise ParseError(f"Variable {_var} is quantified twice!", _line_no, _at)

                _declared.add(_var)
                _prefix.append((_quantifier, _var))

            continue

        if not _pending:
            _pending_line = _line_no

        for _token, _at in zip(_tokens, _columns):
            _literal = _to_int(_token, _line_no, _at)
            if _num_vars < abs(_literal):
                raise ParseError(f"Literal {_literal} is out of range!", _line_no, _at)

            if _literal == 0:
                _clauses.append(normalize_clause(_pending))
                _pending = []
            else:
                _pending.append(_literal)

    if _num_vars is None:
        raise ParseError("Missing problem line!", 1, 1)

    if _pending:
        raise ParseError("Last clause is not terminated by 0!", _pending_line, 1)

    if len(_clauses) != _num_clauses:
        raise ParseError(
            f"Problem line declares {_num_clauses} clauses, found {len(_clauses)}!", 1, 1
        )

    _free = sorted({abs(_l) for _c in _clauses for _l in _c} - _declared)
    if _free:
        if not allow_free:
            raise UndeclaredVariableError(var=_free[0])

        logger.debug(f"Binding free variables {_free} existentially.")
        _prefix = [(QuantifierEnum.EXISTS, _v) for _v in _free] + _prefix

    return Qbf(prefix=tuple(_prefix), clauses=tuple(_clauses))


@validate_call(config={"arbitrary_types_allowed": True})
def write_qdimacs(qbf: Qbf) -> str:
    """Serialize a formula as QDIMACS; consecutive variables of one quantifier share a line.

    Args:
        qbf (Qbf, required): Formula.

    Returns:
        str: QDIMACS text ending with a newline.
    """

    _num_vars = max(qbf.variables, default=0)
    _lines = [f"p cnf {_num_vars} {len(qbf.clauses)}"]

    _block: list[int] = []
    _block_quantifier: QuantifierEnum | None = None
    for _quantifier, _var in qbf.prefix:
        if (_block_quantifier is not None) and (_quantifier != _block_quantifier):
            _lines.append(f"{_block_quantifier.value} {' '.join(map(str, _block))} 0")
            _block = []

        _block_quantifier = _quantifier
        _block.append(_var)

    if _block_quantifier is not None:
        _lines.append(f"{_block_quantifier.value} {' '.join(map(str, _block))} 0")

    for _clause in qbf.clauses:
        _lines.append(" ".join([*map(str, _clause), "0"]))

    return "\n".join(_lines) + "\n"


__all__ = [
    "parse_qdimacs",
    "write_qdimacs",
]
