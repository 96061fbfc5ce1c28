import logging
from fractions import Fraction
from collections.abc import Sequence

from .._base import common_denominator

logger = logging.getLogger(__name__)


def _integer_rows(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[list[int]]:
    _matrix: list[list[int]] = []
    for _row, _b in zip(rows, rhs):
        _full = list(_row) + [_b]
        _lcd = common_denominator(_full)
        _matrix.append([int(_value * _lcd) for _value in _full])

    return _matrix


def solve_exact(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], ncols: int
) -> list[Fraction] | None:
    """Solve `A x = b` exactly, or report that it has no solution.

    Rows are scaled to integers and brought to echelon form by fraction-free (Bareiss)
    elimination; every division is exact. Free variables are set to 0 in the returned solution.

    Args:
        rows  (Sequence[Sequence[Fraction]], required): Coefficient rows, each of length `ncols`.
        rhs   (Sequence[Fraction]          , required): Right-hand side, one value per row.
        ncols (int                         , required): Number of unknowns.

    Returns:
        list[Fraction] | None: A solution, or None when the system is inconsistent.
    """

    _matrix = _integer_rows(rows, rhs)
    _nrows = len(_matrix)
    _prev = 1
    _rank = 0
    _pivots: list[int] = []
    for _col in range(ncols):
        if _rank == _nrows:
            break

        _pivot_row = next(
            (_i for _i in range(_rank, _nrows) if _matrix[_i][_col] != 0), None
        )
        if _pivot_row is None:
            continue

        if _pivot_row != _rank:
            _matrix[_pivot_row], _matrix[_rank] = _matrix[_rank], _matrix[_pivot_row]

        _top = _matrix[_rank]
        _pivot = _top[_col]
        for _i in range(_rank + 1, _nrows):
            _row = _matrix[_i]
            _factor = _row[_col]
            for _j in range(_col + 1, ncols + 1):
                _row[_j] = (_pivot * _row[_j] - _factor * _top[_j]) // _prev

            _row[_col] = 0

        _prev = _pivot
        _pivots.append(_col)
        _rank += 1

    for _i in range(_rank, _nrows):
        if _matrix[_i][ncols] != 0:
            logger.debug(f"Inconsistent system: rank {_rank}, {_nrows} rows, {ncols} unknowns.")
            return None

    _solution = [Fraction(0)] * ncols
    for _k in range(_rank - 1, -1, -1):
        _col = _pivots[_k]
        _row = _matrix[_k]
        _value = Fraction(_row[ncols])
        for _j in range(_col + 1, ncols):
            if _row[_j] and _solution[_j]:
                _value -= _row[_j] * _solution[_j]

        _solution[_col] = _value / _row[_col]

    logger.debug(f"Solved system: rank {_rank}, {_nrows} rows, {ncols} unknowns.")
    return _solution


__all__ = [
    "solve_exact",
]
