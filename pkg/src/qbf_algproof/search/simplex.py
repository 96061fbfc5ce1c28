import logging
from fractions import Fraction
from collections.abc import Sequence

logger = logging.getLogger(__name__)


class Phase1Tableau:
    """Dense phase-1 tableau over `Fraction` for `A x = b, x >= 0`.

    One artificial variable per row starts in the basis; the objective row holds the reduced
    costs of `min sum(artificials)`.
    """

    def __init__(
        self, rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], ncols: int
    ) -> None:
        self.m = len(rows)
        self.n = ncols + self.m
        self.ncols = ncols
        self.A: list[list[Fraction]] = []
        self.b: list[Fraction] = []
        for _i, (_row, _value) in enumerate(zip(rows, rhs)):
            _sign = -1 if _value < 0 else 1
            _full = [Fraction(_sign * _a) for _a in _row] + [Fraction(0)] * self.m
            _full[ncols + _i] = Fraction(1)
            self.A.append(_full)
            self.b.append(Fraction(_sign * _value))

        self.basis = list(range(ncols, ncols + self.m))
        self.c = [Fraction(0)] * self.n
        for _j in range(ncols):
            self.c[_j] = -sum((_row[_j] for _row in self.A), Fraction(0))

        self.objective = -sum(self.b, Fraction(0))
        self.pivots = 0

    def pivot(self, i: int, j: int) -> None:
        _row = self.A[i]
        _piv = _row[j]
        _nonzero = [_l for _l in range(self.n) if _row[_l]]
        for _l in _nonzero:
            _row[_l] /= _piv

        self.b[i] /= _piv
        for _k in range(self.m):
            if _k == i:
                continue

            _other = self.A[_k]
            _f = _other[j]
            if not _f:
                continue

            for _l in _nonzero:
                _other[_l] -= _f * _row[_l]

            self.b[_k] -= _f * self.b[i]

        _f = self.c[j]
        if _f:
            for _l in _nonzero:
                self.c[_l] -= _f * _row[_l]

            self.objective -= _f * self.b[i]

        self.basis[i] = j
        self.pivots += 1

    def bland_step(self) -> bool:
        """One pivot by Bland's rule; False once no reduced cost is negative."""

        _entering = next((_j for _j in range(self.n) if self.c[_j] < 0), None)
        if _entering is None:
            return False

        _best: tuple[Fraction, int, int] | None = None
        for _i in range(self.m):
            _a = self.A[_i][_entering]
            if 0 < _a:
                _key = (self.b[_i] / _a, self.basis[_i], _i)
                if (_best is None) or (_key < _best):
                    _best = _key

        # phase 1 is bounded below by 0, so some row always qualifies
        assert _best is not None
        self.pivot(_best[2], _entering)
        return True

    def solve(self) -> None:
        while self.bland_step():
            pass

        return

    def values(self) -> list[Fraction]:
        _x = [Fraction(0)] * self.ncols
        for _i, _var in enumerate(self.basis):
            if _var < self.ncols:
                _x[_var] = self.b[_i]

        return _x


def find_feasible(
    rows: Sequence[Sequence[Fraction]],
    rhs: Sequence[Fraction],
    ncols: int,
    free: Sequence[int] = (),
) -> list[Fraction] | None:
    """Find a point of `{x : A x = b, x_j >= 0 for j not in free}` with exact arithmetic.

    Free columns are split into a difference of two non-negative columns. Phase 1 of the primal
    simplex method with Bland's rule decides feasibility without any tolerance.

    Args:
        rows  (Sequence[Sequence[Fraction]], required): Equality rows, each of length `ncols`.
        rhs   (Sequence[Fraction]          , required): Right-hand side.
        ncols (int                         , required): Number of unknowns.
        free  (Sequence[int]               , optional): Unknowns without a sign constraint.

    Returns:
        list[Fraction] | None: A feasible point, or None when the polyhedron is empty.
    """

    _free = sorted(set(free))
    _rows = [list(_row) + [-_row[_j] for _j in _free] for _row in rows]
    _tableau = Phase1Tableau(_rows, rhs, ncols + len(_free))
    _tableau.solve()
    logger.debug(
        f"Phase 1 finished after {_tableau.pivots} pivots on a {_tableau.m}x{_tableau.n} tableau "
        f"with objective {_tableau.objective}."
    )
    if _tableau.objective != 0:
        return None

    _values = _tableau.values()
    _x = _values[:ncols]
    for _k, _j in enumerate(_free):
        _x[_j] -= _values[ncols + _k]

    return _x


__all__ = [
    "Phase1Tableau",
    "find_feasible",
]
