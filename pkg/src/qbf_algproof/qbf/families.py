import logging

from pydantic import validate_call

from ..constants import QuantifierEnum, FamilyEnum
from ..exceptions import InvalidSizeError
from ._base import Qbf, Clause

logger = logging.getLogger(__name__)


_E = QuantifierEnum.EXISTS
_A = QuantifierEnum.FORALL


def _check_size(n: int) -> None:
    if n < 1:
        raise InvalidSizeError(n=n)

    return


@validate_call
def gen_forall_or(n: int) -> Qbf:
    """`forall u1 ... un. (u1 or ... or un)` with variables 1..n."""

    _check_size(n)
    _prefix = tuple((_A, _i) for _i in range(1, n + 1))
    return Qbf(prefix=_prefix, clauses=(tuple(range(1, n + 1)),))


@validate_call
def gen_parity(n: int) -> Qbf:
    """Parity formulas: `exists x forall u exists t`, with `t_i` the running XOR and `u != t_n`.

    Variables: `x_i = i`, `u = n + 1`, `t_i = n + 1 + i`. Clause order: the two clauses of
    `t_1 <-> x_1`, four clauses per `t_i <-> t_{i-1} xor x_i`, then `u or t_n` and `-u or -t_n`.

    Args:
        n (int, required): Number of inputs, >= 1.

    Raises:
        InvalidSizeError: If `n` < 1.

    Returns:
        Qbf: Formula with `4(n - 1) + 4` clauses.
    """

    _check_size(n)
    _u = n + 1

    def _t(i: int) -> int:
        return n + 1 + i

    _prefix = (
        tuple((_E, _i) for _i in range(1, n + 1))
        + ((_A, _u),)
        + tuple((_E, _t(_i)) for _i in range(1, n + 1))
    )
    _clauses: list[Clause] = [(-_t(1), 1), (_t(1), -1)]
    for _i in range(2, n + 1):
        _ti, _tp = _t(_i), _t(_i - 1)
        _clauses += [
            (-_ti, _tp, _i),
            (-_ti, -_tp, -_i),
            (_ti, -_tp, _i),
            (_ti, _tp, -_i),
        ]

    _clauses += [(_u, _t(n)), (-_u, -_t(n))]
    return Qbf(prefix=_prefix, clauses=tuple(_clauses))


@validate_call
def gen_equality(n: int) -> Qbf:
    """Equality formulas: `t_i -> (x_i != u_i)` for every `i`, plus the clause `t_1 or ... or t_n`.

    Variables: `x_i = i`, `u_i = n + i`, `t_i = 2n + i`.

    Args:
        n (int, required): Number of pairs, >= 1.

    Raises:
        InvalidSizeError: If `n` < 1.

    Returns:
        Qbf: Formula with `2n + 1` clauses.
    """

    _check_size(n)
    _prefix = (
        tuple((_E, _i) for _i in range(1, n + 1))
        + tuple((_A, n + _i) for _i in range(1, n + 1))
        + tuple((_E, 2 * n + _i) for _i in range(1, n + 1))
    )
    _clauses: list[Clause] = []
    for _i in range(1, n + 1):
        _x, _u, _t = _i, n + _i, 2 * n + _i
        _clauses += [(-_t, _x, _u), (-_t, -_x, -_u)]

    _clauses.append(tuple(2 * n + _i for _i in range(1, n + 1)))
    return Qbf(prefix=_prefix, clauses=tuple(_clauses))


@validate_call
def gen_qmajority(n: int) -> Qbf:
    """Q-Majority: `exists x forall u exists t. (u != Majority(x))` with a threshold-counter circuit.

    Gate `th(i, k)` means "at least k of x_1..x_i are true" and satisfies
    `th(i, k) = th(i-1, k) or (x_i and th(i-1, k-1))`. Only the gates the output
    `th(n, ceil(n/2))` depends on get a Tseitin variable; constant inputs are folded.
    Variables: `x_i = i`, `u = n + 1`, gates from `n + 2` upward in (i, k) order.

    Args:
        n (int, required): Number of inputs, >= 1.

    Raises:
        InvalidSizeError: If `n` < 1.

    Returns:
        Qbf: False formula.
    """

    _check_size(n)
    _u = n + 1
    _threshold = (n + 1) // 2
    _gates: dict[tuple[int, int], int] = {}
    _next = n + 2
    for _i in range(1, n + 1):
        for _k in range(max(1, _threshold - n + _i), min(_i, _threshold) + 1):
            _gates[(_i, _k)] = _next
            _next += 1

    _clauses: list[Clause] = []
    for (_i, _k), _t in _gates.items():
        _x = _i
        _a = _gates.get((_i - 1, _k))  # None: constant false
        _b = None if _k == 1 else _gates[(_i - 1, _k - 1)]  # None: constant true
        if (_a is None) and (_b is None):
            _clauses += [(-_t, _x), (_t, -_x)]
        elif _a is None:
            _clauses += [(-_t, _x), (-_t, _b), (_t, -_x, -_b)]
        elif _b is None:
            _clauses += [(-_t, _a, _x), (_t, -_a), (_t, -_x)]
        else:
            _clauses += [(-_t, _a, _x), (-_t, _a, _b), (_t, -_a), (_t, -_x, -_b)]

    _out = _gates[(n, _threshold)]
    _clauses += [(_u, _out), (-_u, -_out)]

    _prefix = (
        tuple((_E, _i) for _i in range(1, n + 1))
        + ((_A, _u),)
        + tuple((_E, _t) for _t in _gates.values())
    )
    return Qbf(prefix=_prefix, clauses=tuple(_clauses))


_GENERATORS = {
    FamilyEnum.FORALL_OR: gen_forall_or,
    FamilyEnum.PARITY: gen_parity,
    FamilyEnum.EQUALITY: gen_equality,
    FamilyEnum.QMAJORITY: gen_qmajority,
}


@validate_call
def gen_family(family: FamilyEnum | str, n: int) -> Qbf:
    """Generate a benchmark formula by family name.

    Args:
        family (FamilyEnum | str, required): 'forall_or', 'parity', 'equality' or 'qmajority'.
        n      (int             , required): Instance size, >= 1.

    Raises:
        InvalidSizeError: If `n` < 1.

    Returns:
        Qbf: Generated formula.
    """

    if isinstance(family, str):
        family = FamilyEnum(family.strip().upper().replace("-", "_"))

    _qbf = _GENERATORS[family](n)
    logger.debug(
        f"Generated '{family.value}' n={n}: {_qbf.num_vars} variables, {len(_qbf.clauses)} clauses."
    )
    return _qbf


__all__ = [
    "gen_forall_or",
    "gen_parity",
    "gen_equality",
    "gen_qmajority",
    "gen_family",
]
