import logging
from fractions import Fraction
from collections import Counter

from pydantic import validate_call

from ..constants import VariantEnum
from ..exceptions import (
    GameError,
    HypothesisViolatedError,
    NotExistentialError,
    NotWinningError,
    SideConditionViolatedError,
)
from .._base import iter_assignments
from ..config import resolve_cap
from ..validator import check_cap
from ..poly import Polynomial
from ..qbf import Qbf, restrict_qbf
from ..ideal import literal_reduce
from ..cert import monomial_existential_degree
from ._base import ScoreStrategy, _total_score, check_winning, restrict_strategy

logger = logging.getLogger(__name__)


def _score_range(qbf: Qbf, strategy: ScoreStrategy) -> tuple[Fraction | None, Fraction]:
    """(smallest positive score, largest absolute score) over all assignments of `qbf`."""

    _min_positive: Fraction | None = None
    _max_abs = Fraction(0)
    for _alpha in iter_assignments(qbf.variables):
        _score = _total_score(strategy, _alpha)
        if (0 < _score) and ((_min_positive is None) or (_score < _min_positive)):
            _min_positive = _score

        _max_abs = max(_max_abs, abs(_score))

    return _min_positive, _max_abs


def _check_branch(qbf: Qbf, literal: int, strategy: ScoreStrategy) -> None:
    _var = abs(literal)
    for _u, _s in strategy.scores.items():
        if _s and qbf.is_left_of(_u, _var):
            raise SideConditionViolatedError(universal=_u, offending=_var)

    return


def _combine(
    qbf: Qbf, literal: int, on_true: ScoreStrategy, on_false: ScoreStrategy
) -> ScoreStrategy:
    """`s_u = l * s_u(true) + (d / c) * s_u(false)` for the existential literal `l`."""

    _var = abs(literal)
    _d, _ = _score_range(restrict_qbf(qbf, _var, 1 if 0 < literal else 0), on_true)
    _, _c = _score_range(restrict_qbf(qbf, _var, 0 if 0 < literal else 1), on_false)
    _ratio = (_d if _d is not None else Fraction(1)) / (_c + 1)
    _literal_poly = Polynomial.var(_var, twin=literal < 0)

    _scores: dict[int, Polynomial] = {}
    for _u in sorted(set(on_true.scores) | set(on_false.scores)):
        _score = _literal_poly * on_true.score(_u) + on_false.score(_u).scale(_ratio)
        if _score:
            _scores[_u] = _score

    logger.debug(f"Combined on literal {literal} with weight {_ratio}.")
    return ScoreStrategy(scores=_scores)


@validate_call(config={"arbitrary_types_allowed": True})
def combine_on_literal(
    qbf: Qbf,
    literal: int,
    on_true: ScoreStrategy,
    on_false: ScoreStrategy,
    check: bool = True,
    max_vars: int | None = None,
) -> ScoreStrategy:
    """Merge winning strategies of the two restrictions by an existential literal.

    Args:
        qbf      (Qbf          , required): Formula.
        literal  (int          , required): DIMACS literal of an existential variable.
        on_true  (ScoreStrategy, required): Winning strategy where the literal is true.
        on_false (ScoreStrategy, required): Winning strategy where the literal is false.
        check    (bool         , optional): Check both inputs with `check_winning` first.
                                            Defaults to True.
        max_vars (int | None   , optional): Variable cap; settings value when None.

    Raises:
        NotExistentialError       : If the literal's variable is not existential.
        SideConditionViolatedError: If the variable is not left of a universal scored by `on_true`.
        NotWinningError           : If an input strategy does not win on its restriction.
        TooLargeError             : If the formula has more variables than the cap.

    Returns:
        ScoreStrategy: Variant-1 winning strategy for `qbf`.
    """

    _var = abs(literal)
    if (not qbf.has_var(_var)) or (not qbf.is_existential(_var)):
        raise NotExistentialError(var=_var)

    check_cap("variables", qbf.num_vars, resolve_cap(max_vars, "max_vars"))
    _check_branch(qbf, literal, on_true)
    if check:
        for _bit, _strategy in ((1, on_true), (0, on_false)):
            _restricted = restrict_qbf(qbf, _var, _bit if 0 < literal else 1 - _bit)
            _result = check_winning(_restricted, _strategy, VariantEnum.POSITIVE, max_vars=max_vars)
            if not _result.winning:
                raise NotWinningError(counterexample=_result.counterexample)

    return _combine(qbf, literal, on_true, on_false)


@validate_call(config={"arbitrary_types_allowed": True})
def combine(
    qbf: Qbf,
    var: int,
    strategy_1: ScoreStrategy,
    strategy_0: ScoreStrategy,
    max_vars: int | None = None,
) -> ScoreStrategy:
    """`s_u = x * s_u^1 + (d / c) * s_u^0` for the existential variable `x = var`.

    `d` is the smallest positive final score of `strategy_1` and `c` is one more than the largest
    absolute final score of `strategy_0`, both over every assignment of the restricted formula.
    The existential degree grows by at most one on the `strategy_1` side.

    Args:
        qbf        (Qbf          , required): Formula.
        var        (int          , required): Existential variable `x`.
        strategy_1 (ScoreStrategy, required): Winning strategy for `qbf` with `x = 1`.
        strategy_0 (ScoreStrategy, required): Winning strategy for `qbf` with `x = 0`.
        max_vars   (int | None   , optional): Variable cap; settings value when None.

    Raises:
        NotExistentialError       : If `var` is not existential.
        SideConditionViolatedError: If `var` is not left of a universal scored by `strategy_1`.
        NotWinningError           : If an input strategy does not win on its restriction.

    Returns:
        ScoreStrategy: Variant-1 winning strategy for `qbf`.
    """

    return combine_on_literal(qbf, var, strategy_1, strategy_0, max_vars=max_vars)


def _simplify(strategy: ScoreStrategy) -> ScoreStrategy:
    _scores: dict[int, Polynomial] = {}
    for _u, _s in strategy.scores.items():
        _reduced, _ = literal_reduce(_s)
        if _reduced:
            _scores[_u] = _reduced

    return ScoreStrategy(scores=_scores)


def _high_monomials(qbf: Qbf, strategy: ScoreStrategy, degree: int) -> list:
    return [
        _monomial
        for _s in strategy.scores.values()
        for _monomial in _s.terms
        if degree < monomial_existential_degree(qbf, _monomial)
    ]


def _pick_literal(qbf: Qbf, strategy: ScoreStrategy, monomials: list) -> int:
    """Most frequent eligible existential literal; ties go to the smaller variable, positive first."""

    _scored = [_u for _u, _s in strategy.scores.items() if _s]
    _counts: Counter[int] = Counter()
    for _monomial in monomials:
        for _ext_var, _ in _monomial.factors():
            _base = _ext_var.base
            if not qbf.is_existential(_base):
                continue

            if all(qbf.is_left_of(_base, _u) for _u in _scored):
                _counts[-_base if _ext_var.twin else _base] += 1

    if not _counts:
        raise GameError(
            "No existential literal of the high-degree monomials is left of every scored universal!"
        )

    return min(_counts, key=lambda _l: (-_counts[_l], abs(_l), _l < 0))


def _reduce(qbf: Qbf, strategy: ScoreStrategy, degree: int, budget: int) -> ScoreStrategy:
    _strategy = _simplify(strategy)
    _n = len(qbf.existentials)
    if _n <= degree:
        return _strategy

    _high = _high_monomials(qbf, _strategy, degree)
    if not _high:
        return _strategy

    _shrink = Fraction(2 * _n - degree, 2 * _n)
    if 1 <= len(_high) * _shrink**budget:
        raise HypothesisViolatedError(count=len(_high), bound=(1 / _shrink) ** budget)

    _literal = _pick_literal(qbf, _strategy, _high)
    _var = abs(_literal)
    _true_bit = 1 if 0 < _literal else 0
    logger.debug(
        f"Splitting on literal {_literal}: {len(_high)} monomials above degree {degree}, "
        f"budget {budget}."
    )

    # The literal occurs in many high monomials, so they vanish where it is false.
    _on_false = _reduce(
        restrict_qbf(qbf, _var, 1 - _true_bit),
        restrict_strategy(_strategy, _var, 1 - _true_bit),
        degree,
        budget - 1,
    )
    _on_true = _reduce(
        restrict_qbf(qbf, _var, _true_bit),
        restrict_strategy(_strategy, _var, _true_bit),
        degree,
        budget,
    )
    return _combine(qbf, -_literal, _on_false, _on_true)


@validate_call(config={"arbitrary_types_allowed": True})
def qdeg_reduce(
    qbf: Qbf,
    strategy: ScoreStrategy,
    degree: int,
    budget: int,
    max_vars: int | None = None,
) -> ScoreStrategy:
    """Lower the existential degree of a winning strategy to at most `degree + budget`.

    With `n` existential variables, the strategy must have fewer than `(1 - degree / 2n)^-budget`
    monomials of existential degree above `degree`. A literal occurring in many of them is split
    on: where it is false those monomials vanish and one unit of budget is spent, where it is true
    the degree drops by one. The two reduced halves are merged with `combine`.

    Args:
        qbf      (Qbf          , required): Formula.
        strategy (ScoreStrategy, required): Variant-1 winning strategy.
        degree   (int          , required): Target degree `d >= 0`.
        budget   (int          , required): Extra degree `b >= 0`.
        max_vars (int | None   , optional): Variable cap; settings value when None.

    Raises:
        NotWinningError        : If the strategy does not win in variant 1.
        HypothesisViolatedError: If there are too many monomials above `degree`.
        GameError              : If no splitting literal is left of every scored universal.

    Returns:
        ScoreStrategy: Variant-1 winning strategy of existential degree at most `degree + budget`.
    """

    if (degree < 0) or (budget < 0):
        raise ValueError(f"`degree` and `budget` must be >= 0, got {degree} and {budget}!")

    _check = check_winning(qbf, strategy, VariantEnum.POSITIVE, max_vars=max_vars)
    if not _check.winning:
        raise NotWinningError(counterexample=_check.counterexample)

    _result = _reduce(qbf, strategy, degree, budget)
    logger.info(
        f"Reduced existential degree from {strategy.qdeg(qbf)} to {_result.qdeg(qbf)} "
        f"(target {degree} + {budget})."
    )
    return _result


@validate_call(config={"arbitrary_types_allowed": True})
def size_degree_reduce(
    qbf: Qbf, strategy: ScoreStrategy, max_vars: int | None = None
) -> tuple[ScoreStrategy, int]:
    """Apply `qdeg_reduce` with `degree = budget = t` for the first `t` the hypothesis admits.

    For a strategy of size `s` this lands at `t = O(sqrt(n log s))`.

    Args:
        qbf      (Qbf          , required): Formula.
        strategy (ScoreStrategy, required): Variant-1 winning strategy.
        max_vars (int | None   , optional): Variable cap; settings value when None.

    Raises:
        NotWinningError: If the strategy does not win in variant 1.

    Returns:
        tuple[ScoreStrategy, int]: Reduced strategy of existential degree at most `2t`, and `t`.
    """

    _check = check_winning(qbf, strategy, VariantEnum.POSITIVE, max_vars=max_vars)
    if not _check.winning:
        raise NotWinningError(counterexample=_check.counterexample)

    _n = len(qbf.existentials)
    for _t in range(_n):
        try:
            return _reduce(qbf, strategy, _t, _t), _t
        except GameError as err:
            logger.debug(f"Degree {_t} rejected: {err}")

    return _simplify(strategy), _n


__all__ = [
    "combine_on_literal",
    "combine",
    "qdeg_reduce",
    "size_degree_reduce",
]
