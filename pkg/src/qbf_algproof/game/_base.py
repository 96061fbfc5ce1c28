import logging
from fractions import Fraction
from collections.abc import Mapping

from pydantic import BaseModel, ConfigDict, Field, validate_call

from ..constants import VariantEnum
from ..exceptions import NotWinningEvalError
from .._base import iter_assignments
from ..config import resolve_cap
from ..validator import check_cap
from ..poly import Polynomial, indicator
from ..qbf import Qbf, EvalStrategy, iter_models, satisfying_play
from ..ideal import literal_reduce
from ..cert import Certificate, existential_degree, check_side_condition

logger = logging.getLogger(__name__)


class ScoreStrategy(BaseModel):
    """Universal strategy of the score game: one score polynomial `s_u` per universal `u`."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    scores: dict[int, Polynomial] = Field(default_factory=dict)

    @property
    def size(self) -> int:
        """Monomial count over all score polynomials."""

        return sum(len(_s) for _s in self.scores.values())

    def qdeg(self, qbf: Qbf) -> int:
        return existential_degree(qbf, self.scores.values())

    def score(self, universal: int) -> Polynomial:
        return self.scores.get(universal, Polynomial.zero())

    def final_score(self) -> Polynomial:
        """`sum(s_u (2u - 1))` as a polynomial."""

        _total = Polynomial.zero()
        for _u, _s in self.scores.items():
            _total = _total + _s * (2 * Polynomial.var(_u) - 1)

        return _total

    def check(self, qbf: Qbf) -> None:
        """Reject score polynomials that read variables not strictly left of their universal."""

        for _u, _s in self.scores.items():
            check_side_condition(qbf, _u, _s)

        return


class WinCheck(BaseModel):
    """Outcome of a winning check; `min_score` is the smallest total score over the models."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    winning: bool
    counterexample: dict[int, int] | None = Field(default=None)
    min_score: Fraction | None = Field(default=None)
    models: int = Field(default=0, ge=0)


def _total_score(strategy: ScoreStrategy, assignment: Mapping[int, int]) -> Fraction:
    _total = Fraction(0)
    for _u, _s in strategy.scores.items():
        _value = _s.evaluate(assignment)
        _total += _value if assignment[_u] else -_value

    return _total


@validate_call(config={"arbitrary_types_allowed": True})
def total_score(strategy: ScoreStrategy, assignment: dict[int, int]) -> Fraction:
    """Points earned by the universal player on a total assignment: `sum(s_u(a) (2a(u) - 1))`.

    Args:
        strategy   (ScoreStrategy , required): Score strategy.
        assignment (dict[int, int], required): Total assignment.

    Raises:
        UnassignedVariableError: If a variable read by the strategy has no value.

    Returns:
        Fraction: Total score.
    """

    return _total_score(strategy, assignment)


@validate_call(config={"arbitrary_types_allowed": True})
def check_winning(
    qbf: Qbf,
    strategy: ScoreStrategy,
    variant: VariantEnum | int = VariantEnum.POSITIVE,
    max_vars: int | None = None,
) -> WinCheck:
    """Check a score strategy against every play of the existential player.

    Only assignments satisfying the matrix need a score condition: variant 1 asks for a strictly
    positive total score, variant 2 for a total score of exactly 1.

    Args:
        qbf      (Qbf               , required): Formula.
        strategy (ScoreStrategy     , required): Score strategy.
        variant  (VariantEnum | int , optional): 1 or 2. Defaults to 1.
        max_vars (int | None        , optional): Variable cap; settings value when None.

    Raises:
        TooLargeError             : If the formula has more variables than the cap.
        SideConditionViolatedError: If a score polynomial reads a variable not left of its universal.

    Returns:
        WinCheck: Verdict with the first violating assignment and the minimum model score.
    """

    variant = VariantEnum(int(variant))
    check_cap("variables", qbf.num_vars, resolve_cap(max_vars, "max_vars"))
    strategy.check(qbf)

    _min: Fraction | None = None
    _count = 0
    for _model in iter_models(qbf):
        _count += 1
        _score = _total_score(strategy, _model)
        _min = _score if (_min is None) or (_score < _min) else _min
        if variant == VariantEnum.POSITIVE:
            _ok = 0 < _score
        else:
            _ok = _score == 1

        if not _ok:
            logger.debug(f"Strategy loses on {_model} with score {_score}.")
            return WinCheck(winning=False, counterexample=_model, min_score=_min, models=_count)

    return WinCheck(winning=True, min_score=_min, models=_count)


def eval_counterexample(qbf: Qbf, tau: EvalStrategy) -> dict[int, int] | None:
    """A play following `tau` that satisfies the matrix, or None when `tau` wins."""

    return satisfying_play(qbf, tau.decide)


@validate_call(config={"arbitrary_types_allowed": True})
def strategy_from_eval(
    qbf: Qbf, tau: EvalStrategy, max_table_vars: int | None = None
) -> ScoreStrategy:
    """Turn a winning evaluation-game strategy into a variant-2 winning score strategy.

    With `S` the running score polynomial of the universals already played and `T_u` the sum of
    the indicator monomials of the rows where `tau` plays 1, each universal scores
    `s_u = (1 - 2 T_u)(1 - S)`. Following `tau` doubles the deficit `1 - S`; deviating from it
    brings `S` to 1, where it stays.

    Args:
        qbf            (Qbf         , required): Formula.
        tau            (EvalStrategy, required): Universal strategy of the evaluation game.
        max_table_vars (int | None  , optional): Cap on the variable count; settings value when None.

    Raises:
        TooLargeError      : If the formula has more variables than the cap.
        NotWinningEvalError: If some play following `tau` satisfies the matrix.

    Returns:
        ScoreStrategy: Strategy with literal-reduced score polynomials.
    """

    check_cap("variables", qbf.num_vars, resolve_cap(max_table_vars, "max_table_vars"))
    _counterexample = eval_counterexample(qbf, tau)
    if _counterexample is not None:
        raise NotWinningEvalError(assignment=_counterexample)

    _running = Polynomial.zero()
    _scores: dict[int, Polynomial] = {}
    for _u in qbf.universals:
        _domain = tuple(qbf.left_of(_u))
        _table = Polynomial.zero()
        for _row in iter_assignments(_domain):
            if tau.decide(_u, _row):
                _table = _table + Polynomial.from_monomial(indicator(_row))

        _score, _ = literal_reduce((1 - 2 * _table) * (1 - _running))
        if _score:
            _scores[_u] = _score

        _running = _running + _score * (2 * Polynomial.var(_u) - 1)

    _strategy = ScoreStrategy(scores=_scores)
    logger.debug(f"Built score strategy of size {_strategy.size} from a decision table.")
    return _strategy


@validate_call(config={"arbitrary_types_allowed": True})
def strategy_from_certificate(cert: Certificate) -> ScoreStrategy:
    """Score strategy `s_u := q_u` of a certificate."""

    return ScoreStrategy(scores={_u: _q for _u, _q in cert.universal.items() if _q})


def restrict_strategy(strategy: ScoreStrategy, var: int, bit: int) -> ScoreStrategy:
    _scores = {_u: _s.restrict(var, bit) for _u, _s in strategy.scores.items()}
    return ScoreStrategy(scores={_u: _s for _u, _s in _scores.items() if _s})


__all__ = [
    "EvalStrategy",
    "ScoreStrategy",
    "WinCheck",
    "total_score",
    "check_winning",
    "eval_counterexample",
    "strategy_from_eval",
    "strategy_from_certificate",
    "restrict_strategy",
]
