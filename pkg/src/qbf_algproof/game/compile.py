import logging
from fractions import Fraction
from collections.abc import Mapping

from pydantic import validate_call

from ..constants import ProofSystemEnum, VariantEnum, WarnEnum
from ..exceptions import NotWinningError, NotWinningEvalError, NoSatisfyingAssignmentError
from ..poly import Monomial, Polynomial, indicator, ind_rho
from ..qbf import Qbf, AxiomId, EvalStrategy, find_countermodel, iter_models
from ..ideal import AxiomMultipliers, Multipliers, express_in_ideal, twin_free_expand
from ..cert import Certificate, verify, qsa_to_qsos
from ._base import ScoreStrategy, _total_score, check_winning

logger = logging.getLogger(__name__)


def _negated(multipliers: Mapping[AxiomId, Polynomial]) -> AxiomMultipliers:
    _acc = Multipliers()
    _acc.merge(multipliers, factor=Fraction(-1))
    return _acc.freeze()


def _universal_sum(universal: Mapping[int, Polynomial]) -> Polynomial:
    _total = Polynomial.zero()
    for _u, _q in universal.items():
        _total = _total + _q * (1 - 2 * Polynomial.var(_u))

    return _total


@validate_call(config={"arbitrary_types_allowed": True})
def compile_v2_to_qns(
    qbf: Qbf, strategy: ScoreStrategy, max_vars: int | None = None
) -> Certificate:
    """Compile a variant-2 winning score strategy into a QNS certificate with `q_u = s_u`.

    `sum(s_u (1 - 2u)) + 1` is `1 - score`, which vanishes on every model of the matrix, so it is
    a combination of the encoding axioms; the negated combination gives the `q_p`.

    Args:
        qbf      (Qbf          , required): Formula.
        strategy (ScoreStrategy, required): Strategy winning in variant 2.
        max_vars (int | None   , optional): Variable cap for the winning check.

    Raises:
        NotWinningError: If the strategy does not win in variant 2.

    Returns:
        Certificate: Verified QNS certificate; qsize equals the strategy size.
    """

    _check = check_winning(qbf, strategy, VariantEnum.EXACT, max_vars=max_vars)
    if not _check.winning:
        raise NotWinningError(counterexample=_check.counterexample)

    _universal = dict(strategy.scores)
    _target = _universal_sum(_universal) + 1
    _cert = Certificate(
        system=ProofSystemEnum.QNS,
        multipliers=_negated(express_in_ideal(_target, qbf)),
        universal=_universal,
    )
    _measures = verify(qbf, _cert)
    logger.info(f"Compiled QNS certificate from a variant-2 strategy: {_measures}")
    return _cert


@validate_call(config={"arbitrary_types_allowed": True})
def compile_v1_to_qsa(
    qbf: Qbf,
    strategy: ScoreStrategy,
    qsos: bool = False,
    warn_mode: WarnEnum | str = WarnEnum.ERROR,
    max_vars: int | None = None,
) -> Certificate:
    """Compile a variant-1 winning score strategy into a QSA (or QSOS) certificate.

    With `c` half the smallest score over the models, `q_u = s_u / c` and the remainder is
    `sum((score(a) / c - 1) chi_a)` over the models `a`, every coefficient at least 1. The
    rest of the identity vanishes on the models and goes into the axiom multipliers.

    Args:
        qbf       (Qbf           , required): Formula.
        strategy  (ScoreStrategy , required): Strategy winning in variant 1.
        qsos      (bool          , optional): Convert the result with `qsa_to_qsos`. Defaults to False.
        warn_mode (WarnEnum | str, optional): Handling of a matrix without models: 'ERROR' raises,
                                                'ALWAYS'/'DEBUG'/'IGNORE' fall back to `q_u = s_u`
                                                with an empty remainder. Defaults to 'ERROR'.
        max_vars  (int | None    , optional): Variable cap for the winning check.

    Raises:
        NotWinningError            : If the strategy does not win in variant 1.
        NoSatisfyingAssignmentError: If the matrix has no model and `warn_mode` is 'ERROR'.

    Returns:
        Certificate: Verified QSA certificate, or QSOS when `qsos` is set.
    """

    if isinstance(warn_mode, str):
        warn_mode = WarnEnum(warn_mode.strip().upper())

    _check = check_winning(qbf, strategy, VariantEnum.POSITIVE, max_vars=max_vars)
    if not _check.winning:
        raise NotWinningError(counterexample=_check.counterexample)

    _remainder = Polynomial.zero()
    if _check.min_score is None:
        _message = "Matrix has no satisfying assignment, the remainder is empty."
        if warn_mode == WarnEnum.ERROR:
            raise NoSatisfyingAssignmentError(_message)
        elif warn_mode == WarnEnum.ALWAYS:
            logger.warning(_message)
        elif warn_mode == WarnEnum.DEBUG:
            logger.debug(_message)

        _universal = dict(strategy.scores)
    else:
        _c = _check.min_score / 2
        _universal = {_u: _s.scale(1 / _c) for _u, _s in strategy.scores.items()}
        _terms: dict[Monomial, Fraction] = {}
        for _model in iter_models(qbf):
            _terms[indicator(_model)] = _total_score(strategy, _model) / _c - 1

        _remainder = Polynomial(_terms)

    _target = _universal_sum(_universal) + _remainder + 1
    _cert = Certificate(
        system=ProofSystemEnum.QSA,
        multipliers=_negated(express_in_ideal(_target, qbf)),
        universal=_universal,
        remainder=_remainder,
    )
    _measures = verify(qbf, _cert)
    logger.info(f"Compiled QSA certificate from a variant-1 strategy: {_measures}")
    if qsos:
        _cert = qsa_to_qsos(_cert)
        verify(qbf, _cert)

    return _cert


@validate_call(config={"arbitrary_types_allowed": True})
def complete_from_countermodel(qbf: Qbf, tau: EvalStrategy | None = None) -> Certificate:
    """Build a QNS certificate from a winning strategy of the evaluation game.

    The game tree is pruned to the plays following `tau`: existential nodes branch, universal
    nodes follow `tau`, and a node becomes a leaf as soon as its partial assignment falsifies a
    clause. Bottom-up, `Ind(a)` is written as clause multiples plus `(1 - 2u)` multiples: a leaf
    is a multiple of the twin-free clause monomial, an existential node sums its children, and a
    universal node playing `b` uses `2 Ind(a, u=b) -+ Ind(a)(1 - 2u) = Ind(a)`. The root gives
    `1`; twin-free clause monomials are finally rewritten into `M(C)` through twin axioms.

    Args:
        qbf (Qbf                , required): Formula.
        tau (EvalStrategy | None, optional): Winning universal strategy; computed with
                                              `find_countermodel` when None.

    Raises:
        NotWinningEvalError: If some play following `tau` satisfies the matrix.

    Returns:
        Certificate: Verified QNS certificate.
    """

    if tau is None:
        tau = find_countermodel(qbf) or EvalStrategy.constant(qbf, 0)

    _prefix = qbf.prefix
    _clause_acc: dict[int, Polynomial] = {}
    _universal_acc: dict[int, Polynomial] = {}
    _nodes = 0

    def _falsified(assignment: dict[int, int]) -> int | None:
        for _index, _clause in enumerate(qbf.clauses):
            if all(
                (abs(_l) in assignment) and (assignment[abs(_l)] == (0 if 0 < _l else 1))
                for _l in _clause
            ):
                return _index

        return None

    def _build(assignment: dict[int, int], depth: int, weight: int) -> None:
        nonlocal _nodes
        _nodes += 1
        _index = _falsified(assignment)
        if _index is not None:
            _clause_vars = qbf.clause_vars(_index)
            _rest = {_v: _b for _v, _b in assignment.items() if _v not in _clause_vars}
            _clause_acc[_index] = _clause_acc.get(_index, Polynomial.zero()) + ind_rho(_rest).scale(
                weight
            )
            return

        if len(_prefix) <= depth:
            raise NotWinningEvalError(assignment=assignment)

        _, _var = _prefix[depth]
        if qbf.is_existential(_var):
            for _bit in (0, 1):
                _build({**assignment, _var: _bit}, depth + 1, weight)

            return

        _bit = tau.decide(_var, assignment)
        _sign = 1 if _bit else -1
        _universal_acc[_var] = _universal_acc.get(_var, Polynomial.zero()) + ind_rho(
            assignment
        ).scale(_sign * weight)
        _build({**assignment, _var: _bit}, depth + 1, 2 * weight)

    _build({}, 0, 1)

    _acc = Multipliers()
    for _index, _a in _clause_acc.items():
        _acc.add(AxiomId.clause(_index), _a, Fraction(-1))
        _clause = qbf.clauses[_index]
        _twins = Multipliers()
        twin_free_expand(
            Fraction(1), [-_l for _l in _clause if _l < 0], [_l for _l in _clause if 0 < _l], _twins
        )
        for _axiom_id, _x in _twins.freeze().items():
            _acc.add(_axiom_id, _a * _x)

    _universal = {_u: -_b for _u, _b in _universal_acc.items() if _b}
    _cert = Certificate(
        system=ProofSystemEnum.QNS, multipliers=_acc.freeze(), universal=_universal
    )
    _measures = verify(qbf, _cert)
    logger.info(f"Completed QNS certificate from a {_nodes}-node decision tree: {_measures}")
    return _cert


__all__ = [
    "compile_v2_to_qns",
    "compile_v1_to_qsa",
    "complete_from_countermodel",
]
