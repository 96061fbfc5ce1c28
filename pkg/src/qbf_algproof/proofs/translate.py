import logging
from math import isqrt
from fractions import Fraction

from pydantic import validate_call

from ..constants import AxiomKindEnum, ProofSystemEnum, QuResRuleEnum, WResRuleEnum, QpcRuleEnum
from ..exceptions import NotQSAError, ProofError, RemainderShapeViolatedError
from .._base import common_denominator
from ..poly import ExtVar, Monomial, Polynomial, ONE
from ..qbf import Qbf, AxiomId, clause_monomial
from ..ideal import Multipliers
from ..cert import Certificate, verify, weighted_square
from ._base import (
    WClause,
    wclause,
    rule_delta,
    QuResProof,
    WResProof,
    WResStep,
    QpcProof,
    QpcStep,
)
from .qures import check_qures, derive_qures
from .wres import check_wres, wres_configuration
from .qpc import check_qpc, derive_qpc

logger = logging.getLogger(__name__)


_RawStep = tuple[WResRuleEnum, Fraction, WClause, int | None]


def _add_poly(polys: dict[int, Polynomial], key: int, poly: Polynomial) -> None:
    _sum = polys.get(key, Polynomial.zero()) + poly
    if _sum:
        polys[key] = _sum
    else:
        polys.pop(key, None)


def _bump(terms: dict[Monomial, Fraction], monomial: Monomial, coef: Fraction) -> None:
    _value = terms.get(monomial, 0) + coef
    if _value:
        terms[monomial] = _value
    else:
        terms.pop(monomial, None)


def _monomial_clause(monomial: Monomial) -> WClause:
    """The multiset clause `C` with `M(C) = monomial`: twins are positive literals."""

    _literals: list[int] = []
    for _var, _exp in monomial.factors():
        _literals.extend([_var.base if _var.twin else -_var.base] * _exp)

    return wclause(_literals)


def _integral(raw: list[_RawStep]) -> WResProof:
    _scale = common_denominator(_w for _, _w, _, _ in raw)
    return WResProof(
        steps=tuple(
            WResStep(rule=_rule, weight=int(_w * _scale), clause=_clause, literal=_literal)
            for _rule, _w, _clause, _literal in raw
            if _w
        )
    )


@validate_call(config={"arbitrary_types_allowed": True})
def wres_to_qsa(qbf: Qbf, proof: WResProof) -> Certificate:
    """Read a QSA certificate off a Q-w-Res refutation.

    The polynomial `-sum(w M(C))` of each configuration is tracked as axiom multiples: an axiom
    step adds a clause multiple, a cut a twin multiple of `M(C)`, an idempotence step a Boolean
    multiple and a reduction a `(1 - 2u)` multiple. Reducing a positive literal `u` reads
    `M(C v u) = M(C) ~u`, which needs the extra twin multiple `2w M(C)`. The final identity is
    divided by the weight of the empty clause; the other final clauses form the remainder.

    Args:
        qbf   (Qbf      , required): Formula.
        proof (WResProof, required): Q-w-Res refutation.

    Raises:
        InvalidStepError         : If a step is not applicable.
        FinalConfigViolationError: If the proof is not a refutation.

    Returns:
        Certificate: Verified QSA certificate with one universal monomial per reduction step
                        (fewer when reductions on the same clause merge).
    """

    check_wres(qbf, proof)
    _acc = Multipliers()
    _universal: dict[int, Polynomial] = {}
    for _step in proof.steps:
        _w = Fraction(_step.weight)
        _m = clause_monomial(_step.clause)
        _var = abs(_step.literal or 0)
        if _step.rule == WResRuleEnum.AXIOM:
            _acc.add_term(AxiomId.clause(qbf.clauses.index(_step.clause)), ONE, -_w)
        elif _step.rule == WResRuleEnum.CUT:
            _acc.add_term(AxiomId.twin(_var), _m, _w)
        elif _step.rule == WResRuleEnum.IDEM:
            _acc.add_term(AxiomId.boolean(_var), _m, _w)
            if 0 < (_step.literal or 0):
                # ~x^2 - ~x = (x^2 - x) + (~x - x)(x + ~x - 1)
                _diff = Polynomial.var(_var, True) - Polynomial.var(_var)
                _acc.add(AxiomId.twin(_var), _diff.mul_monomial(_m, _w))
        elif (_step.literal or 0) < 0:
            _add_poly(_universal, _var, Polynomial.from_monomial(_m, -_w))
        else:
            _add_poly(_universal, _var, Polynomial.from_monomial(_m, _w))
            _acc.add_term(AxiomId.twin(_var), _m, 2 * _w)

    _weights = wres_configuration(qbf, proof).weights
    _c = Fraction(_weights[()])
    _remainder = Polynomial(
        {clause_monomial(_clause): Fraction(_w) / _c for _clause, _w in _weights.items() if _clause}
    )
    _scaled = Multipliers()
    _scaled.merge(_acc, 1 / _c)
    _cert = Certificate(
        system=ProofSystemEnum.QSA,
        multipliers=_scaled.freeze(),
        universal={_u: _q.scale(1 / _c) for _u, _q in sorted(_universal.items())},
        remainder=_remainder,
    )
    _measures = verify(qbf, _cert)
    logger.info(f"Translated {len(proof.steps)}-step Q-w-Res proof into QSA: {_measures}")
    return _cert


def _normalize_clause_term(
    monomial: Monomial,
    coef: Fraction,
    clause: Monomial,
    acc: Multipliers,
    remainder: dict[Monomial, Fraction],
) -> Fraction:
    """Rewrite `coef * monomial * M(C)` as a scalar multiple of `M(C)`; returns the scalar.

    Positive terms move into the remainder. A negative term peels one factor `y` at a time with
    `y P = P - ~y P + P (y + ~y - 1)`, sending `-coef ~y P` to the remainder.
    """

    if monomial.is_one:
        return coef

    if 0 < coef:
        _bump(remainder, monomial * clause, coef)
        return Fraction(0)

    _factors = [_var for _var, _exp in monomial.factors() for _ in range(_exp)]
    while _factors:
        _y = _factors.pop()
        _rest = Monomial((_var, 1) for _var in _factors) * clause
        _bump(remainder, _rest * Monomial.of(_y.bar), -coef)
        acc.add_term(AxiomId.twin(_y.base), _rest, coef)

    return coef


@validate_call(config={"arbitrary_types_allowed": True})
def qsa_to_wres(qbf: Qbf, cert: Certificate) -> WResProof:
    """Turn a QSA certificate into a Q-w-Res refutation with one reduction per universal monomial.

    Clause multipliers are first made scalar (see `_normalize_clause_term`). Then every clause
    scalar becomes an axiom step, every Boolean term `a m (x^2 - x)` an idempotence step on
    `~x`, every twin term `a m (x + ~x - 1)` a cut on `x`, and every universal term
    `a m (1 - 2u)` a reduction of `~u` with weight `-a`, where `m = M(C)`. All weights are
    finally scaled to integers by their common denominator.

    Args:
        qbf  (Qbf        , required): Formula.
        cert (Certificate, required): QSA certificate.

    Raises:
        NotQSAError      : If `cert` is not a QSA certificate.
        CertificateError : If `verify` rejects the certificate.

    Returns:
        WResProof: Accepted Q-w-Res refutation with `qsize(cert)` reduction steps.
    """

    if cert.system != ProofSystemEnum.QSA:
        raise NotQSAError(f"Expected a QSA certificate, got {cert.system.value}!")

    verify(qbf, cert)
    _acc = Multipliers()
    _remainder: dict[Monomial, Fraction] = dict(cert.remainder_poly().terms)
    _scalars: dict[int, Fraction] = {}
    for _axiom_id, _q in cert.multipliers.items():
        if _axiom_id.kind != AxiomKindEnum.CLAUSE:
            _acc.add(_axiom_id, _q)
            continue

        _clause = clause_monomial(qbf.clauses[_axiom_id.index])
        for _monomial, _coef in _q.sorted_terms():
            _scalars[_axiom_id.index] = _scalars.get(
                _axiom_id.index, Fraction(0)
            ) + _normalize_clause_term(_monomial, _coef, _clause, _acc, _remainder)

    _raw: list[_RawStep] = []
    for _index in sorted(_scalars):
        _raw.append((WResRuleEnum.AXIOM, -_scalars[_index], qbf.clauses[_index], None))

    for _axiom_id, _q in _acc.freeze().items():
        _rule = WResRuleEnum.IDEM if _axiom_id.kind == AxiomKindEnum.BOOL else WResRuleEnum.CUT
        _literal = -_axiom_id.index if _rule == WResRuleEnum.IDEM else _axiom_id.index
        for _monomial, _coef in _q.sorted_terms():
            _raw.append((_rule, _coef, _monomial_clause(_monomial), _literal))

    for _u, _q in sorted(cert.universal.items()):
        for _monomial, _coef in _q.sorted_terms():
            _raw.append((WResRuleEnum.RED, -_coef, _monomial_clause(_monomial), -_u))

    logger.debug(f"Final configuration keeps {len(_remainder)} clauses besides the empty one.")
    _proof = _integral(_raw)
    _measures = check_wres(qbf, _proof)
    logger.info(f"Translated QSA certificate into Q-w-Res: {_measures}")
    return _proof


@validate_call(config={"arbitrary_types_allowed": True})
def qures_to_wres(qbf: Qbf, proof: QuResProof) -> WResProof:
    """Simulate a QU-Res refutation in Q-w-Res with the same number of reductions.

    Resolution of `C v D v x` with `C v E v ~x` first weakens both premises to the full
    resolvent (a weakening by `v` is a backwards cut, leaving `(C v ~v)` behind) and then cuts
    on `x`. Weights are assigned inductively: an axiom gets 1, a reduction keeps half of its
    premise's weight `w` and derives the conclusion with `w/4`, a weakening or cut moves half of
    the available weight. At most `n` steps are emitted per QU-Res step.

    Args:
        qbf   (Qbf       , required): Formula.
        proof (QuResProof, required): QU-Res refutation.

    Raises:
        InvalidStepError: If `check_qures` rejects the proof.

    Returns:
        WResProof: Accepted Q-w-Res refutation.
    """

    check_qures(qbf, proof)
    _derived = derive_qures(qbf, proof)
    _weights: dict[WClause, Fraction] = {}
    _raw: list[_RawStep] = []

    def _apply(rule: WResRuleEnum, weight: Fraction, clause: WClause, literal: int | None) -> None:
        _raw.append((rule, weight, clause, literal))
        for _clause, _delta in rule_delta(rule, weight, clause, literal):
            _weights[_clause] = _weights.get(_clause, Fraction(0)) + _delta

    for _index, _step in enumerate(proof.steps):
        _clause = _derived[_index]
        if _step.rule == QuResRuleEnum.AXIOM:
            _apply(WResRuleEnum.AXIOM, Fraction(1), _clause, None)
            continue

        _var = _step.var or 0
        if _step.rule == QuResRuleEnum.REDUCE:
            _premise = _derived[_step.premises[0]]
            (_literal,) = [_l for _l in _premise if abs(_l) == _var]
            _apply(WResRuleEnum.RED, _weights[_premise] / 4, _clause, _literal)
            continue

        for _premise_index in _step.premises:
            _current = _derived[_premise_index]
            for _literal in _clause:
                if _literal in _current:
                    continue

                _apply(WResRuleEnum.CUT, -_weights[_current] / 2, _current, abs(_literal))
                _current = wclause(_current + (_literal,))

        _w = min(_weights[wclause(_clause + (_var,))], _weights[wclause(_clause + (-_var,))])
        _apply(WResRuleEnum.CUT, _w / 2, _clause, _var)

    _result = _integral(_raw)
    _measures = check_wres(qbf, _result)
    logger.info(f"Translated {len(proof.steps)}-step QU-Res proof into Q-w-Res: {_measures}")
    return _result


@validate_call(config={"arbitrary_types_allowed": True})
def qns_to_qpc(qbf: Qbf, cert: Certificate) -> QpcProof:
    """Turn a QNS certificate into a Q-PC refutation.

    First `sum(q_p p) = -1 - sum(q_u (1 - 2u))` is derived term by term. Then the universals are
    reduced from the innermost outwards: the reductions at `u = 1` and `u = 0` are averaged,
    which cancels `q_u (1 - 2u)`. A final scaling by -1 leaves 1.

    Args:
        qbf  (Qbf        , required): Formula.
        cert (Certificate, required): QNS certificate.

    Raises:
        RemainderShapeViolatedError: If `cert` is not a QNS certificate.
        CertificateError           : If `verify` rejects the certificate.

    Returns:
        QpcProof: Accepted Q-PC refutation.
    """

    if cert.system != ProofSystemEnum.QNS:
        raise RemainderShapeViolatedError(f"Expected a QNS certificate, got {cert.system.value}!")

    verify(qbf, cert)
    _steps: list[QpcStep] = []

    def _push(step: QpcStep) -> int:
        _steps.append(step)
        return len(_steps) - 1

    _acc: int | None = None
    for _axiom_id, _q in cert.multipliers.items():
        _axiom = _push(QpcStep.ax(_axiom_id))
        for _monomial, _coef in _q.sorted_terms():
            _current = _axiom
            for _var, _exp in _monomial.factors():
                for _ in range(_exp):
                    _current = _push(QpcStep.mul(_current, _var))

            if _acc is None:
                _acc = _current if _coef == 1 else _push(QpcStep.scale(_current, _coef))
            else:
                _acc = _push(QpcStep.lin(_acc, _current, 1, _coef))

    if _acc is None:
        raise ProofError("Certificate has no axiom multipliers to derive from!")

    for _u in reversed(qbf.universals):
        if not cert.universal.get(_u):
            continue

        _one = _push(QpcStep.red(_acc, _u, 1))
        _zero = _push(QpcStep.red(_acc, _u, 0))
        _acc = _push(QpcStep.lin(_one, _zero, Fraction(1, 2), Fraction(1, 2)))

    _push(QpcStep.scale(_acc, -1))
    _proof = QpcProof(steps=tuple(_steps))
    _measures = check_qpc(qbf, _proof)
    logger.info(f"Translated QNS certificate into Q-PC: {_measures}")
    return _proof


class _NegSquare:
    """`-p^2` written as axiom multiples, `(1 - 2u)` multiples and non-negatively weighted squares."""

    def __init__(self) -> None:
        self.multipliers = Multipliers()
        self.universal: dict[int, Polynomial] = {}
        self.squares: list[tuple[Fraction, Polynomial]] = []

    def add(self, other: "_NegSquare", factor: Fraction) -> None:
        self.multipliers.merge(other.multipliers, factor)
        for _u, _q in other.universal.items():
            _add_poly(self.universal, _u, _q.scale(factor))

        self.squares.extend((_w * factor, _s) for _w, _s in other.squares)


def _split_universal(
    p: Polynomial, universal: int
) -> tuple[Polynomial, Polynomial, Polynomial, Polynomial]:
    """`(p0, p1, a, b)` with `p = p0 + p1 u + a (u^2 - u) + b (u + ~u - 1)` and `p0, p1` free of `u`."""

    _pos, _neg = ExtVar(universal), ExtVar(universal, True)
    _low: dict[Monomial, Fraction] = {}
    _alpha: dict[Monomial, Fraction] = {}
    _beta: dict[Monomial, Fraction] = {}
    _pending = list(p.terms.items())
    while _pending:
        _monomial, _coef = _pending.pop()
        if _monomial.exponent(_neg):
            # ~u = (1 - u) + (u + ~u - 1)
            _lower = _monomial / Monomial.of(_neg)
            _bump(_beta, _lower, _coef)
            _pending.append((_lower, _coef))
            _pending.append((_lower * Monomial.of(_pos), -_coef))
        elif 2 <= _monomial.exponent(_pos):
            # u^a = u^(a-1) + u^(a-2) (u^2 - u)
            _lower = _monomial / Monomial.of(_pos)
            _bump(_alpha, _lower / Monomial.of(_pos), _coef)
            _pending.append((_lower, _coef))
        else:
            _bump(_low, _monomial, _coef)

    _linear = Polynomial(_low)
    _p0 = _linear.restrict(universal, 0)
    return _p0, _linear.restrict(universal, 1) - _p0, Polynomial(_alpha), Polynomial(_beta)


def _square_roots(weight: Fraction, base: Polynomial) -> list[Polynomial]:
    """Polynomials whose squares sum to `weight * base^2`; weights `r^2` and `2 r^2` stay short."""

    if (not weight) or (not base):
        return []

    _num = weight.numerator * weight.denominator
    _root = isqrt(_num)
    if _root * _root == _num:
        return [base.scale(Fraction(_root, weight.denominator))]

    _root = isqrt(_num // 2)
    if (_num % 2 == 0) and (_root * _root == _num // 2):
        return [base.scale(Fraction(_root, weight.denominator))] * 2

    return weighted_square(weight, base)


@validate_call(config={"arbitrary_types_allowed": True})
def sos_identity_residuals(
    p: Polynomial,
    q: Polynomial,
    var: int,
    universal: int,
    a: Fraction | int = 1,
    b: Fraction | int = 1,
) -> dict[str, Polynomial]:
    """Residuals of the four square identities used by `qpc_to_qsos`; all are zero.

    Args:
        p         (Polynomial     , required): First polynomial.
        q         (Polynomial     , required): Second polynomial.
        var       (int            , required): Multiplying variable `x`.
        universal (int            , required): Reduced variable `u`.
        a         (Fraction | int , optional): First sum coefficient. Defaults to 1.
        b         (Fraction | int , optional): Second sum coefficient. Defaults to 1.

    Returns:
        dict[str, Polynomial]: Residual per identity: 'sum', 'product', 'reduce_to_p' and
                                'reduce_to_p_plus_q'.
    """

    _a, _b = Fraction(a), Fraction(b)
    _x, _u = Polynomial.var(var), Polynomial.var(universal)
    _ap, _bq = p.scale(_a), q.scale(_b)
    _xp = _x * p
    _shift = (p + q * _u) ** 2
    _tail = -(q * q + 2 * p * q) * (1 - 2 * _u) + 2 * q * q * (_u * _u - _u)
    return {
        "sum": -((_ap + _bq) ** 2) - (-2 * _ap * _ap - 2 * _bq * _bq + (_ap - _bq) ** 2),
        "product": -(_xp**2) - (-(p * p) + (p - _xp) ** 2 + 2 * p * p * (_x - _x * _x)),
        "reduce_to_p": -(p * p) - (-2 * _shift + (p + q) ** 2 + _tail),
        "reduce_to_p_plus_q": -((p + q) ** 2) - (-2 * _shift + p * p + _tail),
    }


@validate_call(config={"arbitrary_types_allowed": True})
def qpc_to_qsos(qbf: Qbf, proof: QpcProof) -> Certificate:
    """Turn a Q-PC refutation into a QSOS certificate.

    For every derived `p_i` an expression of `-p_i^2` is maintained:

    - axiom `p`: `-p^2 = (-p) p`;
    - `a p + b q`: `-(ap + bq)^2 = 2a^2 (-p^2) + 2b^2 (-q^2) + (ap - bq)^2`;
    - `x p`: `-(xp)^2 = -p^2 + (p - xp)^2 - 2p^2 (x^2 - x)`, with a twin correction for `~x`;
    - `a p`: `a^2 (-p^2)`;
    - reduction of `P = p + qu` (modulo the axioms of `u`) to `p`:
      `-p^2 = -2(p + qu)^2 + (p + q)^2 - (q^2 + 2pq)(1 - 2u) + 2q^2 (u^2 - u)`, and to `p + q`
      the same with the squares `(p + q)^2` and `p^2` swapped.

    The last line is 1, so its expression `-1 = ...` is the certificate identity.

    Args:
        qbf   (Qbf     , required): Formula.
        proof (QpcProof, required): Q-PC refutation.

    Raises:
        InvalidStepError: If a step is not applicable.
        NotRefutedError : If the proof does not derive 1.

    Returns:
        Certificate: Verified QSOS certificate.
    """

    check_qpc(qbf, proof)
    _derived = derive_qpc(qbf, proof)
    _exprs: list[_NegSquare] = []
    for _index, _step in enumerate(proof.steps):
        _p = _derived[_index]
        _expr = _NegSquare()
        if _step.rule == QpcRuleEnum.AXIOM:
            _expr.multipliers.add(_step.axiom, -_p)
        elif _step.rule == QpcRuleEnum.LIN:
            _i, _k = _step.premises
            _a, _b = _step.coefs
            _expr.add(_exprs[_i], 2 * _a * _a)
            _expr.add(_exprs[_k], 2 * _b * _b)
            _expr.squares.append(
                (Fraction(1), _derived[_i].scale(_a) - _derived[_k].scale(_b))
            )
        elif _step.rule == QpcRuleEnum.SCALE:
            _expr.add(_exprs[_step.premises[0]], _step.coefs[0] ** 2)
        elif _step.rule == QpcRuleEnum.MUL:
            _premise = _derived[_step.premises[0]]
            _var = _step.var or 0
            _sq = _premise * _premise
            _expr.add(_exprs[_step.premises[0]], Fraction(1))
            _expr.squares.append((Fraction(1), _premise - _p))
            _expr.multipliers.add(AxiomId.boolean(_var), _sq, Fraction(-2))
            if _step.twin:
                _diff = Polynomial.var(_var, True) - Polynomial.var(_var)
                _expr.multipliers.add(AxiomId.twin(_var), _sq * _diff, Fraction(-2))
        else:
            _u = _step.var or 0
            _premise = _derived[_step.premises[0]]
            _p0, _p1, _alpha, _beta = _split_universal(_premise, _u)
            _linear = _p0 + _p1 * Polynomial.var(_u)
            _factor = _linear + _premise
            _expr.add(_exprs[_step.premises[0]], Fraction(2))
            _expr.multipliers.add(AxiomId.boolean(_u), _factor * _alpha, Fraction(2))
            _expr.multipliers.add(AxiomId.twin(_u), _factor * _beta, Fraction(2))
            _expr.squares.append((Fraction(1), _p0 + _p1 if _step.bit == 0 else _p0))
            _add_poly(_expr.universal, _u, -(_p1 * _p1 + 2 * _p0 * _p1))
            _expr.multipliers.add(AxiomId.boolean(_u), _p1 * _p1, Fraction(2))

        _exprs.append(_expr)

    _final = _exprs[-1]
    _squares: list[Polynomial] = []
    for _w, _s in _final.squares:
        _squares.extend(_square_roots(_w, _s))

    _cert = Certificate(
        system=ProofSystemEnum.QSOS,
        multipliers=_final.multipliers.freeze(),
        universal=dict(sorted(_final.universal.items())),
        squares=tuple(_squares),
    )
    _measures = verify(qbf, _cert)
    logger.info(f"Translated {len(proof.steps)}-step Q-PC proof into QSOS: {_measures}")
    return _cert


__all__ = [
    "wres_to_qsa",
    "qsa_to_wres",
    "qures_to_wres",
    "qns_to_qpc",
    "sos_identity_residuals",
    "qpc_to_qsos",
]
