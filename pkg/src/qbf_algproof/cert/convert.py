import logging
from math import isqrt
from fractions import Fraction

from pydantic import validate_call

from ..constants import AxiomKindEnum, ProofSystemEnum, MAX_FOUR_SQUARES
from ..exceptions import NotQSAError, NotQSOSError
from .._base import iter_assignments
from ..config import resolve_cap
from ..validator import check_cap
from ..poly import Monomial, Polynomial, indicator
from ..qbf import Qbf, AxiomId, restrict_qbf_with_map
from ..ideal import Multipliers, express_in_ideal
from ._base import Certificate

logger = logging.getLogger(__name__)


@validate_call(config={"arbitrary_types_allowed": True})
def restrict_certificate(qbf: Qbf, cert: Certificate, var: int, bit: int) -> Certificate:
    """Restrict every polynomial of a certificate by `var := bit` and re-key the clause multipliers.

    Multipliers of clauses satisfied by the restriction are dropped (their clause monomial
    vanishes), as are the Boolean and twin multipliers of `var`.

    Args:
        qbf  (Qbf        , required): Formula the certificate refutes.
        cert (Certificate, required): Certificate for `qbf`.
        var  (int        , required): Existential variable.
        bit  (int        , required): 0 or 1.

    Raises:
        NotExistentialError: If `var` is not existential in `qbf`.

    Returns:
        Certificate: Certificate for `restrict_qbf(qbf, var, bit)`.
    """

    _, _index_map = restrict_qbf_with_map(qbf, var, bit)
    _acc = Multipliers()
    for _axiom_id, _q in cert.multipliers.items():
        if _axiom_id.kind == AxiomKindEnum.CLAUSE:
            if _axiom_id.index not in _index_map:
                continue

            _new_id = AxiomId.clause(_index_map[_axiom_id.index])
        elif _axiom_id.index == var:
            continue
        else:
            _new_id = _axiom_id

        _acc.add(_new_id, _q.restrict(var, bit))

    _universal = {_u: _q.restrict(var, bit) for _u, _q in cert.universal.items()}
    _universal = {_u: _q for _u, _q in _universal.items() if _q}
    return Certificate(
        system=cert.system,
        multipliers=_acc.freeze(),
        universal=_universal,
        remainder=None if cert.remainder is None else cert.remainder.restrict(var, bit),
        squares=tuple(
            _s for _s in (_s.restrict(var, bit) for _s in cert.squares) if _s
        ),
    )


@validate_call
def four_squares(n: int) -> tuple[int, int, int, int]:
    """Lexicographically largest `s1 >= s2 >= s3 >= s4 >= 0` with `s1^2 + s2^2 + s3^2 + s4^2 = n`.

    Args:
        n (int, required): Non-negative integer.

    Raises:
        ValueError   : If `n` is negative.
        TooLargeError: If `n` exceeds the bounded search range.

    Returns:
        tuple[int, int, int, int]: The four roots.
    """

    if n < 0:
        raise ValueError(f"`n` argument value '{n}' is negative!")

    check_cap("four-square input", n, MAX_FOUR_SQUARES)
    for _s1 in range(isqrt(n), -1, -1):
        _r1 = n - _s1 * _s1
        for _s2 in range(min(_s1, isqrt(_r1)), -1, -1):
            _r2 = _r1 - _s2 * _s2
            for _s3 in range(min(_s2, isqrt(_r2)), -1, -1):
                _r3 = _r2 - _s3 * _s3
                _s4 = isqrt(_r3)
                if (_s4 * _s4 == _r3) and (_s4 <= _s3):
                    return (_s1, _s2, _s3, _s4)

    raise RuntimeError(f"No four-square decomposition found for {n}!")  # pragma: no cover


def weighted_square(weight: Fraction, base: Polynomial) -> list[Polynomial]:
    """Polynomials whose squares sum to `weight * base^2`, for `weight >= 0`."""

    if weight < 0:
        raise ValueError(f"Square weight '{weight}' is negative!")

    _a, _b = weight.numerator, weight.denominator
    return [
        base.scale(Fraction(_s, _b)) for _s in four_squares(_a * _b) if _s
    ]


def _lift_to_square(
    monomial: Monomial, coef: Fraction, acc: Multipliers
) -> Monomial:
    """Rewrite `coef * m` as `coef * m'^2` modulo Boolean and twin axioms; returns `m'`."""

    _current = monomial
    for _var, _exp in monomial.factors():
        _rest = _current / Monomial.of(_var, _exp)
        _bool_id = AxiomId.boolean(_var.base)
        _twin_id = AxiomId.twin(_var.base)
        _diff = Polynomial.var(_var.base, True) - Polynomial.var(_var.base)
        for _j in range(_exp, 2 * _exp):
            # e^(j+1) - e^j = e^(j-1) (e^2 - e)
            _factor = _rest * Monomial.of(_var, _j - 1)
            acc.add_term(_bool_id, _factor, -coef)
            if _var.twin:
                acc.add(_twin_id, _diff.mul_monomial(_factor, -coef))

        _current = _rest * Monomial.of(_var, 2 * _exp)

    return monomial


@validate_call(config={"arbitrary_types_allowed": True})
def qsa_to_qsos(cert: Certificate) -> Certificate:
    """Turn a QSA certificate into a QSOS certificate with the same universal multipliers.

    Each remainder term `(a/b) m` is first lifted to `(a/b) m^2` through Boolean-axiom (and, for
    twins, twin-axiom) multiples, then written as a sum of at most four squares `((s_i/b) m)^2`
    with `s_1^2 + ... + s_4^2 = a b`.

    Args:
        cert (Certificate, required): QSA certificate.

    Raises:
        NotQSAError: If `cert` is not a QSA certificate.

    Returns:
        Certificate: QSOS certificate; qsize and qdeg are unchanged.
    """

    if cert.system != ProofSystemEnum.QSA:
        raise NotQSAError(f"Expected a QSA certificate, got {cert.system.value}!")

    _acc = Multipliers(cert.multipliers)
    _squares: list[Polynomial] = []
    _remainder = cert.remainder if cert.remainder is not None else Polynomial.zero()
    for _monomial, _coef in _remainder.sorted_terms():
        if _coef < 0:
            raise NotQSAError(f"Remainder coefficient {_coef} on {_monomial} is negative!")

        _root = _lift_to_square(_monomial, _coef, _acc)
        _squares.extend(weighted_square(_coef, Polynomial.from_monomial(_root)))

    logger.debug(f"Wrote {len(_remainder)} remainder terms as {len(_squares)} squares.")
    return Certificate(
        system=ProofSystemEnum.QSOS,
        multipliers=_acc.freeze(),
        universal=dict(cert.universal),
        squares=tuple(_squares),
    )


@validate_call(config={"arbitrary_types_allowed": True})
def qsos_to_qsa(qbf: Qbf, cert: Certificate, max_vars: int | None = None) -> Certificate:
    """Turn a QSOS certificate into a QSA certificate with the same universal multipliers.

    The square sum `q` is replaced by its pointwise expansion `sum(q(a) chi_a)` over the
    assignments of its variables; the difference vanishes on every Boolean point and is absorbed
    into the axiom multipliers through `express_in_ideal`.

    Args:
        qbf      (Qbf        , required): Formula.
        cert     (Certificate, required): QSOS certificate.
        max_vars (int | None , optional): Cap on the variables of `q`; settings value when None.

    Raises:
        NotQSOSError : If `cert` is not a QSOS certificate.
        TooLargeError: If `q` has more variables than the cap.

    Returns:
        Certificate: QSA certificate; the size may grow exponentially.
    """

    if cert.system != ProofSystemEnum.QSOS:
        raise NotQSOSError(f"Expected a QSOS certificate, got {cert.system.value}!")

    _q = cert.remainder_poly()
    _vars = sorted(_q.variables)
    check_cap("remainder variables", len(_vars), resolve_cap(max_vars, "max_vars"))

    _terms: dict[Monomial, Fraction] = {}
    for _alpha in iter_assignments(_vars):
        _value = _q.evaluate(_alpha)
        if _value:
            _terms[indicator(_alpha)] = _value

    _remainder = Polynomial(_terms)
    _acc = Multipliers(cert.multipliers)
    _acc.merge(express_in_ideal(_q - _remainder, qbf))
    return Certificate(
        system=ProofSystemEnum.QSA,
        multipliers=_acc.freeze(),
        universal=dict(cert.universal),
        remainder=_remainder,
    )


__all__ = [
    "restrict_certificate",
    "four_squares",
    "weighted_square",
    "qsa_to_qsos",
    "qsos_to_qsa",
]
