import logging
from collections.abc import Iterable

from pydantic import BaseModel, ConfigDict, Field, validate_call

from ..constants import ProofSystemEnum
from ..exceptions import (
    IdentityViolatedError,
    SideConditionViolatedError,
    RemainderShapeViolatedError,
)
from ..poly import Monomial, Polynomial
from ..qbf import Qbf, AxiomId, check_axiom_id
from ..qbf._base import _axiom_poly
from ..ideal import combine_axioms

logger = logging.getLogger(__name__)


class Certificate(BaseModel):
    """Refutation identity `sum(q_p p) + sum(q_u (1 - 2u)) + q + 1 = 0`.

    The remainder `q` is absent for QNS, the polynomial `remainder` for QSA and the sum of the
    squares of `squares` for QSOS. The constant 1 is implicit.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    system: ProofSystemEnum
    multipliers: dict[AxiomId, Polynomial] = Field(default_factory=dict)
    universal: dict[int, Polynomial] = Field(default_factory=dict)
    remainder: Polynomial | None = Field(default=None)
    squares: tuple[Polynomial, ...] = Field(default=())

    def remainder_poly(self) -> Polynomial:
        """Expanded remainder `q`."""

        if self.system == ProofSystemEnum.QSOS:
            _total = Polynomial.zero()
            for _square in self.squares:
                _total = _total + _square * _square

            return _total

        if self.remainder is None:
            return Polynomial.zero()

        return self.remainder

    def universal_part(self) -> Polynomial:
        """`sum(q_u (1 - 2u))`."""

        _total = Polynomial.zero()
        for _u, _q in self.universal.items():
            _total = _total + _q * (1 - 2 * Polynomial.var(_u))

        return _total


class Measures(BaseModel):
    """Size measures of an accepted certificate; `qdeg` counts existential occurrences with
    multiplicity, `qdeg_distinct` counts distinct existential bases."""

    model_config = ConfigDict(frozen=True)

    size: int = Field(..., ge=0)
    degree: int = Field(..., ge=0)
    qsize: int = Field(..., ge=0)
    qdeg: int = Field(..., ge=0)
    qdeg_distinct: int = Field(default=0, ge=0)


def monomial_existential_degree(qbf: Qbf, monomial: Monomial, distinct: bool = False) -> int:
    _degree = 0
    for _var, _exp in monomial.factors():
        if qbf.has_var(_var.base) and qbf.is_existential(_var.base):
            _degree += 1 if distinct else _exp

    return _degree


@validate_call(config={"arbitrary_types_allowed": True})
def existential_degree(
    qbf: Qbf, polys: Iterable[Polynomial], distinct: bool = False
) -> int:
    """Largest per-monomial count of existential variable occurrences (twins included).

    Args:
        qbf      (Qbf                 , required): Formula fixing the quantifier of each base.
        polys    (Iterable[Polynomial], required): Polynomials to scan.
        distinct (bool                , optional): Count distinct bases instead of occurrences.
                                                    Defaults to False.

    Returns:
        int: Existential degree, 0 when there are no monomials.
    """

    return max(
        (
            monomial_existential_degree(qbf, _monomial, distinct)
            for _poly in polys
            for _monomial in _poly.terms
        ),
        default=0,
    )


def check_side_condition(qbf: Qbf, universal: int, poly: Polynomial) -> None:
    """Every base of `poly` must be quantified strictly left of the universal `universal`."""

    if (not qbf.has_var(universal)) or (not qbf.is_universal(universal)):
        raise SideConditionViolatedError(universal=universal, offending=universal)

    _position = qbf.position(universal)
    for _var in sorted(poly.variables):
        if (not qbf.has_var(_var)) or (_position <= qbf.position(_var)):
            raise SideConditionViolatedError(universal=universal, offending=_var)

    return


def _check_shape(cert: Certificate) -> None:
    if cert.system == ProofSystemEnum.QNS:
        if cert.squares or ((cert.remainder is not None) and (not cert.remainder.is_zero)):
            raise RemainderShapeViolatedError("QNS certificates carry no remainder!")

    elif cert.system == ProofSystemEnum.QSA:
        if cert.squares:
            raise RemainderShapeViolatedError("QSA certificates carry no square list!")

        if cert.remainder is not None:
            for _monomial, _coef in cert.remainder.terms.items():
                if _coef < 0:
                    raise RemainderShapeViolatedError(
                        f"QSA remainder has the negative coefficient {_coef} on {_monomial}!"
                    )

    elif (cert.remainder is not None) and (not cert.remainder.is_zero):
        raise RemainderShapeViolatedError("QSOS remainders are given as a square list!")

    return


def compute_measures(qbf: Qbf, cert: Certificate) -> Measures:
    _size = sum(len(_q) for _q in cert.multipliers.values())
    _size += sum(len(_q) for _q in cert.universal.values())
    if cert.system == ProofSystemEnum.QSOS:
        _size += sum(len(_s) for _s in cert.squares)
    elif cert.remainder is not None:
        _size += len(cert.remainder)

    _degrees = [0]
    for _axiom_id, _q in cert.multipliers.items():
        if _q:
            _degrees.append(_q.degree + _axiom_poly(qbf, _axiom_id).degree)

    for _q in cert.universal.values():
        if _q:
            _degrees.append(_q.degree + 1)

    _remainder = cert.remainder_poly()
    if _remainder:
        _degrees.append(_remainder.degree)

    return Measures(
        size=_size,
        degree=max(_degrees),
        qsize=sum(len(_q) for _q in cert.universal.values()),
        qdeg=existential_degree(qbf, cert.universal.values()),
        qdeg_distinct=existential_degree(qbf, cert.universal.values(), distinct=True),
    )


@validate_call(config={"arbitrary_types_allowed": True})
def verify(qbf: Qbf, cert: Certificate) -> Measures:
    """Check a certificate symbolically with exact arithmetic and measure it.

    Args:
        qbf  (Qbf        , required): Formula.
        cert (Certificate, required): Certificate to check.

    Raises:
        InvalidAxiomIdError        : If a multiplier names an axiom that `qbf` does not have.
        SideConditionViolatedError : If a `q_u` key is not universal or `q_u` mentions a variable
                                        that is not strictly left of `u`.
        RemainderShapeViolatedError: If the remainder does not match the proof system.
        IdentityViolatedError      : If the identity does not hold; the residual is attached.

    Returns:
        Measures: size, degree, qsize, qdeg and qdeg_distinct.
    """

    for _axiom_id in cert.multipliers:
        check_axiom_id(qbf, _axiom_id)

    for _u, _q in cert.universal.items():
        check_side_condition(qbf, _u, _q)

    _check_shape(cert)

    _residual = (
        combine_axioms(qbf, cert.multipliers)
        + cert.universal_part()
        + cert.remainder_poly()
        + 1
    )
    if not _residual.is_zero:
        raise IdentityViolatedError(residual=_residual)

    _measures = compute_measures(qbf, cert)
    logger.debug(f"Accepted {cert.system.value} certificate: {_measures}")
    return _measures


__all__ = [
    "Certificate",
    "Measures",
    "monomial_existential_degree",
    "existential_degree",
    "check_side_condition",
    "compute_measures",
    "verify",
]
