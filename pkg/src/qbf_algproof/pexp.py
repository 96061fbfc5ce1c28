import logging
import itertools
from abc import ABC, abstractmethod
from fractions import Fraction
from collections.abc import Iterator

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator, validate_call

from .exceptions import PexpError, QdegTooHighError
from .config import resolve_cap
from .validator import check_cap
from .poly import Polynomial
from .qbf import Qbf, check_axiom_id, gen_equality
from .ideal import combine_axioms
from .cert import Certificate, check_side_condition, existential_degree

logger = logging.getLogger(__name__)


class BasePseudoExpectation(BaseModel, ABC):
    """Linear functional given by finitely many weighted Boolean points."""

    model_config = ConfigDict(frozen=True)

    @abstractmethod
    def support(self) -> Iterator[tuple[dict[int, int], Fraction]]:
        """Yield `(point, weight)` pairs; `point` assigns every variable of the formula."""

        raise NotImplementedError()

    def evaluate(self, p: Polynomial) -> Fraction:
        _total = Fraction(0)
        for _point, _weight in self.support():
            _value = p.evaluate(_point)
            if _value:
                _total += _weight * _value

        return _total


class EqualityPE(BasePseudoExpectation):
    """Uniform average over `x = a, u = gamma, t = a xor gamma` for all `a` in `{0,1}^n`.

    Variables follow `gen_equality`: `x_i = i`, `u_i = n + i`, `t_i = 2n + i`.
    """

    n: int = Field(..., ge=1)
    gamma: tuple[int, ...] = Field(...)

    @field_validator("gamma", mode="after")
    @classmethod
    def _check_gamma(cls, val: tuple[int, ...]) -> tuple[int, ...]:
        for _bit in val:
            if _bit not in (0, 1):
                raise ValueError(f"`gamma` entries must be 0 or 1, got {_bit}!")

        return val

    @model_validator(mode="after")
    def _check_length(self) -> "EqualityPE":
        if len(self.gamma) != self.n:
            raise ValueError(f"`gamma` has {len(self.gamma)} entries, expected {self.n}!")

        return self

    def support(self) -> Iterator[tuple[dict[int, int], Fraction]]:
        _n = self.n
        _weight = Fraction(1, 2**_n)
        for _alpha in itertools.product((0, 1), repeat=_n):
            _point: dict[int, int] = {}
            for _i in range(_n):
                _point[_i + 1] = _alpha[_i]
                _point[_n + _i + 1] = self.gamma[_i]
                _point[2 * _n + _i + 1] = _alpha[_i] ^ self.gamma[_i]

            yield _point, _weight


class AuditReport(BaseModel):
    """Values of the functional on the pieces of a candidate expression."""

    model_config = ConfigDict(frozen=True)

    n: int
    gamma: tuple[int, ...]
    e_one: Fraction
    e_propositional: Fraction
    e_universal: Fraction
    e_total: Fraction
    conditions_hold: bool
    refutation_excluded: bool


def _equality_size(qbf: Qbf) -> int:
    _n = qbf.num_vars // 3
    if (_n < 1) or (qbf.num_vars != 3 * _n):
        raise PexpError(f"Formula with {qbf.num_vars} variables is not an Equality formula!")

    _expected = gen_equality(_n)
    if (qbf.prefix != _expected.prefix) or (qbf.clauses != _expected.clauses):
        raise PexpError(f"Formula is not the Equality formula of size {_n}!")

    return _n


@validate_call(config={"arbitrary_types_allowed": True})
def build_equality_pe(
    n: int, cert: Certificate, max_vars: int | None = None
) -> EqualityPE:
    """Build the Equality pseudo-expectation targeting one candidate expression.

    With `h = sum(q_u (1 - 2u))`, `gamma` maximizes `sum(h(x = a, u = gamma))` over `a`; the
    first maximizer in lexicographic order is taken. The identity itself is not checked.

    Args:
        n        (int        , required): Equality size.
        cert     (Certificate, required): Candidate pieces.
        max_vars (int | None , optional): Variable cap; settings value when None.

    Raises:
        TooLargeError             : If `3n` exceeds the variable cap.
        SideConditionViolatedError: If some `q_u` reads a variable not left of `u`.
        QdegTooHighError          : If the `q_u` have qdeg `n` or more.

    Returns:
        EqualityPE: Functional for this candidate.
    """

    check_cap("variables", 3 * n, resolve_cap(max_vars, "max_vars"))
    _qbf = gen_equality(n)
    for _u, _q in cert.universal.items():
        check_side_condition(_qbf, _u, _q)

    _qdeg = existential_degree(_qbf, cert.universal.values())
    if n <= _qdeg:
        raise QdegTooHighError(qdeg=_qdeg, n=n)

    _h = cert.universal_part()
    _best: tuple[Fraction, tuple[int, ...]] | None = None
    for _gamma in itertools.product((0, 1), repeat=n):
        _total = Fraction(0)
        for _alpha in itertools.product((0, 1), repeat=n):
            _point = {_i + 1: _alpha[_i] for _i in range(n)}
            _point.update({n + _i + 1: _gamma[_i] for _i in range(n)})
            _total += _h.evaluate(_point)

        if (_best is None) or (_best[0] < _total):
            _best = (_total, _gamma)

    assert _best is not None
    logger.debug(f"Picked gamma={_best[1]} with universal sum {_best[0]}.")
    return EqualityPE(n=n, gamma=_best[1])


@validate_call(config={"arbitrary_types_allowed": True})
def pe_evaluate(pe: BasePseudoExpectation, p: Polynomial) -> Fraction:
    """Exact value of the functional on `p`.

    Raises:
        UnassignedVariableError: If `p` mentions a variable outside the support points.
    """

    return pe.evaluate(p)


@validate_call(config={"arbitrary_types_allowed": True})
def audit(qbf: Qbf, cert: Certificate, max_vars: int | None = None) -> AuditReport:
    """Check the three pseudo-expectation conditions on a candidate expression for Equality.

    The functional must give 1 on the constant 1, a non-negative value on
    `q + sum(q_p p)` and a non-negative value on `sum(q_u (1 - 2u))`. When the three hold,
    the value on the whole expression is at least 1, so the candidate is not a refutation.

    Args:
        qbf      (Qbf        , required): An Equality formula as built by `gen_equality`.
        cert     (Certificate, required): Candidate pieces; the identity is not checked.
        max_vars (int | None , optional): Variable cap.

    Raises:
        PexpError          : If `qbf` is not an Equality formula.
        InvalidAxiomIdError: If a multiplier names an axiom `qbf` does not have.
        QdegTooHighError   : If the `q_u` have qdeg at least `n`.

    Returns:
        AuditReport: Values and verdicts.
    """

    _n = _equality_size(qbf)
    for _axiom_id in cert.multipliers:
        check_axiom_id(qbf, _axiom_id)

    _pe = build_equality_pe(_n, cert, max_vars=max_vars)
    _propositional = combine_axioms(qbf, cert.multipliers) + cert.remainder_poly()
    _universal = cert.universal_part()

    _e_one = _pe.evaluate(Polynomial.constant(1))
    _e_propositional = _pe.evaluate(_propositional)
    _e_universal = _pe.evaluate(_universal)
    _e_total = _pe.evaluate(_propositional + _universal + 1)
    _holds = (_e_one == 1) and (0 <= _e_propositional) and (0 <= _e_universal)
    _report = AuditReport(
        n=_n,
        gamma=_pe.gamma,
        e_one=_e_one,
        e_propositional=_e_propositional,
        e_universal=_e_universal,
        e_total=_e_total,
        conditions_hold=_holds,
        refutation_excluded=_e_total != 0,
    )
    logger.info(
        f"Pseudo-expectation audit (n={_n}, gamma={_pe.gamma}): "
        f"conditions_hold={_holds}, value={_e_total}"
    )
    return _report


__all__ = [
    "BasePseudoExpectation",
    "EqualityPE",
    "AuditReport",
    "build_equality_pe",
    "pe_evaluate",
    "audit",
]
