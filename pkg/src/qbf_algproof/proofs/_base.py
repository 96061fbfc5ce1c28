import logging
from fractions import Fraction
from collections.abc import Iterable
from typing import TypeVar

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..constants import QuResRuleEnum, WResRuleEnum, QpcRuleEnum
from ..poly import ExtVar
from ..qbf import AxiomId

logger = logging.getLogger(__name__)


WClause = tuple[int, ...]
_W = TypeVar("_W", int, Fraction)


def _literal_key(literal: int) -> tuple[int, bool]:
    return (abs(literal), literal > 0)


def wclause(literals: Iterable[int]) -> WClause:
    """Sorted multiset of literals; repeats and complementary pairs are kept.

    Args:
        literals (Iterable[int], required): DIMACS literals, non-zero integers.

    Raises:
        ValueError: If a literal is 0.

    Returns:
        WClause: Sorted literal tuple.
    """

    _literals = list(literals)
    if 0 in _literals:
        raise ValueError("Literal 0 is not allowed inside a clause!")

    return tuple(sorted(_literals, key=_literal_key))


def rule_delta(
    rule: WResRuleEnum, weight: _W, clause: WClause, literal: int | None
) -> list[tuple[WClause, _W]]:
    """Clause weight changes of one Q-w-Res rule applied with `weight` on `clause`."""

    if rule == WResRuleEnum.AXIOM:
        return [(clause, weight)]

    _literal = literal or 0
    if rule == WResRuleEnum.CUT:
        return [
            (wclause(clause + (_literal,)), -weight),
            (wclause(clause + (-_literal,)), -weight),
            (clause, weight),
        ]

    if rule == WResRuleEnum.IDEM:
        return [
            (wclause(clause + (_literal, _literal)), -weight),
            (wclause(clause + (_literal,)), weight),
        ]

    return [(wclause(clause + (_literal,)), -2 * weight), (clause, weight)]


class ProofMeasures(BaseModel):
    """Step count and reduction cost of an accepted proof trace."""

    model_config = ConfigDict(frozen=True)

    size: int = Field(..., ge=0)
    qsize: int = Field(..., ge=0)


class QuResStep(BaseModel):
    model_config = ConfigDict(frozen=True)

    rule: QuResRuleEnum
    premises: tuple[int, ...] = Field(default=())
    clause: int | None = Field(default=None, ge=0)
    var: int | None = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _check_shape(self) -> "QuResStep":
        if self.rule == QuResRuleEnum.AXIOM:
            if (self.clause is None) or self.premises:
                raise ValueError("Axiom steps take one clause index and no premises!")
        elif self.rule == QuResRuleEnum.RESOLVE:
            if (len(self.premises) != 2) or (self.var is None):
                raise ValueError("Resolution steps take two premises and a pivot variable!")
        elif (len(self.premises) != 1) or (self.var is None):
            raise ValueError("Reduction steps take one premise and a universal variable!")

        return self

    @classmethod
    def axiom(cls, clause: int) -> "QuResStep":
        return cls(rule=QuResRuleEnum.AXIOM, clause=clause)

    @classmethod
    def resolve(cls, first: int, second: int, var: int) -> "QuResStep":
        return cls(rule=QuResRuleEnum.RESOLVE, premises=(first, second), var=var)

    @classmethod
    def reduce(cls, premise: int, var: int) -> "QuResStep":
        return cls(rule=QuResRuleEnum.REDUCE, premises=(premise,), var=var)


class QuResProof(BaseModel):
    model_config = ConfigDict(frozen=True)

    steps: tuple[QuResStep, ...] = Field(default=())


class WResStep(BaseModel):
    """One configuration delta.

    `literal` is the cut variable for `cut`, the repeated literal for `idem` and the reduced
    universal literal for `red`; `ax` has none. A negative `weight` runs the rule backwards.
    """

    model_config = ConfigDict(frozen=True)

    rule: WResRuleEnum
    weight: int
    clause: WClause = Field(default=())
    literal: int | None = Field(default=None)

    @field_validator("clause", mode="after")
    @classmethod
    def _check_clause(cls, val: WClause) -> WClause:
        return wclause(val)

    @model_validator(mode="after")
    def _check_literal(self) -> "WResStep":
        if self.rule == WResRuleEnum.AXIOM:
            if self.literal is not None:
                raise ValueError("Axiom steps take no literal!")
        elif not self.literal:
            raise ValueError(f"'{self.rule.value}' steps need a non-zero literal!")
        elif (self.rule == WResRuleEnum.CUT) and (self.literal < 0):
            raise ValueError("Cut steps take a positive variable!")

        return self

    @classmethod
    def axiom(cls, clause: Iterable[int], weight: int) -> "WResStep":
        return cls(rule=WResRuleEnum.AXIOM, weight=weight, clause=tuple(clause))

    @classmethod
    def cut(cls, clause: Iterable[int], var: int, weight: int) -> "WResStep":
        return cls(rule=WResRuleEnum.CUT, weight=weight, clause=tuple(clause), literal=var)

    @classmethod
    def idem(cls, clause: Iterable[int], literal: int, weight: int) -> "WResStep":
        return cls(rule=WResRuleEnum.IDEM, weight=weight, clause=tuple(clause), literal=literal)

    @classmethod
    def red(cls, clause: Iterable[int], literal: int, weight: int) -> "WResStep":
        return cls(rule=WResRuleEnum.RED, weight=weight, clause=tuple(clause), literal=literal)

    def delta(self) -> list[tuple[WClause, int]]:
        """Weight changes this step applies to the configuration."""

        return rule_delta(self.rule, self.weight, self.clause, self.literal)


class WResProof(BaseModel):
    model_config = ConfigDict(frozen=True)

    steps: tuple[WResStep, ...] = Field(default=())


class WResConfiguration(BaseModel):
    """Total weight per clause; zero weights are dropped."""

    model_config = ConfigDict(frozen=True)

    weights: dict[WClause, int] = Field(default_factory=dict)

    def weight(self, clause: Iterable[int]) -> int:
        return self.weights.get(wclause(clause), 0)

    @property
    def empty_weight(self) -> int:
        return self.weights.get((), 0)


class QpcStep(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rule: QpcRuleEnum
    premises: tuple[int, ...] = Field(default=())
    axiom: AxiomId | None = Field(default=None)
    var: int | None = Field(default=None, ge=1)
    twin: bool = Field(default=False)
    bit: int | None = Field(default=None, ge=0, le=1)
    coefs: tuple[Fraction, ...] = Field(default=())

    @model_validator(mode="after")
    def _check_shape(self) -> "QpcStep":
        _arity = {
            QpcRuleEnum.AXIOM: 0,
            QpcRuleEnum.LIN: 2,
            QpcRuleEnum.MUL: 1,
            QpcRuleEnum.SCALE: 1,
            QpcRuleEnum.RED: 1,
        }
        if len(self.premises) != _arity[self.rule]:
            raise ValueError(f"'{self.rule.value}' steps take {_arity[self.rule]} premises!")

        if (self.rule == QpcRuleEnum.AXIOM) and (self.axiom is None):
            raise ValueError("Axiom steps need an axiom id!")

        if (self.rule in (QpcRuleEnum.MUL, QpcRuleEnum.RED)) and (self.var is None):
            raise ValueError(f"'{self.rule.value}' steps need a variable!")

        if (self.rule == QpcRuleEnum.RED) and (self.bit is None):
            raise ValueError("Reduction steps need a bit!")

        _coefs = {QpcRuleEnum.LIN: 2, QpcRuleEnum.SCALE: 1}.get(self.rule, 0)
        if len(self.coefs) != _coefs:
            raise ValueError(f"'{self.rule.value}' steps take {_coefs} coefficients!")

        return self

    @classmethod
    def ax(cls, axiom_id: AxiomId) -> "QpcStep":
        return cls(rule=QpcRuleEnum.AXIOM, axiom=axiom_id)

    @classmethod
    def lin(cls, first: int, second: int, a: Fraction | int, b: Fraction | int) -> "QpcStep":
        return cls(
            rule=QpcRuleEnum.LIN, premises=(first, second), coefs=(Fraction(a), Fraction(b))
        )

    @classmethod
    def mul(cls, premise: int, var: ExtVar) -> "QpcStep":
        return cls(rule=QpcRuleEnum.MUL, premises=(premise,), var=var.base, twin=var.twin)

    @classmethod
    def scale(cls, premise: int, a: Fraction | int) -> "QpcStep":
        return cls(rule=QpcRuleEnum.SCALE, premises=(premise,), coefs=(Fraction(a),))

    @classmethod
    def red(cls, premise: int, var: int, bit: int) -> "QpcStep":
        return cls(rule=QpcRuleEnum.RED, premises=(premise,), var=var, bit=bit)


class QpcProof(BaseModel):
    model_config = ConfigDict(frozen=True)

    steps: tuple[QpcStep, ...] = Field(default=())


__all__ = [
    "WClause",
    "wclause",
    "rule_delta",
    "ProofMeasures",
    "QuResStep",
    "QuResProof",
    "WResStep",
    "WResProof",
    "WResConfiguration",
    "QpcStep",
    "QpcProof",
]
