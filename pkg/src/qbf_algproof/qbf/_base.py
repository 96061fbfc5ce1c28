import logging
from collections.abc import Callable, Iterable, Iterator, Mapping
from typing import Any

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PrivateAttr,
    field_validator,
    model_validator,
    validate_call,
)

from ..constants import QuantifierEnum, AxiomKindEnum
from ..exceptions import (
    TautologyError,
    UndeclaredVariableError,
    InvalidAxiomIdError,
    NotExistentialError,
)
from .._base import iter_assignments
from ..config import resolve_cap
from ..validator import check_cap
from ..poly import ExtVar, Monomial, Polynomial

logger = logging.getLogger(__name__)


Clause = tuple[int, ...]


def normalize_clause(literals: Iterable[int]) -> Clause:
    """Sort a clause by variable (negative literal first) and drop duplicate literals.

    Args:
        literals (Iterable[int], required): DIMACS literals, non-zero integers.

    Raises:
        ValueError    : If a literal is 0.
        TautologyError: If a variable occurs in both polarities.

    Returns:
        Clause: Normalized clause.
    """

    _literals = set(literals)
    if 0 in _literals:
        raise ValueError("Literal 0 is not allowed inside a clause!")

    for _literal in _literals:
        if -_literal in _literals:
            raise TautologyError(clause=tuple(sorted(_literals, key=_literal_key)))

    return tuple(sorted(_literals, key=_literal_key))


def _literal_key(literal: int) -> tuple[int, bool]:
    return (abs(literal), literal > 0)


class Qbf(BaseModel):
    """Prenex QBF: an ordered quantifier prefix and a CNF matrix of DIMACS clauses."""

    model_config = ConfigDict(frozen=True)

    prefix: tuple[tuple[QuantifierEnum, int], ...] = Field(default=())
    clauses: tuple[Clause, ...] = Field(default=())

    _position: dict[int, int] = PrivateAttr(default_factory=dict)
    _quantifier: dict[int, QuantifierEnum] = PrivateAttr(default_factory=dict)

    @field_validator("clauses", mode="after")
    @classmethod
    def _check_clauses(cls, val: tuple[Clause, ...]) -> tuple[Clause, ...]:
        return tuple(normalize_clause(_clause) for _clause in val)

    @model_validator(mode="after")
    def _check_prefix(self) -> "Qbf":
        _seen: set[int] = set()
        for _, _var in self.prefix:
            if _var < 1:
                raise ValueError(f"Variable '{_var}' in prefix must be >= 1!")

            if _var in _seen:
                raise ValueError(f"Variable '{_var}' is quantified more than once!")

            _seen.add(_var)

        for _clause in self.clauses:
            for _literal in _clause:
                if abs(_literal) not in _seen:
                    raise UndeclaredVariableError(var=abs(_literal))

        return self

    def model_post_init(self, context: Any) -> None:
        for _index, (_quantifier, _var) in enumerate(self.prefix):
            self._position[_var] = _index
            self._quantifier[_var] = _quantifier

    @property
    def variables(self) -> list[int]:
        return [_var for _, _var in self.prefix]

    @property
    def universals(self) -> list[int]:
        return [_var for _q, _var in self.prefix if _q == QuantifierEnum.FORALL]

    @property
    def existentials(self) -> list[int]:
        return [_var for _q, _var in self.prefix if _q == QuantifierEnum.EXISTS]

    @property
    def num_vars(self) -> int:
        return len(self.prefix)

    def has_var(self, var: int) -> bool:
        return var in self._position

    def position(self, var: int) -> int:
        try:
            return self._position[var]
        except KeyError:
            raise UndeclaredVariableError(var=var) from None

    def quantifier(self, var: int) -> QuantifierEnum:
        self.position(var)
        return self._quantifier[var]

    def is_universal(self, var: int) -> bool:
        return self.quantifier(var) == QuantifierEnum.FORALL

    def is_existential(self, var: int) -> bool:
        return self.quantifier(var) == QuantifierEnum.EXISTS

    def left_of(self, var: int) -> list[int]:
        """Variables strictly left of `var`, in prefix order."""

        return [_v for _, _v in self.prefix[: self.position(var)]]

    def is_left_of(self, var: int, other: int) -> bool:
        return self.position(var) < self.position(other)

    def clause_vars(self, index: int) -> set[int]:
        return {abs(_literal) for _literal in self.clauses[index]}

    def falsified_clause(self, assignment: Mapping[int, int]) -> int | None:
        """Index of the first clause falsified by a total assignment, or None."""

        for _index, _clause in enumerate(self.clauses):
            if not any(_literal_true(_literal, assignment) for _literal in _clause):
                return _index

        return None

    def satisfies(self, assignment: Mapping[int, int]) -> bool:
        return self.falsified_clause(assignment) is None


def _literal_true(literal: int, assignment: Mapping[int, int]) -> bool:
    return assignment[abs(literal)] == (1 if literal > 0 else 0)


class AxiomId(BaseModel):
    """Names one polynomial of the encoding: a clause monomial, a Boolean axiom or a twin axiom."""

    model_config = ConfigDict(frozen=True)

    kind: AxiomKindEnum
    index: int = Field(..., ge=0)

    @classmethod
    def clause(cls, index: int) -> "AxiomId":
        return cls(kind=AxiomKindEnum.CLAUSE, index=index)

    @classmethod
    def boolean(cls, var: int) -> "AxiomId":
        return cls(kind=AxiomKindEnum.BOOL, index=var)

    @classmethod
    def twin(cls, var: int) -> "AxiomId":
        return cls(kind=AxiomKindEnum.TWIN, index=var)

    def sort_key(self) -> tuple[int, int]:
        _order = {AxiomKindEnum.CLAUSE: 0, AxiomKindEnum.BOOL: 1, AxiomKindEnum.TWIN: 2}
        return (_order[self.kind], self.index)

    def __str__(self) -> str:
        return f"{self.kind.value} {self.index}"


def clause_monomial(clause: Iterable[int]) -> Monomial:
    """M(C): twin of every positive variable times every negated variable; repeats raise exponents."""

    return Monomial(
        (ExtVar(abs(_literal), _literal > 0), 1) for _literal in clause if _literal
    )


def check_axiom_id(qbf: Qbf, axiom_id: AxiomId) -> None:
    if axiom_id.kind == AxiomKindEnum.CLAUSE:
        if len(qbf.clauses) <= axiom_id.index:
            raise InvalidAxiomIdError(axiom_id=str(axiom_id))
    elif not qbf.has_var(axiom_id.index):
        raise InvalidAxiomIdError(axiom_id=str(axiom_id))

    return


@validate_call(config={"arbitrary_types_allowed": True})
def axiom_poly(qbf: Qbf, axiom_id: AxiomId) -> Polynomial:
    """Polynomial of one axiom of the encoding.

    Args:
        qbf      (Qbf    , required): Formula.
        axiom_id (AxiomId, required): Clause index or variable of the axiom.

    Raises:
        InvalidAxiomIdError: If the clause index or variable does not exist in `qbf`.

    Returns:
        Polynomial: `M(C_j)`, `v^2 - v` or `v + ~v - 1`.
    """

    check_axiom_id(qbf, axiom_id)
    return _axiom_poly(qbf, axiom_id)


def _axiom_poly(qbf: Qbf, axiom_id: AxiomId) -> Polynomial:
    if axiom_id.kind == AxiomKindEnum.CLAUSE:
        return Polynomial.from_monomial(clause_monomial(qbf.clauses[axiom_id.index]))

    _var = axiom_id.index
    if axiom_id.kind == AxiomKindEnum.BOOL:
        return bool_axiom(_var)

    return twin_axiom(_var)


def bool_axiom(var: int) -> Polynomial:
    _x = Polynomial.var(var)
    return _x * _x - _x


def twin_axiom(var: int) -> Polynomial:
    return Polynomial.var(var) + Polynomial.var(var, twin=True) - 1


def encoding_axioms(qbf: Qbf) -> list[AxiomId]:
    """Every axiom of enc(φ): clauses first, then Boolean and twin axioms per variable."""

    _ids = [AxiomId.clause(_j) for _j in range(len(qbf.clauses))]
    for _var in sorted(qbf.variables):
        _ids.append(AxiomId.boolean(_var))
        _ids.append(AxiomId.twin(_var))

    return _ids


def restrict_qbf_with_map(
    qbf: Qbf, var: int, bit: int
) -> tuple[Qbf, dict[int, int]]:
    """Restrict an existential variable and return the old-to-new clause index map."""

    if (not qbf.has_var(var)) or (not qbf.is_existential(var)):
        raise NotExistentialError(var=var)

    if bit not in (0, 1):
        raise ValueError(f"`bit` argument value '{bit}' is not Boolean!")

    _true = var if bit else -var
    _clauses: list[Clause] = []
    _index_map: dict[int, int] = {}
    for _index, _clause in enumerate(qbf.clauses):
        if _true in _clause:
            continue

        _index_map[_index] = len(_clauses)
        _clauses.append(tuple(_l for _l in _clause if _l != -_true))

    _prefix = tuple(_entry for _entry in qbf.prefix if _entry[1] != var)
    return Qbf(prefix=_prefix, clauses=tuple(_clauses)), _index_map


@validate_call(config={"arbitrary_types_allowed": True})
def restrict_qbf(qbf: Qbf, var: int, bit: int) -> Qbf:
    """Fix an existential variable: drop satisfied clauses and falsified literals.

    Args:
        qbf (Qbf, required): Formula.
        var (int, required): Existential variable.
        bit (int, required): Value 0 or 1.

    Raises:
        NotExistentialError: If `var` is not an existential variable of the prefix.

    Returns:
        Qbf: Restricted formula; the empty clause may occur.
    """

    return restrict_qbf_with_map(qbf, var, bit)[0]


def _simplify(clauses: list[Clause], literal: int) -> list[Clause]:
    """Make `literal` true."""

    _out: list[Clause] = []
    for _clause in clauses:
        if literal in _clause:
            continue

        if -literal in _clause:
            _out.append(tuple(_l for _l in _clause if _l != -literal))
        else:
            _out.append(_clause)

    return _out


@validate_call(config={"arbitrary_types_allowed": True})
def evaluate_qbf(qbf: Qbf, max_vars: int | None = None) -> bool:
    """Decide the formula by minimax over the prefix.

    Args:
        qbf      (Qbf       , required): Formula.
        max_vars (int | None, optional): Variable cap; settings value when None. Defaults to None.

    Raises:
        TooLargeError: If the formula has more variables than the cap.

    Returns:
        bool: Truth value.
    """

    check_cap("variables", qbf.num_vars, resolve_cap(max_vars, "max_vars"))

    _prefix = qbf.prefix

    def _solve(clauses: list[Clause], depth: int) -> bool:
        if any(not _clause for _clause in clauses):
            return False

        if not clauses:
            return True

        _quantifier, _var = _prefix[depth]
        if _quantifier == QuantifierEnum.EXISTS:
            return any(_solve(_simplify(clauses, _l), depth + 1) for _l in (_var, -_var))

        return all(_solve(_simplify(clauses, _l), depth + 1) for _l in (-_var, _var))

    return _solve(list(qbf.clauses), 0)


def iter_models(qbf: Qbf, max_models: int | None = None) -> Iterator[dict[int, int]]:
    """Enumerate total assignments of the prefix variables that satisfy the matrix.

    Deterministic DPLL with unit propagation; variables that no remaining clause mentions are
    expanded over both values.

    Args:
        qbf        (Qbf       , required): Formula.
        max_models (int | None, optional): Cap on yielded models; settings value when None.

    Raises:
        TooLargeError: If more models than the cap exist.

    Yields:
        dict[int, int]: Satisfying assignment.
    """

    _cap = resolve_cap(max_models, "max_models")
    _variables = sorted(qbf.variables)
    _count = 0

    def _search(clauses: list[Clause], assignment: dict[int, int]) -> Iterator[dict[int, int]]:
        _assignment = dict(assignment)
        _clauses = clauses
        while True:
            if any(not _clause for _clause in _clauses):
                return

            _unit = next((_c[0] for _c in _clauses if len(_c) == 1), None)
            if _unit is None:
                break

            _assignment[abs(_unit)] = 1 if _unit > 0 else 0
            _clauses = _simplify(_clauses, _unit)

        if not _clauses:
            _free = [_v for _v in _variables if _v not in _assignment]
            for _rest in iter_assignments(_free):
                yield {**_assignment, **_rest}

            return

        _var = min(abs(_l) for _l in _clauses[0])
        for _literal in (-_var, _var):
            _next = {**_assignment, _var: 1 if _literal > 0 else 0}
            yield from _search(_simplify(_clauses, _literal), _next)

    for _model in _search(list(qbf.clauses), {}):
        _count += 1
        check_cap("satisfying assignments", _count, _cap)
        yield _model

    logger.debug(f"Enumerated {_count} models of a matrix with {qbf.num_vars} variables.")


class EvalStrategy(BaseModel):
    """Universal strategy of the evaluation game as decision tables.

    `domains[u]` lists the variables left of `u` in prefix order; `tables[u]` maps the bit string
    of their values to the move for `u`. Missing rows read as 0, so every table is total.
    """

    model_config = ConfigDict(frozen=True)

    domains: dict[int, tuple[int, ...]] = Field(default_factory=dict)
    tables: dict[int, dict[str, int]] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_tables(self) -> "EvalStrategy":
        for _u, _table in self.tables.items():
            if _u not in self.domains:
                raise ValueError(f"Table for {_u} has no domain!")

            _width = len(self.domains[_u])
            for _key, _bit in _table.items():
                if (len(_key) != _width) or (set(_key) - {"0", "1"}) or (_bit not in (0, 1)):
                    raise ValueError(f"Row '{_key} -> {_bit}' of table {_u} is invalid!")

        return self

    @classmethod
    def constant(cls, qbf: Qbf, bit: int = 0) -> "EvalStrategy":
        _domains = {_u: tuple(qbf.left_of(_u)) for _u in qbf.universals}
        _tables: dict[int, dict[str, int]] = {_u: {} for _u in _domains}
        if bit:
            for _u, _domain in _domains.items():
                for _row in iter_assignments(_domain):
                    _tables[_u][row_key(_domain, _row)] = 1

        return cls(domains=_domains, tables=_tables)

    def decide(self, universal: int, assignment: Mapping[int, int]) -> int:
        _domain = self.domains.get(universal, ())
        return self.tables.get(universal, {}).get(row_key(_domain, assignment), 0)


def row_key(domain: Iterable[int], assignment: Mapping[int, int]) -> str:
    return "".join(str(assignment[_v]) for _v in domain)


def satisfying_play(
    qbf: Qbf, choose: Callable[[int, dict[int, int]], int]
) -> dict[int, int] | None:
    """First play (existentials branch 0 before 1, universals follow `choose`) that satisfies the
    matrix, or None when every play falsifies it.

    `choose(u, assignment)` receives the values of the variables left of `u`. Variables after
    the point where the matrix became satisfied are completed with 0 for existentials.
    """

    _prefix = qbf.prefix

    def _complete(depth: int, assignment: dict[int, int]) -> dict[int, int]:
        _out = dict(assignment)
        for _quantifier, _var in _prefix[depth:]:
            _out[_var] = 0 if _quantifier == QuantifierEnum.EXISTS else choose(_var, _out)

        return _out

    def _walk(clauses: list[Clause], depth: int, assignment: dict[int, int]) -> dict[int, int] | None:
        if any(not _clause for _clause in clauses):
            return None

        if not clauses:
            return _complete(depth, assignment)

        _quantifier, _var = _prefix[depth]
        if _quantifier == QuantifierEnum.EXISTS:
            _bits = (0, 1)
        else:
            _bits = (choose(_var, assignment),)

        for _bit in _bits:
            _literal = _var if _bit else -_var
            _found = _walk(_simplify(clauses, _literal), depth + 1, {**assignment, _var: _bit})
            if _found is not None:
                return _found

        return None

    return _walk(list(qbf.clauses), 0, {})


@validate_call(config={"arbitrary_types_allowed": True})
def find_countermodel(
    qbf: Qbf, max_table_vars: int | None = None
) -> EvalStrategy | None:
    """Compute a winning universal strategy of the evaluation game, if the formula is false.

    Every reachable node of the game tree is evaluated; at a universal node the table records 1
    exactly when setting the variable to 0 does not falsify the residual formula but setting it
    to 1 does.

    Args:
        qbf            (Qbf       , required): Formula.
        max_table_vars (int | None, optional): Cap on the variable count; settings value when None.

    Raises:
        TooLargeError: If the formula has more variables than the cap.

    Returns:
        EvalStrategy | None: Countermodel, or None for a true formula.
    """

    check_cap("variables", qbf.num_vars, resolve_cap(max_table_vars, "max_table_vars"))

    _prefix = qbf.prefix
    _domains = {_u: tuple(qbf.left_of(_u)) for _u in qbf.universals}
    _tables: dict[int, dict[str, int]] = {_u: {} for _u in _domains}

    def _walk(clauses: list[Clause], depth: int, assignment: dict[int, int]) -> bool:
        if any(not _clause for _clause in clauses):
            return False

        if not clauses:
            return True

        _quantifier, _var = _prefix[depth]
        _values = []
        for _bit in (0, 1):
            _literal = _var if _bit else -_var
            _values.append(
                _walk(_simplify(clauses, _literal), depth + 1, {**assignment, _var: _bit})
            )

        if _quantifier == QuantifierEnum.EXISTS:
            return _values[0] or _values[1]

        if _values[0] and (not _values[1]):
            _tables[_var][row_key(_domains[_var], assignment)] = 1

        return _values[0] and _values[1]

    if _walk(list(qbf.clauses), 0, {}):
        return None

    return EvalStrategy(domains=_domains, tables=_tables)


__all__ = [
    "Clause",
    "normalize_clause",
    "Qbf",
    "AxiomId",
    "clause_monomial",
    "check_axiom_id",
    "axiom_poly",
    "bool_axiom",
    "twin_axiom",
    "encoding_axioms",
    "restrict_qbf_with_map",
    "restrict_qbf",
    "evaluate_qbf",
    "iter_models",
    "EvalStrategy",
    "row_key",
    "satisfying_play",
    "find_countermodel",
]
