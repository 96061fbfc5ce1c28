import math
import logging
import itertools
from fractions import Fraction
from collections.abc import Iterable, Sequence
from typing import NamedTuple

from pydantic import BaseModel, ConfigDict, Field, model_validator, validate_call

from ..constants import ProofSystemEnum, SearchModeEnum, SearchStatusEnum, WarnEnum
from ..exceptions import NoneFoundError
from ..config import resolve_cap
from ..validator import check_cap
from ..poly import ExtVar, Monomial, Polynomial
from ..qbf import Qbf, AxiomId, iter_models
from ..ideal import Multipliers, combine_axioms, multilinear_normal_form
from ..cert import Certificate, Measures, verify
from ..game import ScoreStrategy, compile_v1_to_qsa, compile_v2_to_qns
from .linalg import solve_exact
from .simplex import find_feasible

logger = logging.getLogger(__name__)


_Key = frozenset[int]


class SearchBudget(BaseModel):
    """Template bounds of a refutation search.

    `degree` bounds every part of the identity, `qdeg` the existential variables per monomial of
    the `q_u` (no extra bound when None), and `axiom_degrees` optionally caps the multiplier
    degree of individual clauses by matrix index.
    """

    model_config = ConfigDict(frozen=True)

    degree: int = Field(..., ge=0)
    qdeg: int | None = Field(default=None, ge=0)
    max_vars: int | None = Field(default=None, ge=1)
    max_unknowns: int | None = Field(default=None, ge=1)
    axiom_degrees: dict[int, int] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_qdeg(self) -> "SearchBudget":
        if (self.qdeg is not None) and (self.degree < self.qdeg):
            raise ValueError(f"qdeg cap {self.qdeg} is above the degree {self.degree}!")

        for _index, _degree in self.axiom_degrees.items():
            if (_index < 0) or (_degree < 0):
                raise ValueError(f"Invalid axiom degree cap {_index}: {_degree}!")

        return self

    @property
    def qdeg_cap(self) -> int:
        return self.degree if self.qdeg is None else self.qdeg


class SearchResult(BaseModel):
    """Outcome of one budget attempt; `certificate` and `measures` are set when feasible."""

    model_config = ConfigDict(frozen=True)

    status: SearchStatusEnum
    system: ProofSystemEnum
    mode: SearchModeEnum
    budget: SearchBudget
    certificate: Certificate | None = Field(default=None)
    measures: Measures | None = Field(default=None)

    @property
    def feasible(self) -> bool:
        return self.status == SearchStatusEnum.FEASIBLE


class _Column(NamedTuple):
    kind: str
    target: int
    plain: _Key
    negated: _Key = frozenset()


def _monomial(plain: Iterable[int], negated: Iterable[int] = ()) -> Monomial:
    return Monomial(
        [(ExtVar(_v), 1) for _v in plain] + [(ExtVar(_v, True), 1) for _v in negated]
    )


def _times_complements(plain: _Key, negated: Iterable[int]) -> dict[_Key, int]:
    """Twin-free multilinear expansion of `prod(plain) * prod(1 - v for v in negated)`."""

    _out: dict[_Key, int] = {plain: 1}
    for _v in negated:
        _next: dict[_Key, int] = {}
        for _key, _coef in _out.items():
            if _v in _key:
                continue

            _next[_key] = _next.get(_key, 0) + _coef
            _up = _key | {_v}
            _next[_up] = _next.get(_up, 0) - _coef

        _out = {_key: _coef for _key, _coef in _next.items() if _coef}

    return _out


def _subsets(variables: Sequence[int], max_size: int) -> Iterable[_Key]:
    for _size in range(min(max_size, len(variables)) + 1):
        for _combo in itertools.combinations(variables, _size):
            yield frozenset(_combo)


def _universal_columns(qbf: Qbf, budget: SearchBudget) -> list[_Column]:
    _existentials = set(qbf.existentials)
    _columns: list[_Column] = []
    if budget.degree < 1:
        return _columns

    for _u in qbf.universals:
        for _key in _subsets(qbf.left_of(_u), budget.degree - 1):
            if len(_key & _existentials) <= budget.qdeg_cap:
                _columns.append(_Column("universal", _u, _key))

    return _columns


def _clause_degree(qbf: Qbf, budget: SearchBudget, index: int) -> int:
    _degree = budget.degree - len(qbf.clauses[index])
    if index in budget.axiom_degrees:
        _degree = min(_degree, budget.axiom_degrees[index])

    return _degree


def _count_template(qbf: Qbf, budget: SearchBudget, remainder: bool) -> int:
    _count = 0
    for _index, _clause in enumerate(qbf.clauses):
        _free = qbf.num_vars - len(_clause)
        _count += sum(math.comb(_free, _k) for _k in range(_clause_degree(qbf, budget, _index) + 1))

    if remainder:
        _count += sum(
            math.comb(qbf.num_vars, _k) * 2**_k
            for _k in range(min(budget.degree, qbf.num_vars) + 1)
        )

    return _count


def _template_columns(
    qbf: Qbf, budget: SearchBudget, universal: list[_Column], remainder: bool
) -> list[_Column]:
    _columns: list[_Column] = []
    for _index, _clause in enumerate(qbf.clauses):
        _clause_vars = {abs(_l) for _l in _clause}
        _others = [_v for _v in qbf.variables if _v not in _clause_vars]
        for _key in _subsets(_others, _clause_degree(qbf, budget, _index)):
            _columns.append(_Column("clause", _index, _key))

    _columns += universal
    if remainder:
        for _support in _subsets(qbf.variables, budget.degree):
            _ordered = sorted(_support)
            for _signs in itertools.product((False, True), repeat=len(_ordered)):
                _negated = frozenset(_v for _v, _s in zip(_ordered, _signs) if _s)
                _columns.append(_Column("remainder", 0, _support - _negated, _negated))

    return _columns


def _column_vector(qbf: Qbf, column: _Column) -> dict[_Key, int]:
    if column.kind == "clause":
        _clause = qbf.clauses[column.target]
        _plain = column.plain | {-_l for _l in _clause if _l < 0}
        return _times_complements(_plain, [_l for _l in _clause if 0 < _l])

    if column.kind == "universal":
        return {column.plain: 1, column.plain | {column.target}: -2}

    return _times_complements(column.plain, sorted(column.negated))


def _dense_system(
    vectors: list[dict[_Key, int]],
) -> tuple[list[list[Fraction]], list[Fraction]]:
    _keys = {frozenset()}
    for _vector in vectors:
        _keys.update(_vector)

    _order = sorted(_keys, key=lambda _k: (len(_k), sorted(_k)))
    _row_of = {_key: _i for _i, _key in enumerate(_order)}
    _rows = [[Fraction(0)] * len(vectors) for _ in _order]
    for _j, _vector in enumerate(vectors):
        for _key, _coef in _vector.items():
            _rows[_row_of[_key]][_j] = Fraction(_coef)

    _rhs = [Fraction(0)] * len(_order)
    _rhs[_row_of[frozenset()]] = Fraction(-1)
    return _rows, _rhs


def _template_certificate(
    qbf: Qbf, system: ProofSystemEnum, columns: list[_Column], solution: list[Fraction]
) -> Certificate:
    _acc = Multipliers()
    _universal_terms: dict[int, dict[Monomial, Fraction]] = {}
    _remainder_terms: dict[Monomial, Fraction] = {}
    for _column, _value in zip(columns, solution):
        if not _value:
            continue

        if _column.kind == "clause":
            _acc.add_term(AxiomId.clause(_column.target), _monomial(_column.plain), _value)
        elif _column.kind == "universal":
            _terms = _universal_terms.setdefault(_column.target, {})
            _terms[_monomial(_column.plain)] = _value
        else:
            _remainder_terms[_monomial(_column.plain, _column.negated)] = _value

    _universal = {_u: Polynomial(_universal_terms[_u]) for _u in sorted(_universal_terms)}
    _remainder = Polynomial(_remainder_terms)
    _identity = combine_axioms(qbf, _acc.freeze()) + _remainder + 1
    for _u, _q in _universal.items():
        _identity = _identity + _q * (1 - 2 * Polynomial.var(_u))

    # the template only fixes the identity modulo the Boolean and twin axioms
    _nf, _mults = multilinear_normal_form(_identity)
    _acc.merge(_mults, factor=Fraction(-1))
    return Certificate(
        system=system,
        multipliers=_acc.freeze(),
        universal=_universal,
        remainder=_remainder if system == ProofSystemEnum.QSA else None,
    )


def _solve_template(
    qbf: Qbf, system: ProofSystemEnum, budget: SearchBudget, universal: list[_Column]
) -> Certificate | None:
    _remainder = system == ProofSystemEnum.QSA
    _columns = _template_columns(qbf, budget, universal, _remainder)
    _vectors = [_column_vector(qbf, _column) for _column in _columns]
    _rows, _rhs = _dense_system(_vectors)
    logger.debug(
        f"{system.value} template: {len(_rows)} equations, {len(_columns)} unknowns "
        f"(degree {budget.degree}, qdeg {budget.qdeg_cap})."
    )
    if _remainder:
        _free = [_j for _j, _column in enumerate(_columns) if _column.kind != "remainder"]
        _solution = find_feasible(_rows, _rhs, len(_columns), free=_free)
    else:
        _solution = solve_exact(_rows, _rhs, len(_columns))

    if _solution is None:
        return None

    return _template_certificate(qbf, system, _columns, _solution)


def _solve_game(
    qbf: Qbf, system: ProofSystemEnum, budget: SearchBudget, universal: list[_Column]
) -> Certificate | None:
    _models = list(iter_models(qbf))
    _rows: list[list[Fraction]] = []
    for _model in _models:
        _row = []
        for _column in universal:
            _on = all(_model[_v] for _v in _column.plain)
            _row.append(Fraction((2 * _model[_column.target] - 1) if _on else 0))

        _rows.append(_row)

    logger.debug(
        f"{system.value} score system: {len(_models)} models, {len(universal)} score monomials."
    )
    _ncols = len(universal)
    if system == ProofSystemEnum.QSA:
        # score(a) - slack(a) = 1 with slack(a) >= 0
        _slack_rows = [
            _row + [Fraction(-1) if _k == _i else Fraction(0) for _k in range(len(_rows))]
            for _i, _row in enumerate(_rows)
        ]
        _solution = find_feasible(
            _slack_rows, [Fraction(1)] * len(_rows), _ncols + len(_rows), free=range(_ncols)
        )
    else:
        _solution = solve_exact(_rows, [Fraction(1)] * len(_rows), _ncols)

    if _solution is None:
        return None

    _terms: dict[int, dict[Monomial, Fraction]] = {}
    for _column, _value in zip(universal, _solution[:_ncols]):
        if _value:
            _terms.setdefault(_column.target, {})[_monomial(_column.plain)] = _value

    _strategy = ScoreStrategy(scores={_u: Polynomial(_terms[_u]) for _u in sorted(_terms)})
    if system == ProofSystemEnum.QSA:
        return compile_v1_to_qsa(
            qbf, _strategy, warn_mode=WarnEnum.IGNORE, max_vars=budget.max_vars
        )

    return compile_v2_to_qns(qbf, _strategy, max_vars=budget.max_vars)


def _pick_mode(qbf: Qbf, budget: SearchBudget, mode: SearchModeEnum | str | None) -> SearchModeEnum:
    if isinstance(mode, str):
        mode = SearchModeEnum(mode.strip().upper())

    if mode is not None:
        return mode

    if (qbf.num_vars <= budget.degree) and (not budget.axiom_degrees):
        return SearchModeEnum.GAME

    return SearchModeEnum.TEMPLATE


def _attempt(
    qbf: Qbf,
    system: ProofSystemEnum,
    budget: SearchBudget,
    mode: SearchModeEnum,
    universal: list[_Column],
) -> Certificate | None:
    if mode == SearchModeEnum.GAME:
        return _solve_game(qbf, system, budget, universal)

    return _solve_template(qbf, system, budget, universal)


def _check_caps(
    qbf: Qbf, system: ProofSystemEnum, budget: SearchBudget, mode: SearchModeEnum
) -> None:
    check_cap("variables", qbf.num_vars, resolve_cap(budget.max_vars, "max_vars"))
    if mode == SearchModeEnum.TEMPLATE:
        check_cap(
            "template unknowns",
            _count_template(qbf, budget, system == ProofSystemEnum.QSA),
            resolve_cap(budget.max_unknowns, "max_unknowns"),
        )

    return


@validate_call(config={"arbitrary_types_allowed": True})
def search(
    qbf: Qbf,
    system: ProofSystemEnum | str,
    budget: SearchBudget,
    mode: SearchModeEnum | str | None = None,
) -> SearchResult:
    """Look for a QNS or QSA refutation within a degree budget.

    TEMPLATE mode puts one unknown on every allowed monomial of every `q_p`, `q_u` and (QSA) of
    the remainder, and solves the identity in the quotient by the Boolean and twin axioms: one
    equation per twin-free multilinear monomial. The Boolean and twin multipliers are recovered
    afterwards from the multilinear normal form. GAME mode, chosen by default once the degree
    reaches the variable count, only puts unknowns on the `q_u` and asks for a score strategy
    winning in variant 2 (QNS) or with score at least 1 on every model (QSA), then compiles it.

    Args:
        qbf    (Qbf                          , required): Formula.
        system (ProofSystemEnum | str        , required): 'QNS' or 'QSA'.
        budget (SearchBudget                 , required): Template bounds.
        mode   (SearchModeEnum | str | None  , optional): Force 'TEMPLATE' or 'GAME'; picked from
                                                            the budget when None.

    Raises:
        ValueError   : If `system` is 'QSOS'.
        TooLargeError: If the formula or the template exceeds the caps.

    Returns:
        SearchResult: FEASIBLE with a verified certificate, or INFEASIBLE at this budget.
    """

    if isinstance(system, str):
        system = ProofSystemEnum(system.strip().upper())

    if system == ProofSystemEnum.QSOS:
        raise ValueError("Search supports only the 'QNS' and 'QSA' systems!")

    _mode = _pick_mode(qbf, budget, mode)
    _check_caps(qbf, system, budget, _mode)
    _cert = _attempt(qbf, system, budget, _mode, _universal_columns(qbf, budget))
    if _cert is None:
        logger.info(f"No {system.value} certificate at {budget} ({_mode.value} mode).")
        return SearchResult(
            status=SearchStatusEnum.INFEASIBLE, system=system, mode=_mode, budget=budget
        )

    _measures = verify(qbf, _cert)
    logger.info(f"Found {system.value} certificate at {budget} ({_mode.value} mode): {_measures}")
    return SearchResult(
        status=SearchStatusEnum.FEASIBLE,
        system=system,
        mode=_mode,
        budget=budget,
        certificate=_cert,
        measures=_measures,
    )


@validate_call(config={"arbitrary_types_allowed": True})
def ns_search(
    qbf: Qbf, budget: SearchBudget, mode: SearchModeEnum | str | None = None
) -> SearchResult:
    """QNS refutation search; the template is solved by fraction-free elimination."""

    return search(qbf, ProofSystemEnum.QNS, budget, mode=mode)


@validate_call(config={"arbitrary_types_allowed": True})
def sa_search(
    qbf: Qbf, budget: SearchBudget, mode: SearchModeEnum | str | None = None
) -> SearchResult:
    """QSA refutation search; the template is solved by exact phase-1 simplex."""

    return search(qbf, ProofSystemEnum.QSA, budget, mode=mode)


@validate_call(config={"arbitrary_types_allowed": True})
def min_qdeg(
    qbf: Qbf,
    system: ProofSystemEnum | str,
    degree: int | None = None,
    max_qdeg: int | None = None,
    max_vars: int | None = None,
    max_unknowns: int | None = None,
) -> tuple[int, Certificate]:
    """Smallest qdeg cap at which a refutation exists, swept upwards from 0.

    Args:
        qbf          (Qbf                  , required): Formula.
        system       (ProofSystemEnum | str, required): 'QNS' or 'QSA'.
        degree       (int | None           , optional): Degree budget; the variable count when None.
        max_qdeg     (int | None           , optional): Top of the sweep; settings value when None.
        max_vars     (int | None           , optional): Variable cap.
        max_unknowns (int | None           , optional): Template size cap.

    Raises:
        TooLargeError: If the formula or a template exceeds the caps.
        NoneFoundError: If no qdeg up to the top of the sweep is feasible.

    Returns:
        tuple[int, Certificate]: Smallest feasible qdeg and its certificate.
    """

    if isinstance(system, str):
        system = ProofSystemEnum(system.strip().upper())

    _degree = qbf.num_vars if degree is None else degree
    _top = min(resolve_cap(max_qdeg, "max_qdeg"), _degree)
    for _qdeg in range(_top + 1):
        _budget = SearchBudget(
            degree=_degree, qdeg=_qdeg, max_vars=max_vars, max_unknowns=max_unknowns
        )
        _result = search(qbf, system, _budget)
        if _result.feasible and (_result.certificate is not None):
            return _qdeg, _result.certificate

    raise NoneFoundError(f"No {system.value} certificate with qdeg <= {_top} at degree {_degree}!")


@validate_call(config={"arbitrary_types_allowed": True})
def min_qsize(
    qbf: Qbf,
    system: ProofSystemEnum | str,
    budget: SearchBudget,
    mode: SearchModeEnum | str | None = None,
) -> tuple[int, Certificate]:
    """Smallest number of `q_u` monomials of a refutation at this budget.

    Subsets of the `q_u` template monomials are tried by increasing cardinality, so the first
    feasible subset has all its coefficients non-zero.

    Raises:
        TooLargeError : If the subsets to try exceed the unknowns cap.
        NoneFoundError: If the budget admits no refutation at all.

    Returns:
        tuple[int, Certificate]: Minimal qsize and a certificate achieving it.
    """

    if isinstance(system, str):
        system = ProofSystemEnum(system.strip().upper())

    _mode = _pick_mode(qbf, budget, mode)
    _check_caps(qbf, system, budget, _mode)
    _columns = _universal_columns(qbf, budget)
    _cap = resolve_cap(budget.max_unknowns, "max_unknowns")
    _tried = 0
    for _size in range(len(_columns) + 1):
        _tried += math.comb(len(_columns), _size)
        check_cap("q_u monomial subsets", _tried, _cap)
        for _subset in itertools.combinations(_columns, _size):
            _cert = _attempt(qbf, system, budget, _mode, list(_subset))
            if _cert is not None:
                verify(qbf, _cert)
                logger.info(f"Minimal {system.value} qsize at {budget}: {_size}")
                return _size, _cert

    raise NoneFoundError(f"No {system.value} certificate at {budget}!")


__all__ = [
    "SearchBudget",
    "SearchResult",
    "search",
    "ns_search",
    "sa_search",
    "min_qdeg",
    "min_qsize",
]
