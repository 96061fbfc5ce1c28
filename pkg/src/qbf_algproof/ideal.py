import logging
from fractions import Fraction
from collections.abc import Iterable, Mapping

from pydantic import validate_call

from .exceptions import NotInIdealError
from .poly import ExtVar, Monomial, Polynomial, ONE
from .qbf import Qbf, AxiomId, clause_monomial, iter_models
from .qbf._base import _axiom_poly

logger = logging.getLogger(__name__)


AxiomMultipliers = dict[AxiomId, Polynomial]


class Multipliers:
    """Mutable accumulator of axiom multipliers, kept as term dictionaries until frozen."""

    def __init__(self, initial: Mapping[AxiomId, Polynomial] | None = None) -> None:
        self._terms: dict[AxiomId, dict[Monomial, Fraction]] = {}
        for _axiom_id, _poly in (initial or {}).items():
            self.add(_axiom_id, _poly)

    def add_term(self, axiom_id: AxiomId, monomial: Monomial, coef: Fraction) -> None:
        if not coef:
            return

        _terms = self._terms.setdefault(axiom_id, {})
        _value = _terms.get(monomial, 0) + coef
        if _value:
            _terms[monomial] = _value
        else:
            _terms.pop(monomial, None)

    def add(self, axiom_id: AxiomId, poly: Polynomial, factor: Fraction = Fraction(1)) -> None:
        for _monomial, _coef in poly.terms.items():
            self.add_term(axiom_id, _monomial, factor * _coef)

    def merge(self, other: "Multipliers | Mapping[AxiomId, Polynomial]", factor: Fraction = Fraction(1)) -> None:
        _items = other.freeze() if isinstance(other, Multipliers) else other
        for _axiom_id, _poly in _items.items():
            self.add(_axiom_id, _poly, factor)

    def freeze(self) -> AxiomMultipliers:
        _out: AxiomMultipliers = {}
        for _axiom_id in sorted(self._terms, key=lambda _a: _a.sort_key()):
            if self._terms[_axiom_id]:
                _out[_axiom_id] = Polynomial(self._terms[_axiom_id])

        return _out


def combine_axioms(qbf: Qbf, multipliers: Mapping[AxiomId, Polynomial]) -> Polynomial:
    """Symbolic sum of `q_p * p` over the given multipliers."""

    _total = Polynomial.zero()
    for _axiom_id, _poly in multipliers.items():
        _total = _total + _poly * _axiom_poly(qbf, _axiom_id)

    return _total


def _reduce_monomial(
    monomial: Monomial, coef: Fraction, acc: Multipliers
) -> Monomial | None:
    """Rewrite `coef * monomial` into one literal monomial, recording the axiom multiples."""

    _current = monomial
    for _base in sorted(monomial.bases):
        _pos_var, _neg_var = ExtVar(_base), ExtVar(_base, True)
        _a, _b = _current.exponent(_pos_var), _current.exponent(_neg_var)
        _rest = _current / (Monomial.of(_pos_var, _a) * Monomial.of(_neg_var, _b))
        _bool_id, _twin_id = AxiomId.boolean(_base), AxiomId.twin(_base)

        # v^a -> v via v^a = v^(a-1) + v^(a-2) (v^2 - v)
        while 2 <= _a:
            acc.add_term(
                _bool_id,
                _rest * Monomial.of(_pos_var, _a - 2) * Monomial.of(_neg_var, _b),
                coef,
            )
            _a -= 1

        # ~v^2 - ~v = (v^2 - v) + (~v - v)(v + ~v - 1)
        while 2 <= _b:
            _base_monomial = _rest * Monomial.of(_pos_var, _a) * Monomial.of(_neg_var, _b - 2)
            acc.add_term(_bool_id, _base_monomial, coef)
            acc.add_term(_twin_id, _base_monomial * Monomial.of(_neg_var), coef)
            acc.add_term(_twin_id, _base_monomial * Monomial.of(_pos_var), -coef)
            _b -= 1

        # v ~v = v (v + ~v - 1) - (v^2 - v)
        if _a and _b:
            acc.add_term(_twin_id, _rest * Monomial.of(_pos_var), coef)
            acc.add_term(_bool_id, _rest, -coef)
            return None

        _current = _rest * Monomial.of(_pos_var, _a) * Monomial.of(_neg_var, _b)

    return _current


def _literal_reduce(p: Polynomial, acc: Multipliers) -> Polynomial:
    _terms: dict[Monomial, Fraction] = {}
    for _monomial, _coef in p.terms.items():
        _reduced = _reduce_monomial(_monomial, _coef, acc)
        if _reduced is None:
            continue

        _value = _terms.get(_reduced, 0) + _coef
        if _value:
            _terms[_reduced] = _value
        else:
            _terms.pop(_reduced, None)

    return Polynomial(_terms)


@validate_call(config={"arbitrary_types_allowed": True})
def literal_reduce(p: Polynomial) -> tuple[Polynomial, AxiomMultipliers]:
    """Rewrite `p` modulo Boolean and twin axioms into consistent literal monomials.

    Every monomial of the result mentions each base at most once, as `x` or `~x`, with exponent 1.
    Values on Boolean points are unchanged.

    Args:
        p (Polynomial, required): Polynomial to reduce.

    Returns:
        tuple[Polynomial, AxiomMultipliers]: Reduced polynomial and multipliers with
            `p = reduced + sum(q_a * a)` symbolically.
    """

    _acc = Multipliers()
    _reduced = _literal_reduce(p, _acc)
    return _reduced, _acc.freeze()


def twin_free_expand(
    coef: Fraction,
    positives: Iterable[int],
    twins: list[int],
    acc: Multipliers,
    prefix: Monomial = ONE,
) -> Polynomial:
    """Expand `coef * prefix * prod(x, positives) * prod(~v, twins)` into twin-free form.

    Uses `~v = (1 - v) + (v + ~v - 1)` telescopically; the twin-axiom multiples go into `acc`.
    """

    _base = prefix * Monomial((ExtVar(_v), 1) for _v in positives)
    _base_poly = Polynomial.from_monomial(_base, coef)
    _done = _base_poly
    for _index, _var in enumerate(twins):
        _tail = Monomial((ExtVar(_v, True), 1) for _v in twins[_index + 1 :])
        acc.add(AxiomId.twin(_var), _done.mul_monomial(_tail))
        _done = _done - _done.mul_monomial(Monomial.of(ExtVar(_var)))

    return _done


def _multilinear(p: Polynomial, acc: Multipliers) -> Polynomial:
    _reduced = _literal_reduce(p, acc)
    _out = Polynomial.zero()
    for _monomial, _coef in _reduced.terms.items():
        _positives, _twins = [], []
        for _var, _ in _monomial.factors():
            (_twins if _var.twin else _positives).append(_var.base)

        if not _twins:
            _out = _out + Polynomial.from_monomial(_monomial, _coef)
            continue

        _out = _out + twin_free_expand(_coef, _positives, _twins, acc)

    return _out


@validate_call(config={"arbitrary_types_allowed": True})
def multilinear_normal_form(p: Polynomial) -> tuple[Polynomial, AxiomMultipliers]:
    """Twin-free multilinear normal form of `p` modulo Boolean and twin axioms.

    Args:
        p (Polynomial, required): Polynomial to normalize.

    Returns:
        tuple[Polynomial, AxiomMultipliers]: Normal form `nf` and multipliers with
            `p = nf + sum(q_a * a)` symbolically.
    """

    _acc = Multipliers()
    _nf = _multilinear(p, _acc)
    return _nf, _acc.freeze()


def _literal_assignment(monomial: Monomial) -> dict[int, int]:
    return {_key[0]: 0 if _key[1] else 1 for _key, _ in monomial.items}


def _clause_status(
    clause: tuple[int, ...], sigma: Mapping[int, int]
) -> tuple[bool, list[int]]:
    """(satisfied, unassigned literals) of a clause under a partial assignment."""

    _open = []
    for _literal in clause:
        _var = abs(_literal)
        if _var in sigma:
            if sigma[_var] == (1 if _literal > 0 else 0):
                return True, []
        else:
            _open.append(_literal)

    return False, _open


@validate_call(config={"arbitrary_types_allowed": True})
def express_in_ideal(
    r: Polynomial,
    qbf: Qbf,
    check_precondition: bool = False,
    max_models: int | None = None,
) -> AxiomMultipliers:
    """Write `r` as a combination of the encoding axioms of the matrix.

    `r` is first reduced to literal monomials. The monomials are then refined along a decision
    tree over partial assignments: a node falsifying a clause `C` credits every pending term
    `c * chi` as `c * chi / M(C)` to the multiplier of `C`; splitting a term on `x` uses
    `chi = chi*x + chi*~x - chi*(x + ~x - 1)`; a node satisfying every clause must have
    cancelling terms. The resulting identity is re-expanded and checked symbolically.

    Args:
        r                  (Polynomial, required): Polynomial vanishing on the models of the matrix.
        qbf                (Qbf       , required): Formula whose matrix generates the ideal.
        check_precondition (bool      , optional): Evaluate `r` on every model first. Defaults to False.
        max_models         (int | None, optional): Model cap for the precondition check.

    Raises:
        NotInIdealError: If `r` is non-zero on some satisfying assignment (witness attached).

    Returns:
        AxiomMultipliers: Multipliers `q_p` with `r = sum(q_p * p)` symbolically.
    """

    if check_precondition:
        for _model in iter_models(qbf, max_models=max_models):
            if r.evaluate(_model):
                raise NotInIdealError(assignment=_model)

    _acc = Multipliers()
    _reduced = _literal_reduce(r, _acc)
    _clauses = qbf.clauses
    _nodes = 0

    def _refine(sigma: dict[int, int], terms: dict[Monomial, Fraction]) -> None:
        nonlocal _nodes
        _nodes += 1
        if not terms:
            return

        _unit_var: int | None = None
        _open_var: int | None = None
        for _index, _clause in enumerate(_clauses):
            _satisfied, _open = _clause_status(_clause, sigma)
            if _satisfied:
                continue

            if not _open:
                _axiom_id = AxiomId.clause(_index)
                _monomial = clause_monomial(_clause)
                for _chi, _coef in terms.items():
                    _acc.add_term(_axiom_id, _chi / _monomial, _coef)

                return

            if (len(_open) == 1) and (_unit_var is None):
                _unit_var = abs(_open[0])

            if _open_var is None:
                _open_var = min(abs(_l) for _l in _open)

        _branch = _unit_var
        if _branch is None:
            _pending = [
                _var for _chi in terms for _var in _chi.bases if _var not in sigma
            ]
            _branch = min(_pending) if _pending else _open_var

        if _branch is None:
            # Every clause is satisfied and every term equals chi_sigma.
            _witness = {**{_v: 0 for _v in qbf.variables}, **sigma}
            raise NotInIdealError(assignment=_witness)

        _pos_var, _neg_var = ExtVar(_branch), ExtVar(_branch, True)
        _children: tuple[dict[Monomial, Fraction], dict[Monomial, Fraction]] = ({}, {})
        for _chi, _coef in terms.items():
            _bit = _literal_assignment(_chi).get(_branch)
            if _bit is None:
                _acc.add_term(AxiomId.twin(_branch), _chi, -_coef)
                _targets = ((0, _chi * Monomial.of(_neg_var)), (1, _chi * Monomial.of(_pos_var)))
            else:
                _targets = ((_bit, _chi),)

            for _b, _target in _targets:
                _child = _children[_b]
                _value = _child.get(_target, 0) + _coef
                if _value:
                    _child[_target] = _value
                else:
                    _child.pop(_target, None)

        for _bit in (0, 1):
            _refine({**sigma, _branch: _bit}, _children[_bit])

    _refine({}, dict(_reduced.terms))
    _multipliers = _acc.freeze()
    logger.debug(
        f"Expressed a polynomial with {len(r)} terms in the ideal: {_nodes} tree nodes, "
        f"{len(_multipliers)} multipliers."
    )

    _residual = r - combine_axioms(qbf, _multipliers)
    if not _residual.is_zero:
        raise RuntimeError(f"Ideal expression does not reproduce the input, residual: {_residual}")

    return _multipliers


__all__ = [
    "AxiomMultipliers",
    "Multipliers",
    "combine_axioms",
    "literal_reduce",
    "twin_free_expand",
    "multilinear_normal_form",
    "express_in_ideal",
]
