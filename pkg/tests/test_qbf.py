import random
import logging

import pytest

from qbf_algproof._base import iter_assignments
from qbf_algproof.constants import QuantifierEnum
from qbf_algproof.exceptions import (
    InvalidAxiomIdError,
    InvalidSizeError,
    NotExistentialError,
    ParseError,
    TautologyError,
    TooLargeError,
    UndeclaredVariableError,
)
from qbf_algproof.poly import parse_poly
from qbf_algproof.qbf import (
    Qbf,
    AxiomId,
    EvalStrategy,
    axiom_poly,
    clause_monomial,
    encoding_axioms,
    evaluate_qbf,
    find_countermodel,
    gen_equality,
    gen_family,
    gen_forall_or,
    gen_parity,
    gen_qmajority,
    iter_models,
    normalize_clause,
    parse_qdimacs,
    restrict_qbf,
    satisfying_play,
    write_qdimacs,
)


logger = logging.getLogger(__name__)


_E = QuantifierEnum.EXISTS
_A = QuantifierEnum.FORALL


def test_parse_qdimacs():
    logger.info("Testing QDIMACS parsing...")

    _qbf = parse_qdimacs("c comment\np cnf 3 2\ne 1 0\na 2 0\ne 3 0\n1 2 0\n-1 -2 3 0\n")
    assert _qbf.prefix == ((_E, 1), (_A, 2), (_E, 3))
    assert _qbf.clauses == ((1, 2), (-1, -2, 3))
    assert _qbf.universals == [2]
    assert _qbf.existentials == [1, 3]
    assert _qbf.left_of(3) == [1, 2]
    assert _qbf.is_left_of(1, 2)
    assert not _qbf.is_left_of(3, 2)

    _again = parse_qdimacs(write_qdimacs(_qbf))
    assert _again.prefix == _qbf.prefix
    assert _again.clauses == _qbf.clauses

    logger.info("Done: QDIMACS parsing.\n")


def test_write_qdimacs_groups_blocks():
    logger.info("Testing QDIMACS writing...")

    _text = write_qdimacs(gen_forall_or(3))
    assert _text == "p cnf 3 1\na 1 2 3 0\n1 2 3 0\n"

    logger.info("Done: QDIMACS writing.\n")


@pytest.mark.parametrize(
    "text, line",
    [
        ("e 1 0\n1 0\n", 1),
        ("p cnf 1 1\np cnf 1 1\ne 1 0\n1 0\n", 2),
        ("p cnf 2 1\ne 1 0\n1 y 0\n", 3),
        ("p cnf 2 1\ne 1 0\n1 0\na 2 0\n", 4),
        ("p cnf 1 1\ne 1 0\n2 0\n", 3),
        ("p cnf 1 1\ne 1 0\n1\n", 3),
        ("p cnf 1 2\ne 1 0\n1 0\n", 1),
    ],
)
def test_parse_qdimacs_errors(text: str, line: int):
    logger.info("Testing QDIMACS parse errors...")

    with pytest.raises(ParseError) as _info:
        parse_qdimacs(text)

    assert _info.value.line == line

    logger.info("Done: QDIMACS parse errors.\n")


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("p cnf 2 1\ne 1 9 0\n1 0\n", 2, 5),
        ("p cnf 2 1\n  e 1 3 0\n1 0\n", 2, 7),
        ("p cnf 2 1\ne 1 2 0\n1  -7 0\n", 3, 4),
        ("p cnf 2 1\ne 1 0\n1 y 0\n", 3, 3),
        ("p cnf x 1\n", 1, 7),
        ("p cnf 2 1\ne 1 2\n", 2, 5),
        ("p cnf 2 1\ne 1 2 0\na 2 0\n1 0\n", 3, 3),
    ],
)
def test_parse_qdimacs_error_columns(text: str, line: int, column: int):
    logger.info("Testing QDIMACS error positions...")

    with pytest.raises(ParseError) as _info:
        parse_qdimacs(text)

    assert (_info.value.line, _info.value.column) == (line, column)

    logger.info("Done: QDIMACS error positions.\n")


def test_free_and_tautological_clauses():
    logger.info("Testing free variables and tautologies...")

    with pytest.raises(UndeclaredVariableError):
        parse_qdimacs("p cnf 2 1\na 2 0\n1 2 0\n")

    _qbf = parse_qdimacs("p cnf 2 1\na 2 0\n1 2 0\n", allow_free=True)
    assert _qbf.prefix == ((_E, 1), (_A, 2))

    with pytest.raises(TautologyError):
        parse_qdimacs("p cnf 1 1\ne 1 0\n1 -1 0\n")

    with pytest.raises(TautologyError):
        normalize_clause([3, -1, 1])

    assert normalize_clause([3, -1, 3]) == (-1, 3)

    with pytest.raises(ValueError):
        normalize_clause([1, 0])

    logger.info("Done: Free variables and tautologies.\n")


def test_evaluate_qbf(forall_u, exists_forall, forall_exists):
    logger.info("Testing QBF evaluation...")

    assert not evaluate_qbf(forall_u)
    assert not evaluate_qbf(exists_forall)
    assert evaluate_qbf(forall_exists)
    assert evaluate_qbf(parse_qdimacs("p cnf 1 1\ne 1 0\n1 0\n"))

    for _n in (1, 2, 3, 4):
        for _family in ("forall_or", "parity", "equality", "qmajority"):
            assert not evaluate_qbf(gen_family(_family, _n)), f"{_family} n={_n}"

    with pytest.raises(TooLargeError):
        evaluate_qbf(gen_parity(3), max_vars=3)

    logger.info("Done: QBF evaluation.\n")


def test_iter_models(forall_exists):
    logger.info("Testing model enumeration...")

    _models = sorted(tuple(sorted(_m.items())) for _m in iter_models(forall_exists))
    assert _models == [((1, 0), (2, 1)), ((1, 1), (2, 0))]

    assert len(list(iter_models(gen_parity(2)))) == 4

    with pytest.raises(TooLargeError):
        list(iter_models(forall_exists, max_models=1))

    logger.info("Done: Model enumeration.\n")


def test_restrict_qbf(exists_forall):
    logger.info("Testing restriction of existential variables...")

    _true = restrict_qbf(exists_forall, 1, 1)
    assert _true.prefix == ((_A, 2),)
    assert _true.clauses == ((2,),)

    _clauses = parse_qdimacs("p cnf 2 2\ne 1 0\na 2 0\n1 2 0\n-1 0\n")
    assert restrict_qbf(_clauses, 1, 1).clauses == ((),)

    with pytest.raises(NotExistentialError):
        restrict_qbf(exists_forall, 2, 0)

    logger.info("Done: Restriction of existential variables.\n")


def test_axioms(exists_forall):
    logger.info("Testing the polynomial encoding...")

    assert str(clause_monomial((1, -2))) == "~x1*x2"
    assert axiom_poly(exists_forall, AxiomId.clause(1)) == parse_poly("x1*~x2")
    assert axiom_poly(exists_forall, AxiomId.boolean(2)) == parse_poly("x2^2 - x2")
    assert axiom_poly(exists_forall, AxiomId.twin(1)) == parse_poly("x1 + ~x1 - 1")
    assert str(AxiomId.clause(0)) == "clause 0"
    assert len(encoding_axioms(exists_forall)) == 2 + 2 * 2

    with pytest.raises(InvalidAxiomIdError):
        axiom_poly(exists_forall, AxiomId.clause(5))

    with pytest.raises(InvalidAxiomIdError):
        axiom_poly(exists_forall, AxiomId.twin(7))

    logger.info("Done: Polynomial encoding.\n")


def test_clause_axioms_vanish_exactly_on_satisfying_points():
    logger.info("Testing clause axioms on every Boolean point...")

    _rng = random.Random(17)
    _formulas = [gen_forall_or(_n) for _n in (1, 2, 3, 4)]
    for _ in range(40):
        _n = _rng.randint(1, 4)
        _clauses = []
        for _ in range(_rng.randint(1, 5)):
            _vars = _rng.sample(range(1, _n + 1), _rng.randint(1, _n))
            _clauses.append(tuple(_v if _rng.random() < 0.5 else -_v for _v in _vars))

        _prefix = tuple((_rng.choice((_E, _A)), _v) for _v in range(1, _n + 1))
        _formulas.append(Qbf(prefix=_prefix, clauses=tuple(_clauses)))

    for _qbf in _formulas:
        for _index, _clause in enumerate(_qbf.clauses):
            _poly = axiom_poly(_qbf, AxiomId.clause(_index))
            for _alpha in iter_assignments(_qbf.variables):
                _satisfied = any((_alpha[abs(_l)] == 1) == (0 < _l) for _l in _clause)
                assert (_poly.evaluate(_alpha) == 0) == _satisfied

    logger.info("Done: Clause axioms on every Boolean point.\n")


def test_families():
    logger.info("Testing benchmark families...")

    assert gen_forall_or(4).num_vars == 4
    assert len(gen_forall_or(4).clauses) == 1

    for _n in (1, 2, 3):
        _parity = gen_parity(_n)
        assert _parity.num_vars == 2 * _n + 1
        assert len(_parity.clauses) == 4 * (_n - 1) + 4
        assert _parity.universals == [_n + 1]

        _equality = gen_equality(_n)
        assert _equality.num_vars == 3 * _n
        assert len(_equality.clauses) == 2 * _n + 1
        assert _equality.clauses[-1] == tuple(range(2 * _n + 1, 3 * _n + 1))

        assert gen_qmajority(_n).universals == [_n + 1]

    assert gen_family("forall_or", 3).clauses == gen_forall_or(3).clauses
    assert gen_family("QMajority", 3).prefix == gen_qmajority(3).prefix

    with pytest.raises(InvalidSizeError):
        gen_family("parity", 0)

    logger.info("Done: Benchmark families.\n")


def test_countermodels(forall_exists):
    logger.info("Testing evaluation-game countermodels...")

    assert find_countermodel(forall_exists) is None

    for _qbf in (gen_forall_or(2), gen_parity(2), gen_equality(2), gen_qmajority(3)):
        _tau = find_countermodel(_qbf)
        assert _tau is not None
        assert satisfying_play(_qbf, _tau.decide) is None

    _losing = EvalStrategy.constant(gen_forall_or(1), 1)
    assert satisfying_play(gen_forall_or(1), _losing.decide) == {1: 1}

    logger.info("Done: Evaluation-game countermodels.\n")
