import random
import logging
from fractions import Fraction

import pytest
from pydantic import ValidationError

from qbf_algproof.constants import ProofSystemEnum
from qbf_algproof.exceptions import InvalidAxiomIdError, PexpError, QdegTooHighError
from qbf_algproof.poly import Monomial, ExtVar, Polynomial, parse_poly
from qbf_algproof.qbf import AxiomId, clause_monomial, gen_equality, gen_forall_or
from qbf_algproof.cert import Certificate
from qbf_algproof.game import complete_from_countermodel
from qbf_algproof.pexp import EqualityPE, audit, build_equality_pe, pe_evaluate


logger = logging.getLogger(__name__)


def _random_poly(
    rng: random.Random, variables: list[int], max_degree: int, max_exponent: int = 2
) -> Polynomial:
    _terms: dict[Monomial, Fraction] = {}
    for _ in range(rng.randint(1, 3)):
        _size = rng.randint(0, min(max_degree, len(variables)))
        _factors = [
            (ExtVar(_v, rng.random() < 0.5), rng.randint(1, max_exponent))
            for _v in rng.sample(variables, _size)
        ]
        _terms[Monomial(_factors)] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))

    return Polynomial(_terms)


def _random_candidate(rng: random.Random, n: int) -> Certificate:
    """Pieces the functional cannot cancel: clause multiples without the `t` clause, literal
    remainders with non-negative coefficients and `q_u` below qdeg `n`."""

    _all = list(range(1, 3 * n + 1))
    _multipliers: dict[AxiomId, Polynomial] = {}
    for _index in range(2 * n):
        if rng.random() < 0.6:
            _multipliers[AxiomId.clause(_index)] = _random_poly(rng, _all, 2)

    for _v in rng.sample(_all, 2):
        _multipliers[AxiomId.boolean(_v)] = _random_poly(rng, _all, 2)
        _multipliers[AxiomId.twin(_v)] = _random_poly(rng, _all, 2)

    _remainder: dict[Monomial, Fraction] = {}
    for _ in range(rng.randint(0, 3)):
        _factors = [(ExtVar(_v, rng.random() < 0.5), 1) for _v in rng.sample(_all, 2)]
        _remainder[Monomial(_factors)] = Fraction(rng.randint(0, 4))

    _universal: dict[int, Polynomial] = {}
    for _i in range(1, n + 1):
        _u = n + _i
        _left_x = list(range(1, n + 1))
        _left_u = list(range(n + 1, _u))
        _x_part = _random_poly(rng, _left_x, n - 1, max_exponent=1)
        _u_part = _random_poly(rng, _left_u, len(_left_u)) if _left_u else Polynomial.constant(1)
        _universal[_u] = _x_part * _u_part

    return Certificate(
        system=ProofSystemEnum.QSA,
        multipliers=_multipliers,
        universal=_universal,
        remainder=Polynomial(_remainder),
    )


def test_equality_pe():
    logger.info("Testing the Equality functional...")

    _pe = EqualityPE(n=1, gamma=(1,))
    assert pe_evaluate(_pe, Polynomial.constant(1)) == 1
    assert pe_evaluate(_pe, parse_poly("x1")) == Fraction(1, 2)
    assert pe_evaluate(_pe, parse_poly("x3")) == Fraction(1, 2)
    assert pe_evaluate(_pe, parse_poly("x1*x3")) == 0
    assert pe_evaluate(_pe, parse_poly("~x2")) == 0
    assert pe_evaluate(_pe, parse_poly("x1^2 - x1")) == 0

    # every clause but the last vanishes on the support
    _qbf = gen_equality(2)
    _pe = EqualityPE(n=2, gamma=(0, 1))
    _clauses = [Polynomial.from_monomial(clause_monomial(_c)) for _c in _qbf.clauses]
    assert [pe_evaluate(_pe, _c) for _c in _clauses] == [0, 0, 0, 0, Fraction(1, 4)]

    for _gamma in ((0, 2), (0,), (1, 1, 1)):
        with pytest.raises(ValidationError):
            EqualityPE(n=2, gamma=_gamma)

    logger.info("Done: Equality functional.\n")


def test_build_equality_pe():
    logger.info("Testing functional selection...")

    assert build_equality_pe(2, Certificate(system="QSA")).gamma == (0, 0)

    # q_u3 = 1 rewards u3 = 0, q_u4 = -x1 rewards u4 = 1
    _cert = Certificate(system="QSA", universal={3: parse_poly("1"), 4: parse_poly("-x1")})
    assert build_equality_pe(2, _cert).gamma == (0, 1)

    with pytest.raises(QdegTooHighError):
        build_equality_pe(2, Certificate(system="QSA", universal={3: parse_poly("x1*x2")}))

    logger.info("Done: Functional selection.\n")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_audit_random_candidates(n: int):
    logger.info(f"Testing audits of random candidates for n={n}...")

    _qbf = gen_equality(n)
    _rng = random.Random(n)
    for _ in range(100):
        _report = audit(_qbf, _random_candidate(_rng, n))
        assert _report.n == n
        assert _report.e_one == 1
        assert 0 <= _report.e_universal
        assert _report.conditions_hold
        assert _report.refutation_excluded
        assert 1 <= _report.e_total

    logger.info("Done: Audits of random candidates.\n")


@pytest.mark.parametrize("n", [1, 2])
def test_refutations_need_full_qdeg(n: int):
    logger.info(f"Testing that Equality refutations reach qdeg n={n}...")

    _qbf = gen_equality(n)
    with pytest.raises(QdegTooHighError):
        audit(_qbf, complete_from_countermodel(_qbf))

    logger.info("Done: Equality refutations reach full qdeg.\n")


def test_audit_rejects_other_formulas():
    logger.info("Testing audit input checks...")

    with pytest.raises(PexpError):
        audit(gen_forall_or(3), Certificate(system="QSA"))

    with pytest.raises(PexpError):
        audit(gen_forall_or(2), Certificate(system="QSA"))

    _bad = Certificate(system="QSA", multipliers={AxiomId.clause(9): parse_poly("1")})
    with pytest.raises(InvalidAxiomIdError):
        audit(gen_equality(2), _bad)

    logger.info("Done: Audit input checks.\n")
