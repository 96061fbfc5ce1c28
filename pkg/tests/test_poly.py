import random
import logging
import itertools
from fractions import Fraction

import pytest

from qbf_algproof.exceptions import ParseError, UnassignedVariableError
from qbf_algproof.poly import (
    ExtVar,
    Monomial,
    ONE,
    Polynomial,
    add,
    mul,
    format_poly,
    parse_poly,
    evaluate,
    restrict,
    scale,
    indicator,
    ind_rho,
)


logger = logging.getLogger(__name__)


def test_parse_and_format():
    logger.info("Testing polynomial text grammar...")

    _p = parse_poly("1 - 3/2 * x2 * ~x3^2")
    assert format_poly(_p) == "-3/2*x2*~x3^2 + 1"
    assert _p.degree == 3
    assert _p.variables == {2, 3}
    assert _p.constant_term() == 1
    assert parse_poly(format_poly(_p)) == _p

    assert format_poly(parse_poly("x1 - x1")) == "0"
    assert format_poly(parse_poly("2*x1 + x1 - 1")) == "3*x1 - 1"
    assert str(parse_poly("x1*x1")) == "x1^2"

    logger.info("Done: Polynomial text grammar.\n")


@pytest.mark.parametrize("text", ["", "x1 +", "2*y1", "x0", "1/0", "x1**2"])
def test_parse_errors(text: str):
    logger.info(f"Testing polynomial parse error on {text!r}...")

    with pytest.raises(ParseError):
        parse_poly(text)

    logger.info("Done: Polynomial parse error.\n")


def test_monomials():
    logger.info("Testing monomial arithmetic...")

    _x1 = ExtVar(1)
    assert str(_x1.bar) == "~x1"
    assert _x1.bar.bar == _x1

    _m = Monomial([(_x1, 2), ((3, True), 1)])
    assert str(_m) == "x1^2*~x3"
    assert _m.degree == 3
    assert _m.bases == {1, 3}
    assert _m.exponent(_x1) == 2
    assert Monomial.of(_x1).divides(_m)
    assert _m / Monomial.of(_x1, 2) == Monomial.of(ExtVar(3, True))
    assert (Monomial.of(_x1) * ONE) == Monomial.of(_x1)
    assert ONE.is_one

    with pytest.raises(ValueError):
        Monomial.of(ExtVar(2)) / _m

    logger.info("Done: Monomial arithmetic.\n")


def test_arithmetic_is_exact():
    logger.info("Testing exact polynomial arithmetic...")

    _x1 = Polynomial.var(1)
    assert (_x1 + 1) ** 2 == parse_poly("x1^2 + 2*x1 + 1")
    assert (_x1 + 1) * (_x1 - 1) == parse_poly("x1^2 - 1")
    assert (1 - _x1) + _x1 == 1

    _p = parse_poly("x1*~x2 + 2/3")
    assert scale(_p, Fraction(1, 3)) * 3 == _p
    assert (_p - _p).is_zero
    assert len(_p) == 2

    with pytest.raises(TypeError):
        Polynomial.constant(0.5)

    logger.info("Done: Exact polynomial arithmetic.\n")


def test_evaluate_reads_twins_as_complements():
    logger.info("Testing Boolean evaluation...")

    _p = parse_poly("x1*~x2")
    assert evaluate(_p, {1: 1, 2: 0}) == 1
    assert evaluate(_p, {1: 1, 2: 1}) == 0
    assert evaluate(parse_poly("3*~x1 - 1/2"), {1: 0}) == Fraction(5, 2)

    with pytest.raises(UnassignedVariableError):
        evaluate(parse_poly("x2"), {1: 1})

    with pytest.raises(ValueError):
        evaluate(parse_poly("x1"), {1: 2})

    logger.info("Done: Boolean evaluation.\n")


def test_restrict():
    logger.info("Testing restriction...")

    _p = parse_poly("x1*x2 + ~x1")
    assert restrict(_p, 1, 0) == 1
    assert restrict(_p, 1, 1) == parse_poly("x2")
    assert restrict(_p, 3, 1) == _p

    with pytest.raises(ValueError):
        restrict(_p, 1, 2)

    logger.info("Done: Restriction.\n")


def test_indicators():
    logger.info("Testing indicator polynomials...")

    _alpha = {1: 1, 2: 0}
    _monomial = indicator(_alpha)
    assert str(_monomial) == "x1*~x2"
    for _bits in itertools.product((0, 1), repeat=2):
        _point = {1: _bits[0], 2: _bits[1]}
        assert _monomial.evaluate(_point) == int(_point == _alpha)

    assert ind_rho(_alpha) == parse_poly("x1 - x1*x2")
    assert ind_rho({}) == 1

    _sum = Polynomial.zero()
    for _bits in itertools.product((0, 1), repeat=3):
        _sum = _sum + ind_rho({1: _bits[0], 2: _bits[1], 3: _bits[2]})

    assert _sum == 1

    logger.info("Done: Indicator polynomials.\n")


def _random_poly(rng: random.Random, n: int) -> Polynomial:
    _terms: dict[Monomial, Fraction] = {}
    for _ in range(rng.randint(0, 4)):
        _factors = [
            (ExtVar(rng.randint(1, n), rng.random() < 0.5), rng.randint(1, 2))
            for _ in range(rng.randint(0, 3))
        ]
        _terms[Monomial(_factors)] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))

    return Polynomial(_terms)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_evaluation_is_a_homomorphism(n: int):
    logger.info(f"Testing evaluation against sums, products and restriction over {n} variables...")

    _rng = random.Random(100 + n)
    _points = [dict(zip(range(1, n + 1), _bits)) for _bits in itertools.product((0, 1), repeat=n)]
    for _ in range(15):
        _p, _q = _random_poly(_rng, n), _random_poly(_rng, n)
        _sum, _product = add(_p, _q), mul(_p, _q)
        for _alpha in _points:
            _p_val, _q_val = evaluate(_p, _alpha), evaluate(_q, _alpha)
            assert evaluate(_sum, _alpha) == _p_val + _q_val
            assert evaluate(_product, _alpha) == _p_val * _q_val

            _var = _rng.randint(1, n)
            _rest = {_v: _b for _v, _b in _alpha.items() if _v != _var}
            assert evaluate(restrict(_p, _var, _alpha[_var]), _rest) == _p_val

    logger.info("Done: Evaluation against sums, products and restriction.\n")
