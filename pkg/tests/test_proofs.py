import logging
import itertools
from fractions import Fraction

import pytest

from qbf_algproof.constants import ProofSystemEnum, QuResRuleEnum, WResRuleEnum
from qbf_algproof.exceptions import (
    FinalConfigViolationError,
    InvalidStepError,
    NotQSAError,
    NotRefutedError,
    ParseError,
    RemainderShapeViolatedError,
)
from qbf_algproof.poly import ExtVar, Monomial, Polynomial, parse_poly
from qbf_algproof.qbf import gen_forall_or, gen_parity
from qbf_algproof.cert import parse_certificate, verify
from qbf_algproof.game import complete_from_countermodel
from qbf_algproof.proofs import (
    WResProof,
    WResStep,
    check_qpc,
    check_qures,
    check_wres,
    derive_qpc,
    derive_qures,
    format_trace,
    parse_qpc,
    parse_qures,
    parse_trace,
    parse_wres,
    qns_to_qpc,
    qpc_to_qsos,
    qsa_to_wres,
    qures_to_wres,
    sos_identity_residuals,
    wclause,
    wres_configuration,
    wres_to_qsa,
)


logger = logging.getLogger(__name__)


_QURES = "a 0\na 1\nr 0 1 1\nd 2 2\n"
_QPC = "ax clause 0\nred 0 1 0\n"


def test_check_qures(exists_forall):
    logger.info("Testing QU-Res checking...")

    _proof = parse_qures(_QURES)
    assert derive_qures(exists_forall, _proof) == [(1, 2), (-1, 2), (2,), ()]
    _measures = check_qures(exists_forall, _proof)
    assert _measures.size == 4
    assert _measures.qsize == 1

    logger.info("Done: QU-Res checking.\n")


@pytest.mark.parametrize(
    "text, index",
    [
        ("a 0\na 1\nr 0 1 2\n", 2),
        ("a 0\nd 0 2\n", 1),
        ("a 0\na 1\nr 0 1 1\nd 2 1\n", 3),
        ("a 0\nr 0 3 1\n", 1),
        ("a 7\n", 0),
        ("a 0\na 1\nr 0 1 1\n", 2),
        ("", 0),
    ],
)
def test_check_qures_rejects(exists_forall, text: str, index: int):
    logger.info("Testing QU-Res rejections...")

    with pytest.raises(InvalidStepError) as _info:
        check_qures(exists_forall, parse_qures(text))

    assert _info.value.index == index

    logger.info("Done: QU-Res rejections.\n")


def test_qures_to_wres_to_qsa(exists_forall):
    logger.info("Testing QU-Res to Q-w-Res to QSA...")

    _wres = qures_to_wres(exists_forall, parse_qures(_QURES))
    assert all(isinstance(_step.weight, int) for _step in _wres.steps)
    _measures = check_wres(exists_forall, _wres)
    assert _measures.qsize == 1
    assert _measures.size <= exists_forall.num_vars * 4
    assert 0 < wres_configuration(exists_forall, _wres).empty_weight

    _cert = wres_to_qsa(exists_forall, _wres)
    assert _cert.system == ProofSystemEnum.QSA
    assert verify(exists_forall, _cert).qsize == 1

    _back = qsa_to_wres(exists_forall, _cert)
    assert sum(1 for _step in _back.steps if _step.rule == WResRuleEnum.RED) == 1
    check_wres(exists_forall, _back)

    logger.info("Done: QU-Res to Q-w-Res to QSA.\n")


@pytest.mark.parametrize(
    "text, size, reductions",
    [
        (_QURES, 4, 1),
        # reduce u2 from both clauses first, then resolve the units
        ("a 0\na 1\nd 0 2\nd 1 2\nr 2 3 1\n", 5, 2),
    ],
)
def test_qures_to_wres_bounds(exists_forall, text: str, size: int, reductions: int):
    logger.info("Testing the size bound of QU-Res to Q-w-Res...")

    _proof = parse_qures(text)
    _measures = check_qures(exists_forall, _proof)
    assert (_measures.size, _measures.qsize) == (size, reductions)
    assert sum(1 for _step in _proof.steps if _step.rule == QuResRuleEnum.REDUCE) == reductions

    _wres = qures_to_wres(exists_forall, _proof)
    _wres_measures = check_wres(exists_forall, _wres)
    assert _wres_measures.size <= exists_forall.num_vars * len(_proof.steps)
    assert _wres_measures.qsize == reductions
    assert sum(1 for _step in _wres.steps if _step.rule == WResRuleEnum.RED) == reductions

    logger.info("Done: Size bound of QU-Res to Q-w-Res.\n")


def test_check_wres(forall_u):
    logger.info("Testing Q-w-Res checking...")

    # reducing the positive literal u leaves the empty clause with half the weight
    _proof = parse_wres("ax 2 : 1 0\nred 1 1 : 0\n")
    assert _proof.steps[1].delta() == [((1,), -2), ((), 1)]
    _measures = check_wres(forall_u, _proof)
    assert _measures.size == 2
    assert _measures.qsize == 1

    with pytest.raises(FinalConfigViolationError):
        check_wres(forall_u, parse_wres("ax 1 : 1 0\nred 1 1 : 0\n"))

    with pytest.raises(FinalConfigViolationError):
        check_wres(forall_u, parse_wres("ax 2 : 1 0\n"))

    with pytest.raises(InvalidStepError):
        check_wres(forall_u, parse_wres("ax 1 : -1 0\n"))

    logger.info("Done: Q-w-Res checking.\n")


def test_wres_steps():
    logger.info("Testing Q-w-Res steps...")

    assert wclause([2, -1, 2]) == (-1, 2, 2)
    assert WResStep.cut([2], 1, 3).delta() == [((1, 2), -3), ((-1, 2), -3), ((2,), 3)]
    assert WResStep.idem([1], 2, 1).delta() == [((1, 2, 2), -1), ((1, 2), 1)]

    with pytest.raises(ValueError):
        WResStep.cut([2], -1, 1)

    with pytest.raises(ValueError):
        WResStep(rule=WResRuleEnum.AXIOM, weight=1, clause=(1,), literal=2)

    with pytest.raises(ValueError):
        wclause([1, 0])

    logger.info("Done: Q-w-Res steps.\n")


def test_qsa_to_wres_rejects_other_systems(forall_u):
    logger.info("Testing Q-w-Res translation input checks...")

    _qns = parse_certificate("qcert QNS\np clause 0 : -2\np twin 1 : 2\nu 1 : 1\n")
    with pytest.raises(NotQSAError):
        qsa_to_wres(forall_u, _qns)

    logger.info("Done: Q-w-Res translation input checks.\n")


def test_check_qpc(forall_u):
    logger.info("Testing Q-PC checking...")

    _proof = parse_qpc(_QPC)
    assert derive_qpc(forall_u, _proof) == [parse_poly("~x1"), parse_poly("1")]
    _measures = check_qpc(forall_u, _proof)
    assert _measures.size == 2
    assert _measures.qsize == 1

    with pytest.raises(NotRefutedError) as _info:
        check_qpc(forall_u, parse_qpc("ax clause 0\n"))

    assert _info.value.derived == parse_poly("~x1")

    with pytest.raises(NotRefutedError):
        check_qpc(forall_u, parse_qpc(""))

    with pytest.raises(InvalidStepError):
        check_qpc(forall_u, parse_qpc("ax clause 2\n"))

    with pytest.raises(InvalidStepError):
        check_qpc(forall_u, parse_qpc("ax clause 0\nred 1 1 0\n"))

    logger.info("Done: Q-PC checking.\n")


def test_qpc_reduction_needs_left_variables(exists_forall):
    logger.info("Testing Q-PC reduction side conditions...")

    # x1*~x2 mentions x1, left of u2, but reducing x1 itself is not allowed
    _proof = parse_qpc("ax clause 1\nred 0 1 1\n")
    with pytest.raises(InvalidStepError):
        check_qpc(exists_forall, _proof)

    _derived = derive_qpc(exists_forall, parse_qpc("ax clause 1\nred 0 2 0\n"))
    assert _derived[-1] == parse_poly("x1")

    logger.info("Done: Q-PC reduction side conditions.\n")


def test_qns_to_qpc_to_qsos(forall_u, exists_forall):
    logger.info("Testing QNS to Q-PC to QSOS...")

    _qns = parse_certificate("qcert QNS\np clause 0 : -2\np twin 1 : 2\nu 1 : 1\n")
    _qpc = qns_to_qpc(forall_u, _qns)
    check_qpc(forall_u, _qpc)
    assert verify(forall_u, qpc_to_qsos(forall_u, _qpc)).qsize >= 1

    _qsos = qpc_to_qsos(forall_u, parse_qpc(_QPC))
    assert _qsos.system == ProofSystemEnum.QSOS
    verify(forall_u, _qsos)

    for _qbf in (exists_forall, gen_forall_or(2), gen_parity(1)):
        _proof = qns_to_qpc(_qbf, complete_from_countermodel(_qbf))
        check_qpc(_qbf, _proof)
        verify(_qbf, qpc_to_qsos(_qbf, _proof))

    _qsa = parse_certificate("qcert QSA\np clause 0 : -2\np twin 1 : 2\nu 1 : 1\n")
    with pytest.raises(RemainderShapeViolatedError):
        qns_to_qpc(forall_u, _qsa)

    logger.info("Done: QNS to Q-PC to QSOS.\n")


def test_sos_identities():
    logger.info("Testing square identities...")

    _p = parse_poly("x1 - 2*x2 + 1/3")
    _q = parse_poly("x1*x2 - 1")
    for _a, _b in ((1, 1), (2, -3), (Fraction(1, 2), Fraction(-5, 7))):
        _residuals = sos_identity_residuals(_p, _q, var=2, universal=3, a=_a, b=_b)
        assert set(_residuals) == {"sum", "product", "reduce_to_p", "reduce_to_p_plus_q"}
        assert all(_r.is_zero for _r in _residuals.values())

    logger.info("Done: Square identities.\n")


def _small_polys() -> list[Polynomial]:
    """Every monomial of degree <= 2 over x1..x3, and every `m - 2 m'` for two of them."""

    _monomials = [
        Monomial((ExtVar(_v), 1) for _v in _vars)
        for _size in range(3)
        for _vars in itertools.combinations_with_replacement((1, 2, 3), _size)
    ]
    _polys = [Polynomial.from_monomial(_m) for _m in _monomials]
    for _m, _n in itertools.combinations(_monomials, 2):
        _polys.append(Polynomial.from_monomial(_m) - Polynomial.from_monomial(_n, 2))

    return _polys


def test_sos_identities_on_all_small_polynomials():
    logger.info("Testing square identities on every small polynomial pair...")

    _polys = _small_polys()
    assert len(_polys) == 10 + 45
    _coefs = ((1, 1), (2, -3), (Fraction(1, 2), Fraction(-5, 7)))
    _roles = ((1, 2), (2, 3), (3, 1))
    for _index, (_p, _q) in enumerate(itertools.product(_polys, repeat=2)):
        _a, _b = _coefs[_index % 3]
        _var, _universal = _roles[(_index // 3) % 3]
        _residuals = sos_identity_residuals(_p, _q, var=_var, universal=_universal, a=_a, b=_b)
        assert all(_r.is_zero for _r in _residuals.values()), (str(_p), str(_q))

    logger.info("Done: Square identities on every small polynomial pair.\n")


def test_trace_formats():
    logger.info("Testing proof trace formats...")

    _wres = "ax 2 : 1 0\nred 1 1 : 0\n"
    for _text, _format in ((_QURES, "qures"), (_QPC, "QPC"), (_wres, "wres")):
        _proof = parse_trace(_text, _format)
        assert format_trace(_proof) == _text

    _lin = parse_qpc("ax bool 1\nax twin 1\nlin 0 1 1/2 -3\nmul 2 ~x1\nscale 3 2\n")
    assert parse_qpc(format_trace(_lin)) == _lin

    for _text in ("x 0\n", "r 0 1 0\n", "d 0 0\n"):
        with pytest.raises(ParseError):
            parse_qures(_text)

    for _text in ("ax 1 : 1\n", "cut 1 -1 : 2 0\n", "ax 1 1 : 1 0\n", "res 1 : 1 0\n"):
        with pytest.raises(ParseError):
            parse_wres(_text)

    for _text in ("ax clause\n", "lin 0 1 1\n", "red 0 1 2\n", "mul 0 y1\n"):
        with pytest.raises(ParseError):
            parse_qpc(_text)

    assert parse_wres("# nothing\n") == WResProof()

    logger.info("Done: Proof trace formats.\n")
