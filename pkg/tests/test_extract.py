import logging

import pytest

from qbf_algproof.exceptions import NotVerifiedError, TooLargeError
from qbf_algproof.poly import parse_poly
from qbf_algproof.qbf import gen_forall_or, gen_parity, gen_qmajority
from qbf_algproof.cert import Certificate, parse_certificate, verify
from qbf_algproof.game import compile_v1_to_qsa, complete_from_countermodel, parse_strategy
from qbf_algproof.extract import (
    PtfCountermodel,
    extract,
    play_countermodel,
    ptf_truth_table,
    to_eval_strategy,
    validate_countermodel,
)


logger = logging.getLogger(__name__)


def test_extract_majority():
    logger.info("Testing countermodel extraction for Q-Majority...")

    _qbf = gen_qmajority(3)
    _cert = compile_v1_to_qsa(_qbf, parse_strategy("u 4 : -x1 - x2 - x3 + 5/4\n"))
    _model = extract(_qbf, _cert)
    assert _model.size == 4
    assert _model.degree == 1
    assert validate_countermodel(_qbf, _model).valid

    _table = ptf_truth_table(_model, 4)
    assert _table.domain == (1, 2, 3)
    assert set(_table.ones()) == {"011", "101", "110", "111"}

    _play = play_countermodel(_qbf, _model, {1: 1, 2: 1, 3: 0, 5: 0, 6: 0, 7: 0, 8: 0})
    assert _play[4] == 1

    logger.info("Done: Countermodel extraction for Q-Majority.\n")


def test_extract_from_completeness(exists_forall):
    logger.info("Testing extraction from completeness certificates...")

    for _qbf in (exists_forall, gen_forall_or(2), gen_parity(2)):
        _model = extract(_qbf, complete_from_countermodel(_qbf))
        assert validate_countermodel(_qbf, _model).valid

        # the tables feed back into the completeness construction
        verify(_qbf, complete_from_countermodel(_qbf, to_eval_strategy(_model)))

    logger.info("Done: Extraction from completeness certificates.\n")


def test_extract_rejects_unverified(forall_u):
    logger.info("Testing extraction from a rejected certificate...")

    _broken = parse_certificate("qcert QNS\np clause 0 : -3\np twin 1 : 2\nu 1 : 1\n")
    with pytest.raises(NotVerifiedError):
        extract(forall_u, _broken)

    with pytest.raises(NotVerifiedError):
        extract(forall_u, Certificate(system="QNS"))

    logger.info("Done: Extraction from a rejected certificate.\n")


def test_invalid_countermodel(forall_u):
    logger.info("Testing countermodel validation...")

    # sign(0) = +1 plays u = 0, which falsifies (u)
    _zero = PtfCountermodel(thresholds={}, domains={1: ()})
    assert validate_countermodel(forall_u, _zero).valid

    _wrong = PtfCountermodel(thresholds={1: parse_poly("-1")}, domains={1: ()})
    _check = validate_countermodel(forall_u, _wrong)
    assert not _check.valid
    assert _check.counterexample == {1: 1}

    with pytest.raises(TooLargeError):
        ptf_truth_table(PtfCountermodel(domains={2: (1,)}), 2, max_table_vars=0)

    logger.info("Done: Countermodel validation.\n")
