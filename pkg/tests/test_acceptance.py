import logging
from fractions import Fraction

import pytest

from qbf_algproof.constants import ProofSystemEnum
from qbf_algproof.qbf import evaluate_qbf, gen_family, gen_parity, gen_qmajority
from qbf_algproof.cert import (
    format_certificate,
    parse_certificate,
    qsa_to_qsos,
    qsos_to_qsa,
    verify,
)
from qbf_algproof.game import (
    check_winning,
    compile_v1_to_qsa,
    complete_from_countermodel,
    parse_strategy,
)
from qbf_algproof.extract import extract, ptf_truth_table, validate_countermodel
from qbf_algproof.proofs import (
    check_qpc,
    check_wres,
    qns_to_qpc,
    qpc_to_qsos,
    qsa_to_wres,
    wres_to_qsa,
)
from qbf_algproof.search import min_qdeg


logger = logging.getLogger(__name__)


def _majority_strategy(n: int) -> str:
    _inputs = " - ".join(f"x{_i}" for _i in range(1, n + 1))
    return f"u {n + 1} : -{_inputs} + {Fraction(2 * n - 1, 4)}\n"


@pytest.mark.parametrize(
    "family, n",
    [("forall_or", 2), ("parity", 1), ("equality", 1)],
)
def test_pipeline(family: str, n: int):
    logger.info(f"Testing the certificate pipeline on '{family}' n={n}...")

    _qbf = gen_family(family, n)
    assert not evaluate_qbf(_qbf)

    # completeness certificate, text round trip
    _qns = parse_certificate(format_certificate(complete_from_countermodel(_qbf)))
    assert _qns.system == ProofSystemEnum.QNS
    verify(_qbf, _qns)

    assert validate_countermodel(_qbf, extract(_qbf, _qns)).valid

    _qpc = qns_to_qpc(_qbf, _qns)
    check_qpc(_qbf, _qpc)
    _qsos = qpc_to_qsos(_qbf, _qpc)
    verify(_qbf, _qsos)

    _qsa = qsos_to_qsa(_qbf, _qsos)
    assert _qsa.system == ProofSystemEnum.QSA
    _qsize = verify(_qbf, _qsa).qsize

    _wres = qsa_to_wres(_qbf, _qsa)
    assert check_wres(_qbf, _wres).qsize == _qsize
    assert verify(_qbf, wres_to_qsa(_qbf, _wres)).qsize == _qsize

    logger.info("Done: Certificate pipeline.\n")


@pytest.mark.parametrize("n", [3, 5])
def test_majority_linear_qsize(n: int):
    logger.info(f"Testing the threshold strategy for Q-Majority n={n}...")

    _qbf = gen_qmajority(n)
    _strategy = parse_strategy(_majority_strategy(n))
    _check = check_winning(_qbf, _strategy, 1)
    assert _check.winning
    assert _check.min_score == Fraction(1, 4)

    _cert = compile_v1_to_qsa(_qbf, _strategy)
    _measures = verify(_qbf, _cert)
    assert _measures.qsize == n + 1
    assert _measures.qdeg == 1
    assert verify(_qbf, qsa_to_qsos(_cert)).qsize == n + 1

    logger.info("Done: Threshold strategy for Q-Majority.\n")


@pytest.mark.parametrize("n", [2, 3])
def test_parity_countermodel_is_xor(n: int):
    logger.info(f"Testing the extracted countermodel of parity n={n}...")

    _qbf = gen_parity(n)
    _, _cert = min_qdeg(_qbf, "qsa")
    _table = ptf_truth_table(extract(_qbf, _cert), n + 1)
    assert _table.domain == tuple(range(1, n + 1))
    for _key, _bit in _table.rows.items():
        assert _bit == _key.count("1") % 2

    logger.info("Done: Extracted countermodel of parity.\n")


def test_verify_benchmark(benchmark):
    logger.info("Benchmarking certificate verification...")

    _qbf = gen_family("parity", 3)
    _cert = complete_from_countermodel(_qbf)
    _measures = benchmark(verify, _qbf, _cert)
    assert _measures.qsize >= 1

    logger.info("Done: Benchmarking certificate verification.\n")
