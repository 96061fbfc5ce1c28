import json
import logging
from pathlib import Path

import pytest

from qbf_algproof.cli import main


logger = logging.getLogger(__name__)


_FORALL_U = "p cnf 1 1\na 1 0\n1 0\n"
_EXISTS_FORALL = "p cnf 2 2\ne 1 0\na 2 0\n1 2 0\n-1 2 0\n"
_FORALL_EXISTS = "p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n-1 -2 0\n"
_QNS = "qcert QNS\np clause 0 : -2\np twin 1 : 2\nu 1 : 1\n"


def _write(tmp_path: Path, name: str, text: str) -> str:
    _path = tmp_path / name
    _path.write_text(text, encoding="utf-8")
    return str(_path)


def test_gen(tmp_path: Path, capsys: pytest.CaptureFixture[str]):
    logger.info("Testing 'gen'...")

    assert main(["gen", "--family", "forall_or", "--n", "2"]) == 0
    _captured = capsys.readouterr()
    assert _captured.out.startswith("p cnf 2 1\n")
    assert "a 1 2 0" in _captured.out
    assert "verdict: written" in _captured.err
    assert "clauses: 1" in _captured.err

    _output = tmp_path / "parity.qdimacs"
    assert main(["gen", "--family", "parity", "--n", "2", "-o", str(_output)]) == 0
    assert _output.read_text(encoding="utf-8").startswith("p cnf ")
    assert f"output: {_output}" in capsys.readouterr().out

    assert main(["gen", "--family", "nope", "--n", "2"]) == 2

    logger.info("Done: 'gen'.\n")


def test_check(tmp_path: Path, capsys: pytest.CaptureFixture[str]):
    logger.info("Testing 'check'...")

    _qbf = _write(tmp_path, "u.qdimacs", _FORALL_U)
    _cert = _write(tmp_path, "ok.qcert", _QNS)
    assert main(["check", "--qbf", _qbf, "--cert", _cert]) == 0
    _out = capsys.readouterr().out
    assert "command: check\nverdict: accepted\n" in _out
    assert "qsize: 1" in _out

    _broken = _write(tmp_path, "broken.qcert", _QNS.replace("-2", "-3"))
    assert main(["check", "--qbf", _qbf, "--cert", _broken]) == 1
    _out = capsys.readouterr().out
    assert "verdict: rejected" in _out
    assert "error: " in _out

    _proof = _write(tmp_path, "proof.wres", "ax 2 : 1 0\nred 1 1 : 0\n")
    assert main(["check", "--qbf", _qbf, "--proof", _proof, "--format", "wres"]) == 0
    assert "format: wres" in capsys.readouterr().out

    assert main(["check", "--qbf", _qbf, "--proof", _proof]) == 2

    logger.info("Done: 'check'.\n")


def test_usage_errors(tmp_path: Path, capsys: pytest.CaptureFixture[str]):
    logger.info("Testing usage and input errors...")

    _qbf = _write(tmp_path, "u.qdimacs", _FORALL_U)
    _garbage = _write(tmp_path, "garbage.qcert", "not a certificate\n")
    assert main(["check", "--qbf", _qbf, "--cert", _garbage]) == 2
    assert "ParseError" in capsys.readouterr().err

    assert main(["check", "--qbf", str(tmp_path / "missing.qdimacs"), "--cert", _garbage]) == 2
    assert main(["check", "--qbf", _qbf]) == 2
    assert main([]) == 2
    assert main(["--version"]) == 0

    logger.info("Done: Usage and input errors.\n")


def test_play(tmp_path: Path, capsys: pytest.CaptureFixture[str]):
    logger.info("Testing 'play'...")

    _qbf = _write(tmp_path, "u.qdimacs", _FORALL_U)
    _winning = _write(tmp_path, "win.strategy", "u 1 : 1\n")
    assert main(["play", "--qbf", _qbf, "--strategy", _winning, "--variant", "2"]) == 0
    assert "verdict: winning" in capsys.readouterr().out

    _losing = _write(tmp_path, "lose.strategy", "u 1 : -1\n")
    assert main(["play", "--qbf", _qbf, "--strategy", _losing]) == 1
    _out = capsys.readouterr().out
    assert "verdict: losing" in _out
    assert "counterexample: 1=1" in _out

    logger.info("Done: 'play'.\n")


def test_compile_complete_extract(tmp_path: Path, capsys: pytest.CaptureFixture[str]):
    logger.info("Testing 'compile', 'complete' and 'extract'...")

    _qbf = _write(tmp_path, "u.qdimacs", _FORALL_U)
    _strategy = _write(tmp_path, "win.strategy", "u 1 : 1\n")
    assert main(["compile", "--qbf", _qbf, "--strategy", _strategy, "--variant", "2"]) == 0
    _captured = capsys.readouterr()
    assert _captured.out.startswith("qcert QNS\n")
    assert "system: QNS" in _captured.err

    _ef = _write(tmp_path, "ef.qdimacs", _EXISTS_FORALL)
    _cert = tmp_path / "ef.qcert"
    assert main(["complete", "--qbf", _ef, "-o", str(_cert)]) == 0
    assert _cert.read_text(encoding="utf-8").startswith("qcert QNS\n")
    capsys.readouterr()

    assert main(["extract", "--qbf", _ef, "--cert", str(_cert)]) == 0
    _captured = capsys.readouterr()
    assert "verdict: accepted" in _captured.err
    assert "ptf_size: " in _captured.err

    assert main(["extract", "--qbf", _ef, "--cert", str(_cert), "--tables"]) == 0
    assert capsys.readouterr().out.startswith("t 2 ")

    logger.info("Done: 'compile', 'complete' and 'extract'.\n")


def test_translate(tmp_path: Path, capsys: pytest.CaptureFixture[str]):
    logger.info("Testing 'translate'...")

    _qbf = _write(tmp_path, "ef.qdimacs", _EXISTS_FORALL)
    _qures = _write(tmp_path, "proof.qures", "a 0\na 1\nr 0 1 1\nd 2 2\n")
    _args = ["translate", "--qbf", _qbf, "--from", "qures", "--to", "wres", "--input", _qures]
    assert main(_args) == 0
    _captured = capsys.readouterr()
    assert _captured.out.startswith("ax ")
    assert "from: qures" in _captured.err

    _wres = tmp_path / "proof.wres"
    assert main(_args + ["-o", str(_wres)]) == 0
    _args = ["translate", "--qbf", _qbf, "--from", "wres", "--to", "qsa", "--input", str(_wres)]
    assert main(_args) == 0
    assert capsys.readouterr().out.startswith("qcert QSA\n")

    _args = ["translate", "--qbf", _qbf, "--from", "qns", "--to", "qsa", "--input", _qures]
    assert main(_args) == 2

    logger.info("Done: 'translate'.\n")


def test_search(tmp_path: Path, capsys: pytest.CaptureFixture[str]):
    logger.info("Testing 'search'...")

    _false = _write(tmp_path, "ef.qdimacs", _EXISTS_FORALL)
    _emit = tmp_path / "found.qcert"
    assert main(["search", "--qbf", _false, "--emit", str(_emit)]) == 0
    _out = capsys.readouterr().out
    assert "verdict: feasible" in _out
    assert "system: QSA" in _out
    assert "mode: GAME" in _out
    assert _emit.read_text(encoding="utf-8").startswith("qcert QSA\n")

    _true = _write(tmp_path, "fe.qdimacs", _FORALL_EXISTS)
    assert main(["search", "--qbf", _true, "--system", "qns"]) == 1
    assert "verdict: infeasible" in capsys.readouterr().out

    logger.info("Done: 'search'.\n")


def test_pexp(tmp_path: Path, capsys: pytest.CaptureFixture[str]):
    logger.info("Testing 'pexp'...")

    _qbf = tmp_path / "eq.qdimacs"
    assert main(["gen", "--family", "equality", "--n", "2", "-o", str(_qbf)]) == 0
    capsys.readouterr()

    _cert = _write(tmp_path, "empty.qcert", "qcert QSA\n")
    assert main(["pexp", "--qbf", str(_qbf), "--cert", _cert]) == 0
    _out = capsys.readouterr().out
    assert "n: 2" in _out
    assert "e_one: 1" in _out
    assert "refutation_excluded: true" in _out

    logger.info("Done: 'pexp'.\n")


def test_report_file_and_config(tmp_path: Path, capsys: pytest.CaptureFixture[str]):
    logger.info("Testing report files and config files...")

    _qbf = _write(tmp_path, "u.qdimacs", _FORALL_U)
    _cert = _write(tmp_path, "ok.qcert", _QNS)
    _report = tmp_path / "report.json"
    _args = ["--report-file", str(_report), "--timings", "check", "--qbf", _qbf, "--cert", _cert]
    assert main(_args) == 0
    assert "time.total: " in capsys.readouterr().out

    _data = json.loads(_report.read_text(encoding="utf-8"))
    assert _data["verdict"] == "accepted"
    assert _data["measures"]["qsize"] == 1
    assert "error" not in _data

    _ef = _write(tmp_path, "ef.qdimacs", _EXISTS_FORALL)
    _config = _write(tmp_path, "config.yml", "qalg:\n  max_vars: 1\n")
    assert main(["--config", _config, "search", "--qbf", _ef]) == 1
    assert "error: TooLargeError" in capsys.readouterr().out

    _invalid = _write(tmp_path, "invalid.yml", "max_vars: 0\n")
    assert main(["--config", _invalid, "search", "--qbf", _ef]) == 2
    assert "invalid settings" in capsys.readouterr().err

    assert main(["--max-vars", "1", "search", "--qbf", _ef]) == 1

    # two models: (x1, u2) = (0, 1) and (1, 1)
    _strategy = _write(tmp_path, "ef.strategy", "u 2 : 1\n")
    assert main(["play", "--qbf", _ef, "--strategy", _strategy]) == 0
    capsys.readouterr()

    _models_cap = _write(tmp_path, "models.yml", "qalg:\n  max_models: 1\n")
    assert main(["--config", _models_cap, "play", "--qbf", _ef, "--strategy", _strategy]) == 1
    assert "error: TooLargeError" in capsys.readouterr().out

    logger.info("Done: Report files and config files.\n")
