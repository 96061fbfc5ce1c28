import sys
import time
import logging
import argparse
from collections.abc import Callable, Sequence

from pydantic import ValidationError

from ..__version__ import __version__
from .._base import is_debug_mode
from ..constants import FamilyEnum, SearchModeEnum, VariantEnum, VerdictEnum
from ..exceptions import NoneFoundError, ParseError, QalgError
from ..config import QalgSettings, load_settings, use_settings
from ..io import read_text_file, write_text_file, write_data_file
from ..qbf import Qbf, find_countermodel, gen_family, parse_qdimacs, write_qdimacs
from ..cert import format_certificate, parse_certificate, qsa_to_qsos, qsos_to_qsa, verify
from ..game import (
    ScoreStrategy,
    check_winning,
    compile_v1_to_qsa,
    compile_v2_to_qns,
    complete_from_countermodel,
    format_strategy,
    format_table,
    parse_strategy,
    parse_table,
)
from ..extract import extract, to_eval_strategy, validate_countermodel
from ..proofs import (
    check_qpc,
    check_qures,
    check_wres,
    format_qpc,
    format_wres,
    parse_qpc,
    parse_qures,
    parse_trace,
    parse_wres,
    qns_to_qpc,
    qpc_to_qsos,
    qsa_to_wres,
    qures_to_wres,
    wres_to_qsa,
)
from ..search import SearchBudget, min_qdeg, search
from ..pexp import audit
from .report import Report

logger = logging.getLogger(__name__)


_LOG_FORMAT = "[%(asctime)s | %(levelname)5s | %(filename)s:%(funcName)s:%(lineno)s]: %(message)s"

_TRANSLATIONS = {
    ("wres", "qsa"),
    ("qsa", "wres"),
    ("qures", "wres"),
    ("qns", "qpc"),
    ("qpc", "qsos"),
    ("qsa", "qsos"),
    ("qsos", "qsa"),
}


def _build_parser() -> argparse.ArgumentParser:
    _parser = argparse.ArgumentParser(
        prog="qbf-algproof",
        description="Check, build, translate and search semi-algebraic QBF refutations.",
    )
    _parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _parser.add_argument("--config", help="YAML, JSON or TOML settings file.")
    _parser.add_argument("--max-vars", type=int, help="Cap on variables of exhaustive procedures.")
    _parser.add_argument("--report-file", help="Also write the report as '.json' or '.yaml'.")
    _parser.add_argument("--log-level", help="Log level on stderr, for example 'INFO'.")
    _parser.add_argument("--timings", action="store_true", help="Add timings to the report.")

    _commands = _parser.add_subparsers(dest="command", required=True)

    _gen = _commands.add_parser("gen", help="Write a benchmark formula as QDIMACS.")
    _gen.add_argument(
        "--family", required=True, choices=[_f.value.lower() for _f in FamilyEnum]
    )
    _gen.add_argument("--n", type=int, required=True)
    _gen.add_argument("-o", "--output")

    _check = _commands.add_parser("check", help="Verify a certificate or a proof trace.")
    _check.add_argument("--qbf", required=True)
    _what = _check.add_mutually_exclusive_group(required=True)
    _what.add_argument("--cert")
    _what.add_argument("--proof")
    _check.add_argument("--format", choices=["qures", "wres", "qpc"])

    _play = _commands.add_parser("play", help="Check a score strategy in the score game.")
    _play.add_argument("--qbf", required=True)
    _play.add_argument("--strategy", required=True)
    _play.add_argument("--variant", type=int, choices=[1, 2], default=1)

    _compile = _commands.add_parser("compile", help="Compile a winning score strategy.")
    _compile.add_argument("--qbf", required=True)
    _compile.add_argument("--strategy", required=True)
    _compile.add_argument("--variant", type=int, choices=[1, 2], default=1)
    _compile.add_argument("--qsos", action="store_true", help="Convert a variant-1 result to QSOS.")
    _compile.add_argument("-o", "--output")

    _complete = _commands.add_parser(
        "complete", help="QNS certificate from an evaluation-game countermodel."
    )
    _complete.add_argument("--qbf", required=True)
    _complete.add_argument("--table")
    _complete.add_argument("-o", "--output")

    _extract = _commands.add_parser("extract", help="PTF countermodel of a certificate.")
    _extract.add_argument("--qbf", required=True)
    _extract.add_argument("--cert", required=True)
    _extract.add_argument("--tables", action="store_true", help="Emit decision tables.")
    _extract.add_argument("-o", "--output")

    _translate = _commands.add_parser("translate", help="Translate between proof systems.")
    _translate.add_argument("--qbf", required=True)
    _translate.add_argument(
        "--from",
        dest="source",
        required=True,
        choices=["wres", "qsa", "qures", "qns", "qpc", "qsos"],
    )
    _translate.add_argument(
        "--to", dest="target", required=True, choices=["qsa", "wres", "qpc", "qsos"]
    )
    _translate.add_argument("--input", required=True)
    _translate.add_argument("-o", "--output")

    _search = _commands.add_parser("search", help="Degree-bounded QNS/QSA refutation search.")
    _search.add_argument("--qbf", required=True)
    _search.add_argument("--system", choices=["qns", "qsa"], default="qsa")
    _search.add_argument("--deg", type=int, help="Degree budget; the variable count by default.")
    _search.add_argument("--qdeg", type=int)
    _search.add_argument("--mode", choices=["template", "game"])
    _search.add_argument("--min-qdeg", action="store_true", help="Sweep qdeg upwards from 0.")
    _search.add_argument("--max-unknowns", type=int)
    _search.add_argument("--emit", help="Write the certificate found to this file.")

    _pexp = _commands.add_parser("pexp", help="Pseudo-expectation audit for Equality.")
    _pexp.add_argument("--qbf", required=True)
    _pexp.add_argument("--cert", required=True)

    return _parser


def _read_qbf(path: str) -> Qbf:
    return parse_qdimacs(read_text_file(path))


def _emit(args: argparse.Namespace, report: Report, content: str, path: str | None = None) -> None:
    _path = path if path is not None else getattr(args, "output", None)
    if _path:
        write_text_file(_path, content)
        report.details["output"] = _path
    else:
        report.artifact = content

    return


def _cmd_gen(args: argparse.Namespace, settings: QalgSettings) -> Report:
    _qbf = gen_family(args.family, args.n)
    _report = Report(command="gen", verdict=VerdictEnum.WRITTEN)
    _report.details.update(
        {
            "family": args.family,
            "n": str(args.n),
            "variables": str(_qbf.num_vars),
            "clauses": str(len(_qbf.clauses)),
        }
    )
    _emit(args, _report, write_qdimacs(_qbf))
    return _report


def _cmd_check(args: argparse.Namespace, settings: QalgSettings) -> Report:
    _qbf = _read_qbf(args.qbf)
    _report = Report(command="check", verdict=VerdictEnum.ACCEPTED)
    if args.cert:
        _cert = parse_certificate(read_text_file(args.cert))
        _report.details["system"] = _cert.system.value
        _report.add_measures(verify(_qbf, _cert))
        return _report

    if not args.format:
        raise ValueError("'check --proof' needs '--format'!")

    _proof = parse_trace(read_text_file(args.proof), args.format)
    _checker = {"qures": check_qures, "wres": check_wres, "qpc": check_qpc}[args.format]
    _report.details["format"] = args.format
    _report.add_measures(_checker(_qbf, _proof))
    return _report


def _cmd_play(args: argparse.Namespace, settings: QalgSettings) -> Report:
    _qbf = _read_qbf(args.qbf)
    _strategy = parse_strategy(read_text_file(args.strategy))
    _check = check_winning(_qbf, _strategy, VariantEnum(args.variant), max_vars=settings.max_vars)
    _report = Report(
        command="play",
        verdict=VerdictEnum.WINNING if _check.winning else VerdictEnum.LOSING,
        counterexample=_check.counterexample,
    )
    _report.measures.update({"size": _strategy.size, "qdeg": _strategy.qdeg(_qbf)})
    _report.details.update({"variant": str(args.variant), "models": str(_check.models)})
    return _report


def _cmd_compile(args: argparse.Namespace, settings: QalgSettings) -> Report:
    _qbf = _read_qbf(args.qbf)
    _strategy = parse_strategy(read_text_file(args.strategy))
    if args.variant == VariantEnum.EXACT:
        _cert = compile_v2_to_qns(_qbf, _strategy, max_vars=settings.max_vars)
    else:
        _cert = compile_v1_to_qsa(_qbf, _strategy, qsos=args.qsos, max_vars=settings.max_vars)

    _report = Report(command="compile", verdict=VerdictEnum.ACCEPTED)
    _report.details["system"] = _cert.system.value
    _report.add_measures(verify(_qbf, _cert))
    _emit(args, _report, format_certificate(_cert))
    return _report


def _cmd_complete(args: argparse.Namespace, settings: QalgSettings) -> Report:
    _qbf = _read_qbf(args.qbf)
    if args.table:
        _tau = parse_table(read_text_file(args.table), _qbf)
    else:
        _tau = find_countermodel(_qbf, max_table_vars=settings.max_table_vars)

    _cert = complete_from_countermodel(_qbf, _tau)
    _report = Report(command="complete", verdict=VerdictEnum.ACCEPTED)
    _report.details["system"] = _cert.system.value
    _report.add_measures(verify(_qbf, _cert))
    _emit(args, _report, format_certificate(_cert))
    return _report


def _cmd_extract(args: argparse.Namespace, settings: QalgSettings) -> Report:
    _qbf = _read_qbf(args.qbf)
    _model = extract(_qbf, parse_certificate(read_text_file(args.cert)))
    _check = validate_countermodel(_qbf, _model, max_vars=settings.max_vars)
    _report = Report(
        command="extract",
        verdict=VerdictEnum.ACCEPTED if _check.valid else VerdictEnum.REJECTED,
        counterexample=_check.counterexample,
    )
    _report.measures.update({"ptf_size": _model.size, "ptf_degree": _model.degree})
    if args.tables:
        _content = format_table(to_eval_strategy(_model, max_table_vars=settings.max_table_vars))
    else:
        _content = format_strategy(ScoreStrategy(scores=dict(_model.thresholds)))

    _emit(args, _report, _content)
    return _report


def _cmd_translate(args: argparse.Namespace, settings: QalgSettings) -> Report:
    _pair = (args.source, args.target)
    if _pair not in _TRANSLATIONS:
        raise ValueError(f"No translation from '{args.source}' to '{args.target}'!")

    _qbf = _read_qbf(args.qbf)
    _text = read_text_file(args.input)
    _report = Report(command="translate", verdict=VerdictEnum.ACCEPTED)
    _report.details.update({"from": args.source, "to": args.target})

    if _pair == ("wres", "qsa"):
        _cert = wres_to_qsa(_qbf, parse_wres(_text))
    elif _pair == ("qpc", "qsos"):
        _cert = qpc_to_qsos(_qbf, parse_qpc(_text))
    elif _pair == ("qures", "wres"):
        _proof = qures_to_wres(_qbf, parse_qures(_text))
        _report.add_measures(check_wres(_qbf, _proof))
        _emit(args, _report, format_wres(_proof))
        return _report
    else:
        _source = parse_certificate(_text)
        if _pair == ("qsa", "wres"):
            _proof = qsa_to_wres(_qbf, _source)
            _report.add_measures(check_wres(_qbf, _proof))
            _emit(args, _report, format_wres(_proof))
            return _report

        if _pair == ("qns", "qpc"):
            _qpc = qns_to_qpc(_qbf, _source)
            _report.add_measures(check_qpc(_qbf, _qpc))
            _emit(args, _report, format_qpc(_qpc))
            return _report

        if _pair == ("qsa", "qsos"):
            _cert = qsa_to_qsos(_source)
        else:
            _cert = qsos_to_qsa(_qbf, _source, max_vars=settings.max_vars)

    _report.add_measures(verify(_qbf, _cert))
    _emit(args, _report, format_certificate(_cert))
    return _report


def _cmd_search(args: argparse.Namespace, settings: QalgSettings) -> Report:
    _qbf = _read_qbf(args.qbf)
    _degree = _qbf.num_vars if args.deg is None else args.deg
    _max_unknowns = args.max_unknowns or settings.max_unknowns
    _report = Report(command="search", verdict=VerdictEnum.FEASIBLE)
    _report.details.update({"system": args.system.upper(), "degree": str(_degree)})

    if args.min_qdeg:
        try:
            _qdeg, _cert = min_qdeg(
                _qbf,
                args.system,
                degree=_degree,
                max_qdeg=args.qdeg if args.qdeg is not None else settings.max_qdeg,
                max_vars=settings.max_vars,
                max_unknowns=_max_unknowns,
            )
        except NoneFoundError as err:
            _report.verdict = VerdictEnum.INFEASIBLE
            _report.error = str(err)
            return _report

        _report.details["min_qdeg"] = str(_qdeg)
    else:
        _budget = SearchBudget(
            degree=_degree,
            qdeg=args.qdeg,
            max_vars=settings.max_vars,
            max_unknowns=_max_unknowns,
        )
        _mode = SearchModeEnum(args.mode.upper()) if args.mode else None
        _result = search(_qbf, args.system, _budget, mode=_mode)
        _report.details["mode"] = _result.mode.value
        _report.details["qdeg_cap"] = str(_budget.qdeg_cap)
        if (not _result.feasible) or (_result.certificate is None):
            _report.verdict = VerdictEnum.INFEASIBLE
            return _report

        _cert = _result.certificate

    _report.add_measures(verify(_qbf, _cert))
    if args.emit:
        _emit(args, _report, format_certificate(_cert), path=args.emit)

    return _report


def _cmd_pexp(args: argparse.Namespace, settings: QalgSettings) -> Report:
    _qbf = _read_qbf(args.qbf)
    _audit = audit(_qbf, parse_certificate(read_text_file(args.cert)), max_vars=settings.max_vars)
    _ok = _audit.conditions_hold and _audit.refutation_excluded
    _report = Report(command="pexp", verdict=VerdictEnum.ACCEPTED if _ok else VerdictEnum.REJECTED)
    _report.details.update(
        {
            "n": str(_audit.n),
            "gamma": "".join(str(_bit) for _bit in _audit.gamma),
            "e_one": str(_audit.e_one),
            "e_propositional": str(_audit.e_propositional),
            "e_universal": str(_audit.e_universal),
            "e_total": str(_audit.e_total),
            "conditions_hold": str(_audit.conditions_hold).lower(),
            "refutation_excluded": str(_audit.refutation_excluded).lower(),
        }
    )
    return _report


_COMMANDS: dict[str, Callable[[argparse.Namespace, QalgSettings], Report]] = {
    "gen": _cmd_gen,
    "check": _cmd_check,
    "play": _cmd_play,
    "compile": _cmd_compile,
    "complete": _cmd_complete,
    "extract": _cmd_extract,
    "translate": _cmd_translate,
    "search": _cmd_search,
    "pexp": _cmd_pexp,
}


def _configure_logging(level: str) -> None:
    _level = "DEBUG" if is_debug_mode() else level.strip().upper()
    logging.basicConfig(stream=sys.stderr, level=_level, format=_LOG_FORMAT, force=True)
    return


def _print_report(report: Report) -> None:
    if report.artifact is None:
        sys.stdout.write(report.to_text())
        return

    # artifact on stdout, report on stderr
    sys.stdout.write(report.artifact)
    sys.stderr.write(report.to_text())
    return


def main(argv: Sequence[str] | None = None) -> int:
    """Run one command and return its exit code.

    0: accepted, feasible, winning or written. 1: clean rejection. 2: usage or I/O error.
    """

    _parser = _build_parser()
    try:
        _args = _parser.parse_args(argv)
    except SystemExit as err:
        return 0 if not err.code else 2

    try:
        _settings = load_settings(_args.config, max_vars=_args.max_vars, log_level=_args.log_level)
    except (OSError, ValueError, ValidationError) as err:
        sys.stderr.write(f"error: invalid settings: {err}\n")
        return 2

    _configure_logging(_settings.log_level)
    _start = time.perf_counter()
    try:
        # caps not passed explicitly (max_models, max_table_vars, ...) come from the active settings
        with use_settings(_settings):
            _report = _COMMANDS[_args.command](_args, _settings)
    except ParseError as err:
        sys.stderr.write(f"error: {type(err).__name__}: {err}\n")
        return 2
    except QalgError as err:
        _report = Report(
            command=_args.command,
            verdict=VerdictEnum.REJECTED,
            error=f"{type(err).__name__}: {err}",
            counterexample=getattr(err, "counterexample", None),
        )
    except (OSError, ValueError, ValidationError) as err:
        sys.stderr.write(f"error: {type(err).__name__}: {err}\n")
        return 2

    if _args.timings:
        _report.timings = {"total": time.perf_counter() - _start}

    _print_report(_report)
    if _args.report_file:
        try:
            write_data_file(_args.report_file, _report.to_data())
        except (OSError, ValueError) as err:
            sys.stderr.write(f"error: {type(err).__name__}: {err}\n")
            return 2

    return _report.exit_code


__all__ = [
    "main",
]
