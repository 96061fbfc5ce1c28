import re
import logging
from fractions import Fraction

from pydantic import ValidationError, validate_call

from ..constants import (
    AxiomKindEnum,
    QpcRuleEnum,
    QuResRuleEnum,
    TraceFormatEnum,
    WResRuleEnum,
    QURES_AXIOM_REGEX,
    QURES_RESOLVE_REGEX,
    QURES_REDUCE_REGEX,
    WRES_STEP_REGEX,
    QPC_AXIOM_REGEX,
    QPC_LIN_REGEX,
    QPC_MUL_REGEX,
    QPC_SCALE_REGEX,
    QPC_RED_REGEX,
)
from ..exceptions import ParseError
from ..poly import ExtVar
from ..qbf import AxiomId
from ..cert import strip_comment
from ._base import QuResProof, QuResStep, WResProof, WResStep, QpcProof, QpcStep

logger = logging.getLogger(__name__)


_QURES_AXIOM = re.compile(QURES_AXIOM_REGEX)
_QURES_RESOLVE = re.compile(QURES_RESOLVE_REGEX)
_QURES_REDUCE = re.compile(QURES_REDUCE_REGEX)
_WRES_STEP = re.compile(WRES_STEP_REGEX)
_QPC_AXIOM = re.compile(QPC_AXIOM_REGEX)
_QPC_LIN = re.compile(QPC_LIN_REGEX)
_QPC_MUL = re.compile(QPC_MUL_REGEX)
_QPC_SCALE = re.compile(QPC_SCALE_REGEX)
_QPC_RED = re.compile(QPC_RED_REGEX)


def _lines(text: str):
    for _line_no, _raw in enumerate(text.splitlines(), start=1):
        _line = strip_comment(_raw)
        if _line:
            yield _line_no, _line


def _format_rational(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else str(value)


@validate_call
def parse_qures(text: str) -> QuResProof:
    """Parse a QU-Res trace: `a <j>`, `r <i> <k> <var>` and `d <i> <var>` lines, 0-based indices.

    Raises:
        ParseError: If a line is malformed.
    """

    _steps: list[QuResStep] = []
    for _line_no, _line in _lines(text):
        _match = _QURES_AXIOM.match(_line)
        if _match:
            _steps.append(QuResStep.axiom(int(_match.group(1))))
            continue

        _match = _QURES_RESOLVE.match(_line)
        if _match:
            _first, _second, _var = (int(_g) for _g in _match.groups())
            if _var < 1:
                raise ParseError(f"Pivot variable must be >= 1, got {_var}!", _line_no, 1)

            _steps.append(QuResStep.resolve(_first, _second, _var))
            continue

        _match = _QURES_REDUCE.match(_line)
        if _match and (0 < int(_match.group(2))):
            _steps.append(QuResStep.reduce(int(_match.group(1)), int(_match.group(2))))
            continue

        raise ParseError(f"Unrecognized QU-Res step '{_line}'!", _line_no, 1)

    return QuResProof(steps=tuple(_steps))


@validate_call
def format_qures(proof: QuResProof) -> str:
    _lines_out = []
    for _step in proof.steps:
        if _step.rule == QuResRuleEnum.AXIOM:
            _lines_out.append(f"a {_step.clause}")
        elif _step.rule == QuResRuleEnum.RESOLVE:
            _lines_out.append(f"r {_step.premises[0]} {_step.premises[1]} {_step.var}")
        else:
            _lines_out.append(f"d {_step.premises[0]} {_step.var}")

    return "\n".join(_lines_out) + "\n" if _lines_out else ""


@validate_call
def parse_wres(text: str) -> WResProof:
    """Parse a Q-w-Res trace.

    Lines read `ax <w> : <lits> 0`, `cut <w> <var> : <lits> 0`, `idem <w> <lit> : <lits> 0` and
    `red <w> <lit> : <lits> 0`, where `<lits>` is the clause `C` the rule is applied to and the
    middle token names the cut variable, the repeated literal or the reduced universal literal.

    Args:
        text (str, required): File content.

    Raises:
        ParseError: If a line is malformed or a step is inconsistent.

    Returns:
        WResProof: Parsed trace (not yet checked).
    """

    _steps: list[WResStep] = []
    for _line_no, _line in _lines(text):
        _match = _WRES_STEP.match(_line)
        if not _match:
            raise ParseError(f"Unrecognized Q-w-Res step '{_line}'!", _line_no, 1)

        _rule, _weight, _literal, _body = _match.groups()
        _clause = tuple(int(_l) for _l in _body.split())
        try:
            _steps.append(
                WResStep(
                    rule=WResRuleEnum(_rule),
                    weight=int(_weight),
                    clause=_clause,
                    literal=None if _literal is None else int(_literal),
                )
            )
        except (ValidationError, ValueError) as err:
            raise ParseError(f"Invalid Q-w-Res step '{_line}': {err}", _line_no, 1) from None

    return WResProof(steps=tuple(_steps))


@validate_call
def format_wres(proof: WResProof) -> str:
    _lines_out = []
    for _step in proof.steps:
        _head = f"{_step.rule.value} {_step.weight}"
        if _step.literal is not None:
            _head += f" {_step.literal}"

        _body = " ".join(str(_l) for _l in _step.clause)
        _lines_out.append(f"{_head} : {_body} 0" if _body else f"{_head} : 0")

    return "\n".join(_lines_out) + "\n" if _lines_out else ""


@validate_call
def parse_qpc(text: str) -> QpcProof:
    """Parse a Q-PC trace.

    Lines read `ax clause|bool|twin <n>`, `lin <i> <k> <a> <b>`, `mul <i> <var>` (`~x3` for a
    twin), `scale <i> <a>` and `red <i> <var> <0|1>`, with 0-based step indices.

    Raises:
        ParseError: If a line is malformed.
    """

    _steps: list[QpcStep] = []
    for _line_no, _line in _lines(text):
        try:
            _steps.append(_parse_qpc_line(_line, _line_no))
        except (ValidationError, ValueError) as err:
            if isinstance(err, ParseError):
                raise

            raise ParseError(f"Invalid Q-PC step '{_line}': {err}", _line_no, 1) from None

    return QpcProof(steps=tuple(_steps))


def _parse_qpc_line(line: str, line_no: int) -> QpcStep:
    _match = _QPC_AXIOM.match(line)
    if _match:
        return QpcStep.ax(AxiomId(kind=AxiomKindEnum(_match.group(1)), index=int(_match.group(2))))

    _match = _QPC_LIN.match(line)
    if _match:
        return QpcStep.lin(
            int(_match.group(1)),
            int(_match.group(2)),
            Fraction(_match.group(3)),
            Fraction(_match.group(4)),
        )

    _match = _QPC_MUL.match(line)
    if _match:
        return QpcStep.mul(int(_match.group(1)), ExtVar(int(_match.group(3)), _match.group(2) == "~"))

    _match = _QPC_SCALE.match(line)
    if _match:
        return QpcStep.scale(int(_match.group(1)), Fraction(_match.group(2)))

    _match = _QPC_RED.match(line)
    if _match:
        return QpcStep.red(int(_match.group(1)), int(_match.group(2)), int(_match.group(3)))

    raise ParseError(f"Unrecognized Q-PC step '{line}'!", line_no, 1)


@validate_call
def format_qpc(proof: QpcProof) -> str:
    _lines_out = []
    for _step in proof.steps:
        if _step.rule == QpcRuleEnum.AXIOM:
            _lines_out.append(f"ax {_step.axiom}")
        elif _step.rule == QpcRuleEnum.LIN:
            _a, _b = (_format_rational(_c) for _c in _step.coefs)
            _lines_out.append(f"lin {_step.premises[0]} {_step.premises[1]} {_a} {_b}")
        elif _step.rule == QpcRuleEnum.MUL:
            _lines_out.append(f"mul {_step.premises[0]} {ExtVar(_step.var or 1, _step.twin)}")
        elif _step.rule == QpcRuleEnum.SCALE:
            _lines_out.append(f"scale {_step.premises[0]} {_format_rational(_step.coefs[0])}")
        else:
            _lines_out.append(f"red {_step.premises[0]} {_step.var} {_step.bit}")

    return "\n".join(_lines_out) + "\n" if _lines_out else ""


@validate_call
def parse_trace(text: str, trace_format: TraceFormatEnum | str) -> QuResProof | WResProof | QpcProof:
    """Parse a trace in the named format ('QURES', 'WRES' or 'QPC', case-insensitive)."""

    if isinstance(trace_format, str):
        trace_format = TraceFormatEnum(trace_format.strip().upper())

    if trace_format == TraceFormatEnum.QURES:
        return parse_qures(text)

    if trace_format == TraceFormatEnum.WRES:
        return parse_wres(text)

    return parse_qpc(text)


@validate_call
def format_trace(proof: QuResProof | WResProof | QpcProof) -> str:
    if isinstance(proof, QuResProof):
        return format_qures(proof)

    if isinstance(proof, WResProof):
        return format_wres(proof)

    return format_qpc(proof)


__all__ = [
    "parse_qures",
    "format_qures",
    "parse_wres",
    "format_wres",
    "parse_qpc",
    "format_qpc",
    "parse_trace",
    "format_trace",
]
