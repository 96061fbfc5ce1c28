import re
import logging

from pydantic import validate_call

from ..constants import (
    ProofSystemEnum,
    AxiomKindEnum,
    CERT_HEADER_REGEX,
    CERT_MULTIPLIER_REGEX,
    CERT_UNIVERSAL_REGEX,
    CERT_REMAINDER_REGEX,
    CERT_SQUARE_REGEX,
)
from ..exceptions import ParseError
from ..poly import Polynomial, parse_poly, format_poly
from ..qbf import AxiomId
from ._base import Certificate

logger = logging.getLogger(__name__)


_HEADER_PATTERN = re.compile(CERT_HEADER_REGEX)
_MULTIPLIER_PATTERN = re.compile(CERT_MULTIPLIER_REGEX)
_UNIVERSAL_PATTERN = re.compile(CERT_UNIVERSAL_REGEX)
_REMAINDER_PATTERN = re.compile(CERT_REMAINDER_REGEX)
_SQUARE_PATTERN = re.compile(CERT_SQUARE_REGEX)


def strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


@validate_call
def parse_certificate(text: str) -> Certificate:
    """Parse the certificate file format.

    Args:
        text (str, required): Content starting with a `qcert <QNS|QSA|QSOS>` header.

    Raises:
        ParseError: If a line is malformed, a key repeats, or the header is missing.

    Returns:
        Certificate: Parsed certificate (not yet verified).
    """

    _system: ProofSystemEnum | None = None
    _multipliers: dict[AxiomId, Polynomial] = {}
    _universal: dict[int, Polynomial] = {}
    _remainder: Polynomial | None = None
    _squares: list[Polynomial] = []

    for _line_no, _raw in enumerate(text.splitlines(), start=1):
        _line = strip_comment(_raw)
        if not _line:
            continue

        if _system is None:
            _match = _HEADER_PATTERN.match(_line)
            if not _match:
                raise ParseError("Expected header 'qcert <QNS|QSA|QSOS>'!", _line_no, 1)

            try:
                _system = ProofSystemEnum(_match.group(1).upper())
            except ValueError:
                raise ParseError(
                    f"Unknown proof system '{_match.group(1)}'!", _line_no, 1
                ) from None

            continue

        _match = _MULTIPLIER_PATTERN.match(_line)
        if _match:
            _axiom_id = AxiomId(kind=AxiomKindEnum(_match.group(1)), index=int(_match.group(2)))
            if _axiom_id in _multipliers:
                raise ParseError(f"Duplicate multiplier for '{_axiom_id}'!", _line_no, 1)

            _multipliers[_axiom_id] = parse_poly(_match.group(3), line=_line_no)
            continue

        _match = _UNIVERSAL_PATTERN.match(_line)
        if _match:
            _u = int(_match.group(1))
            if _u in _universal:
                raise ParseError(f"Duplicate multiplier for universal {_u}!", _line_no, 1)

            _universal[_u] = parse_poly(_match.group(2), line=_line_no)
            continue

        _match = _REMAINDER_PATTERN.match(_line)
        if _match:
            if _remainder is not None:
                raise ParseError("Duplicate remainder line!", _line_no, 1)

            _remainder = parse_poly(_match.group(1), line=_line_no)
            continue

        _match = _SQUARE_PATTERN.match(_line)
        if _match:
            _squares.append(parse_poly(_match.group(1), line=_line_no))
            continue

        raise ParseError(f"Unrecognized line '{_line}'!", _line_no, 1)

    if _system is None:
        raise ParseError("Missing 'qcert' header!", 1, 1)

    return Certificate(
        system=_system,
        multipliers=_multipliers,
        universal=_universal,
        remainder=_remainder,
        squares=tuple(_squares),
    )


@validate_call(config={"arbitrary_types_allowed": True})
def format_certificate(cert: Certificate) -> str:
    """Serialize a certificate; keys are written in a canonical order.

    Args:
        cert (Certificate, required): Certificate to write.

    Returns:
        str: Certificate file content ending with a newline.
    """

    _lines = [f"qcert {cert.system.value}"]
    for _axiom_id in sorted(cert.multipliers, key=lambda _a: _a.sort_key()):
        _poly = cert.multipliers[_axiom_id]
        _lines.append(f"p {_axiom_id.kind.value} {_axiom_id.index} : {format_poly(_poly)}")

    for _u in sorted(cert.universal):
        _lines.append(f"u {_u} : {format_poly(cert.universal[_u])}")

    if cert.remainder is not None:
        _lines.append(f"r : {format_poly(cert.remainder)}")

    for _square in cert.squares:
        _lines.append(f"s : {format_poly(_square)}")

    return "\n".join(_lines) + "\n"


__all__ = [
    "strip_comment",
    "parse_certificate",
    "format_certificate",
]
