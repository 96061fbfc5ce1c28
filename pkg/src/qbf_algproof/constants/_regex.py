# QDIMACS tokens:
QDIMACS_TOKEN_REGEX = r"\S+"

# Polynomial text grammar:
RATIONAL_REGEX = r"^[0-9]+(?:/[0-9]+)?$"
FACTOR_REGEX = r"^(~?)x([0-9]+)(?:\^([0-9]+))?$"
POLY_TERM_REGEX = r"([+-]?)([^+-]+)"

# Certificate file format:
CERT_HEADER_REGEX = r"^qcert\s+([A-Za-z]+)$"
CERT_MULTIPLIER_REGEX = r"^p\s+(clause|bool|twin)\s+x?([0-9]+)\s*:(.*)$"
CERT_UNIVERSAL_REGEX = r"^u\s+x?([0-9]+)\s*:(.*)$"
CERT_REMAINDER_REGEX = r"^r\s*:(.*)$"
CERT_SQUARE_REGEX = r"^s\s*:(.*)$"

# Strategy and decision-table file formats:
STRATEGY_LINE_REGEX = r"^u\s+x?([0-9]+)\s*:(.*)$"
TABLE_LINE_REGEX = r"^t\s+x?([0-9]+)\s+([01]+|-)\s+([01])$"

# Proof trace formats:
QURES_AXIOM_REGEX = r"^a\s+([0-9]+)$"
QURES_RESOLVE_REGEX = r"^r\s+([0-9]+)\s+([0-9]+)\s+x?([0-9]+)$"
QURES_REDUCE_REGEX = r"^d\s+([0-9]+)\s+x?([0-9]+)$"
WRES_STEP_REGEX = r"^(ax|cut|idem|red)\s+(-?[0-9]+)(?:\s+(-?[0-9]+))?\s*:((?:\s*-?[0-9]+)*)\s+0$"
QPC_AXIOM_REGEX = r"^ax\s+(clause|bool|twin)\s+x?([0-9]+)$"
QPC_LIN_REGEX = r"^lin\s+([0-9]+)\s+([0-9]+)\s+(-?[0-9]+(?:/[0-9]+)?)\s+(-?[0-9]+(?:/[0-9]+)?)$"
QPC_MUL_REGEX = r"^mul\s+([0-9]+)\s+(~?)x?([0-9]+)$"
QPC_SCALE_REGEX = r"^scale\s+([0-9]+)\s+(-?[0-9]+(?:/[0-9]+)?)$"
QPC_RED_REGEX = r"^red\s+([0-9]+)\s+x?([0-9]+)\s+([01])$"


__all__ = [
    "QDIMACS_TOKEN_REGEX",
    "RATIONAL_REGEX",
    "FACTOR_REGEX",
    "POLY_TERM_REGEX",
    "CERT_HEADER_REGEX",
    "CERT_MULTIPLIER_REGEX",
    "CERT_UNIVERSAL_REGEX",
    "CERT_REMAINDER_REGEX",
    "CERT_SQUARE_REGEX",
    "STRATEGY_LINE_REGEX",
    "TABLE_LINE_REGEX",
    "QURES_AXIOM_REGEX",
    "QURES_RESOLVE_REGEX",
    "QURES_REDUCE_REGEX",
    "WRES_STEP_REGEX",
    "QPC_AXIOM_REGEX",
    "QPC_LIN_REGEX",
    "QPC_MUL_REGEX",
    "QPC_SCALE_REGEX",
    "QPC_RED_REGEX",
]
