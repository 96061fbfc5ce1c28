from enum import Enum


class WarnEnum(str, Enum):
    ERROR = "ERROR"
    ALWAYS = "ALWAYS"
    DEBUG = "DEBUG"
    IGNORE = "IGNORE"


class ConfigFileFormatEnum(str, Enum):
    YAML = "YAML"
    JSON = "JSON"
    TOML = "TOML"


class QuantifierEnum(str, Enum):
    EXISTS = "e"
    FORALL = "a"


class AxiomKindEnum(str, Enum):
    CLAUSE = "clause"
    BOOL = "bool"
    TWIN = "twin"


class ProofSystemEnum(str, Enum):
    QNS = "QNS"
    QSA = "QSA"
    QSOS = "QSOS"


class VariantEnum(int, Enum):
    POSITIVE = 1
    EXACT = 2


class FamilyEnum(str, Enum):
    FORALL_OR = "FORALL_OR"
    PARITY = "PARITY"
    EQUALITY = "EQUALITY"
    QMAJORITY = "QMAJORITY"


class TraceFormatEnum(str, Enum):
    QURES = "QURES"
    WRES = "WRES"
    QPC = "QPC"


class WResRuleEnum(str, Enum):
    AXIOM = "ax"
    CUT = "cut"
    IDEM = "idem"
    RED = "red"


class QpcRuleEnum(str, Enum):
    AXIOM = "ax"
    LIN = "lin"
    MUL = "mul"
    SCALE = "scale"
    RED = "red"


class QuResRuleEnum(str, Enum):
    AXIOM = "a"
    RESOLVE = "r"
    REDUCE = "d"


class SearchStatusEnum(str, Enum):
    FEASIBLE = "FEASIBLE"
    INFEASIBLE = "INFEASIBLE"


class SearchModeEnum(str, Enum):
    TEMPLATE = "TEMPLATE"
    GAME = "GAME"


class VerdictEnum(str, Enum):
    ACCEPTED = "accepted"
    REJECTED = "rejected"
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    WINNING = "winning"
    LOSING = "losing"
    WRITTEN = "written"


__all__ = [
    "WarnEnum",
    "ConfigFileFormatEnum",
    "QuantifierEnum",
    "AxiomKindEnum",
    "ProofSystemEnum",
    "VariantEnum",
    "FamilyEnum",
    "TraceFormatEnum",
    "WResRuleEnum",
    "QpcRuleEnum",
    "QuResRuleEnum",
    "SearchStatusEnum",
    "SearchModeEnum",
    "VerdictEnum",
]
