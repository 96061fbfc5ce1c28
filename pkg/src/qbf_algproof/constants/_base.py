MAX_PATH_LENGTH = 1024

ENV_PREFIX = "QALG_"

DEFAULT_MAX_VARS = 24
DEFAULT_MAX_MODELS = 1 << 20
DEFAULT_MAX_UNKNOWNS = 20_000
DEFAULT_MAX_TABLE_VARS = 16
DEFAULT_MAX_QDEG = 8

# Largest value handed to the bounded four-square search.
MAX_FOUR_SQUARES = 1 << 40


__all__ = [
    "MAX_PATH_LENGTH",
    "ENV_PREFIX",
    "DEFAULT_MAX_VARS",
    "DEFAULT_MAX_MODELS",
    "DEFAULT_MAX_UNKNOWNS",
    "DEFAULT_MAX_TABLE_VARS",
    "DEFAULT_MAX_QDEG",
    "MAX_FOUR_SQUARES",
]
