"""positstat: a bit-exact lab comparing posit(N,ES), IEEE binary64, and
natural-log-space binary64 on statistical computations whose probabilities
shrink far below anything a double can hold."""

__version__ = "0.1.0"

from .logspace import LOG_ZERO, LogNum, log_mul, lse2, lse_n, naive_log_add
from .oracle import BigReal, DEFAULT_PRECISION, Precision, exponent_of, relative_error
from .posit import PositConfig, PositValue
from .systems import (
    Binary64System,
    LogSpaceSystem,
    NumericSystem,
    OracleLogSystem,
    OracleSystem,
    PositSystem,
    get_system,
)

__all__ = [
    "__version__",
    "BigReal",
    "Precision",
    "DEFAULT_PRECISION",
    "exponent_of",
    "relative_error",
    "PositConfig",
    "PositValue",
    "LogNum",
    "LOG_ZERO",
    "log_mul",
    "naive_log_add",
    "lse2",
    "lse_n",
    "NumericSystem",
    "Binary64System",
    "LogSpaceSystem",
    "PositSystem",
    "OracleSystem",
    "OracleLogSystem",
    "get_system",
]
