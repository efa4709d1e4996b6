"""Eulerq: Euler's q-logarithm, its relatives, and the identities between them."""

from .errors import (
    DivergentSeries,
    DomainError,
    MaxTermsExceeded,
    PoleError,
    QSeriesError,
    UnknownIdentity,
    ZeroDenominator,
)
from .qcore import EvalConfig, QParam, Residual, SeriesValue
from .qdilog import ClassicalDilog, QDilog
from .qlambert import FqFunction
from .qlog import SqFunction
from .qzeta import QZeta

__version__ = "0.1.0"
