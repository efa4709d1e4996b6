"""Errors raised while evaluating q-series."""

from __future__ import annotations

from typing import Optional


class QSeriesError(Exception):
    """Base class for errors raised by eulerq."""


class DomainError(QSeriesError, ValueError):
    """Error for an argument outside the domain of an operation."""


class PoleError(QSeriesError, ZeroDivisionError):
    """Error for evaluation at a pole, where an infinite product in a denominator vanishes."""


class ZeroDenominator(PoleError):
    """Error for a lower parameter of a basic hypergeometric series equal to q^-m."""


class DivergentSeries(QSeriesError, ArithmeticError):
    """Error for a series evaluated outside its disc of convergence."""


class MaxTermsExceeded(QSeriesError, ArithmeticError):
    """Error for a series or product that did not meet its stopping rule in time."""

    def __init__(
        self,
        message: str,
        terms_used: int = 0,
        partial: Optional[complex] = None,
    ):
        super().__init__(message)
        self.terms_used = terms_used
        self.partial = partial


class UnknownIdentity(QSeriesError, KeyError):
    """Error for an identity id missing from the registry."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""
