r"""
Basic hypergeometric series.

Evaluates the truncated series

.. math::

    {}_r\phi_s(a_1, \ldots, a_r; b_1, \ldots, b_s; q, z)
    = \sum_k \frac{(a_1, \ldots, a_r; q)_k}{(q, b_1, \ldots, b_s; q)_k}
      \left((-1)^k q^{k(k-1)/2}\right)^{1+s-r} z^k

term by term, each term obtained from the previous one.
"""

from __future__ import annotations

import logging
import math
from typing import Any, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from eulerq.errors import DivergentSeries, MaxTermsExceeded, ZeroDenominator
from eulerq.qcore import (
    DEFAULT_CONFIG,
    ZERO_TOL,
    EvalConfig,
    QLike,
    QParam,
    Residual,
    SeriesValue,
    coerce_base,
    finite_sum,
    qpochhammer_inf,
    q_value,
    residual,
    sum_series,
)

logger = logging.getLogger(__name__)


class PhiSeries(BaseModel):
    r"""
    Parameters of a basic hypergeometric series.

    >>> s = PhiSeries(upper=[0.25, 0.5], lower=[0.125], q=0.5, z=0.5)
    >>> s.order
    (2, 1)

    A lower parameter of 0 is allowed and contributes a factor 1
    to the denominator.
    """

    model_config = ConfigDict(frozen=True)

    upper: List[complex]
    lower: List[complex]
    q: QParam
    z: complex

    @model_validator(mode="before")
    def base_from_float(cls, values: Any) -> Any:
        return coerce_base(values)

    @property
    def order(self) -> Tuple[int, int]:
        """The pair (r, s) of parameter counts."""
        return len(self.upper), len(self.lower)

    def terminating_degree(self) -> Optional[int]:
        """
        Find the smallest n such that an upper parameter equals q^-n.

        :returns:
            n, or None if the series does not terminate
        """
        base = self.q.q
        degrees = []
        for a in self.upper:
            if a == 0 or abs(a.imag) > ZERO_TOL or a.real <= 0:
                continue
            n = round(math.log(a.real) / math.log(1 / base))
            if n >= 0 and abs(1 - a * base**n) < ZERO_TOL:
                degrees.append(n)
        return min(degrees) if degrees else None


def _ratio(series: PhiSeries, k: int) -> complex:
    base = series.q.q
    r, s = series.order
    qk = base**k
    ratio = series.z / (1 - qk * base)
    for a in series.upper:
        factor = 1 - a * qk
        ratio *= 0j if abs(factor) < ZERO_TOL else factor
    for b in series.lower:
        factor = 1 - b * qk
        if abs(factor) < ZERO_TOL:
            raise ZeroDenominator(
                f"The lower parameter {b} equals q^-{k}, so term {k + 1} has a zero denominator."
            )
        ratio /= factor
    return ratio * (-qk) ** (1 + s - r)


def phi_eval(series: PhiSeries, cfg: Optional[EvalConfig] = None) -> SeriesValue:
    r"""
    Evaluate a basic hypergeometric series.

    A terminating series (an upper parameter equal to ``q^-n``) is summed
    exactly over its ``n + 1`` terms. Otherwise a series with ``r = s + 1``
    needs ``|z| < 1``, and a series with ``r > s + 1`` diverges.

    >>> phi_eval(PhiSeries(upper=[1, 0.3], lower=[0.2], q=0.5, z=0.9)).value
    (1+0j)
    """
    cfg = cfg or DEFAULT_CONFIG
    r, s = series.order
    base = series.q.q
    degree = series.terminating_degree()

    if degree is not None:
        if degree + 1 > cfg.max_terms:
            raise MaxTermsExceeded(
                f"The terminating series needs {degree + 1} terms, more than {cfg.max_terms}.",
                terms_used=0,
            )

        def finite_terms():
            term = 1 + 0j
            for k in range(degree + 1):
                yield term
                if k < degree:
                    term *= _ratio(series, k)

        logger.debug("summing terminating %dphi%d with %d terms", r, s, degree + 1)
        return finite_sum(finite_terms())

    if r > s + 1:
        raise DivergentSeries(f"A nonterminating {r}phi{s} series diverges for z != 0.")
    if r == s + 1 and abs(series.z) >= 1:
        raise DivergentSeries(
            f"A nonterminating {r}phi{s} series needs |z| < 1, not |z|={abs(series.z)}."
        )
    cap = max(abs(series.z), base) if r == s + 1 else base

    def terms():
        term = 1 + 0j
        k = 0
        while True:
            yield term
            term *= _ratio(series, k)
            k += 1

    return sum_series(terms(), cfg, ratio_cap=cap, label=f"{r}phi{s} series")


def qgauss_sides(
    a: complex, b: complex, c: complex, q: QLike, cfg: Optional[EvalConfig] = None
) -> Tuple[SeriesValue, SeriesValue]:
    r"""
    Evaluate both sides of the q-Gauss sum.

    :returns:
        the series :math:`{}_2\phi_1(a, b; c; q, c/(ab))` and the product
        :math:`(c/a, c/b; q)_\infty / (c, c/(ab); q)_\infty`
    """
    cfg = cfg or DEFAULT_CONFIG
    base = q_value(q)
    z = c / (a * b)
    series = phi_eval(PhiSeries(upper=[a, b], lower=[c], q=base, z=z), cfg)
    numerator = qpochhammer_inf(c / a, base, cfg) * qpochhammer_inf(c / b, base, cfg)
    denominator = qpochhammer_inf(c, base, cfg) * qpochhammer_inf(z, base, cfg)
    if denominator.value == 0:
        raise ZeroDenominator(f"The q-Gauss product side has a pole at c={c}, c/(ab)={z}.")
    return series, numerator / denominator


def qgauss_residual(
    a: complex, b: complex, c: complex, q: QLike, cfg: Optional[EvalConfig] = None
) -> Residual:
    """Check the q-Gauss sum for one parameter triple."""
    series, product = qgauss_sides(a, b, c, q, cfg)
    return residual(series, product)


def phi_value(
    upper: List[complex],
    lower: List[complex],
    q: float,
    z: complex,
    cfg: Optional[EvalConfig] = None,
) -> SeriesValue:
    """Evaluate a series given directly by its parameters."""
    return phi_eval(PhiSeries(upper=upper, lower=lower, q=q, z=z), cfg)
