r"""
Jackson's q-integral on :math:`[0, a]`.

.. math::

    \int_0^a f(t)\, d_pt = (1 - p)\, a \sum_{k \geq 0} f(a p^k)\, p^k
"""

from __future__ import annotations

import logging
from typing import Any, Callable, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, model_validator

from eulerq.errors import DomainError
from eulerq.qcore import (
    DEFAULT_CONFIG,
    ZERO_TOL,
    EvalConfig,
    Number,
    QParam,
    SeriesValue,
    coerce_base,
    sum_series,
)

logger = logging.getLogger(__name__)

Integrand = Callable[[complex], Union[SeriesValue, Number]]


class QIntegral(BaseModel):
    r"""
    A Jackson q-integral waiting to be evaluated.

    >>> one = QIntegral(base=0.5, upper_limit=1, integrand=lambda t: 1)
    >>> round(one.evaluate().real, 12)
    1.0

    :param base:
        the Jackson base, called p when it differs from the base of the integrand

    :param upper_limit:
        the endpoint a of the interval :math:`[0, a]`

    :param integrand:
        a function of one complex variable, which may return a
        :class:`~eulerq.qcore.SeriesValue`

    :param singular_points:
        points where the integrand is undefined; a node within ``1e-13``
        of one of them raises :class:`~eulerq.errors.DomainError`
    """

    model_config = ConfigDict(frozen=True)

    base: QParam
    upper_limit: complex
    integrand: Integrand
    singular_points: Tuple[complex, ...] = ()

    @model_validator(mode="before")
    def base_from_float(cls, values: Any) -> Any:
        return coerce_base(values, field="base")

    def nodes(self):
        """Generate the nodes :math:`a p^k` with their weights :math:`p^k`."""
        p = self.base.q
        k = 0
        while True:
            weight = p**k
            yield k, self.upper_limit * weight, weight
            k += 1

    def evaluate(self, cfg: Optional[EvalConfig] = None) -> SeriesValue:
        return jackson_integrate(self, cfg)


def jackson_integrate(J: QIntegral, cfg: Optional[EvalConfig] = None) -> SeriesValue:
    """
    Evaluate a Jackson q-integral.

    Summation follows :func:`~eulerq.qcore.sum_series`, with the
    error estimates of integrand values carried into the result.
    """
    cfg = cfg or DEFAULT_CONFIG
    p = J.base.q
    a = J.upper_limit
    if a == 0:
        return SeriesValue(value=0j, terms_used=0)

    def terms():
        for k, node, weight in J.nodes():
            for point in J.singular_points:
                if abs(node - point) < ZERO_TOL:
                    raise DomainError(
                        f"Node {k} of the q-integral, t={node}, hits the singular point {point}."
                    )
            yield J.integrand(node) * weight

    total = sum_series(terms(), cfg, ratio_cap=p, label="Jackson q-integral")
    logger.debug("q-integral over [0, %s] used %d nodes", a, total.terms_used)
    return total * ((1 - p) * a)
