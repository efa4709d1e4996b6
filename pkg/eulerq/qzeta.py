r"""
The q-zeta values :math:`\zeta_q(s) = \sum_n n^{s-1} q^n / (1 - q^n)`.

Only s = 1 and s = 2 have cross-checks against other representations;
larger integers are evaluated from the same series.
"""

from __future__ import annotations

import logging
import math
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from eulerq.errors import DomainError
from eulerq.qcore import (
    DEFAULT_CONFIG,
    EvalConfig,
    QParam,
    Residual,
    SeriesValue,
    coerce_base,
    finite_sum,
    residual,
    sum_series,
)
from eulerq.qhyper import phi_value

logger = logging.getLogger(__name__)


class QZeta(BaseModel):
    r"""
    The q-zeta function for one base.

    >>> round(QZeta(q=0.5).zeta_q(1).real, 12)
    1.606695152415

    :param q:
        the base, strictly between 0 and 1

    :param cfg:
        truncation settings
    """

    model_config = ConfigDict(frozen=True)

    q: QParam
    cfg: EvalConfig = DEFAULT_CONFIG

    @model_validator(mode="before")
    def base_from_float(cls, values: Any) -> Any:
        return coerce_base(values)

    def zeta_q(self, s: int) -> SeriesValue:
        """Sum the defining series for a positive integer s."""
        if s < 1 or int(s) != s:
            raise DomainError(f"zeta_q needs a positive integer s, not {s}.")
        q = self.q.q
        power = int(s) - 1

        def terms():
            n = 1
            while True:
                qn = q**n
                yield n**power * qn / (1 - qn)
                n += 1

        cap = q if power == 0 else (1 + q) / 2
        return sum_series(terms(), self.cfg, ratio_cap=cap, label=f"zeta_q({s})")

    def zeta2_squares(self) -> SeriesValue:
        r"""Sum :math:`\sum_k q^k/(1-q^k)^2`."""
        q = self.q.q

        def terms():
            k = 1
            while True:
                qk = q**k
                yield qk / (1 - qk) ** 2
                k += 1

        return sum_series(terms(), self.cfg, ratio_cap=q, label="sum of q^k/(1-q^k)^2")

    def zeta2_double_sum(self, cutoff: Optional[int] = None) -> float:
        r"""
        Sum :math:`\sum_{n,k \geq 1} n q^{nk}` over all pairs with ``nk <= cutoff``.

        The default cutoff is ``60 log(1/eps) / log(1/q)``.
        """
        q = self.q.q
        if cutoff is None:
            cutoff = math.ceil(60 * math.log(1 / self.cfg.eps) / math.log(1 / q))
        total = 0.0
        for k in range(1, cutoff + 1):
            n = np.arange(1, cutoff // k + 1, dtype=float)
            total += float(np.sum(n * q ** (n * k)))
        return total

    def zeta2_rearrangement_residual(self) -> Residual:
        r"""Check :math:`\sum n q^n/(1-q^n) = \sum q^k/(1-q^k)^2`."""
        return residual(self.zeta_q(2), self.zeta2_squares())

    def zeta1_alternating(self) -> SeriesValue:
        r"""
        Sum the fast alternating series for :math:`\zeta_q(1)`.

        .. math::

            \sum_k \frac{q^{k(k+1)/2} (-1)^{k-1}}{(1-q^k)(q;q)_k}
        """
        return sum_series(
            self._zeta1_alternating_terms(), self.cfg, ratio_cap=self.q.q,
            label="alternating zeta_q(1) series",
        )

    def _zeta1_alternating_terms(self):
        q = self.q.q
        weight = 1.0
        k = 1
        while True:
            qk = q**k
            weight *= qk / (1 - qk)
            yield (-1) ** (k - 1) * weight / (1 - qk)
            k += 1

    def zeta1_alternating_partial(self, n: int) -> SeriesValue:
        """Add the first n terms of the alternating series for zeta_q(1)."""
        if n < 0:
            raise DomainError(f"A partial sum needs n >= 0, not {n}.")
        terms = self._zeta1_alternating_terms()
        return finite_sum(next(terms) for _ in range(n))

    def zeta2_alternating(self) -> SeriesValue:
        r"""
        Sum the alternating series for :math:`\zeta_q(2)`.

        Each term carries a :math:`{}_2\phi_1(q^j, q^j; q^{j+1}; q, q)`
        evaluated numerically.
        """
        q = self.q.q

        def terms():
            j = 1
            while True:
                qj = q**j
                inner = phi_value([qj, qj], [qj * q], q, q, self.cfg)
                yield inner * ((-1) ** (j - 1) * q ** (j * (j + 1) / 2) / (1 - qj) ** 2)
                j += 1

        return sum_series(terms(), self.cfg, ratio_cap=q, label="alternating zeta_q(2) series")

    def zeta2_un(self) -> SeriesValue:
        r"""Sum the variant :math:`\sum_k q^{2k}/(1-q^k)^2`."""
        q = self.q.q

        def terms():
            k = 1
            while True:
                qk = q**k
                yield qk * qk / (1 - qk) ** 2
                k += 1

        return sum_series(terms(), self.cfg, ratio_cap=q, label="variant zeta_q(2) series")
