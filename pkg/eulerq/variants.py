"""
Other q-analogues of the logarithm, for comparison with S_q.

Each has its own parameter regime, so the variants validate their base
with :class:`VariantParam` instead of :class:`~eulerq.qcore.QParam`.
"""

from __future__ import annotations

import logging
import math
from typing import ClassVar, Dict, Literal, Optional

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from eulerq.errors import DivergentSeries, DomainError
from eulerq.qcore import DEFAULT_CONFIG, EvalConfig, Number, SeriesValue, e_q, sum_series

logger = logging.getLogger(__name__)

DomainTag = Literal["tsallis", "borwein", "kirillov"]


class VariantParam(BaseModel):
    """
    The base of a variant q-logarithm, checked against the regime of its variant.

    >>> VariantParam(q=2, domain_tag="borwein").q
    2.0
    """

    model_config = ConfigDict(frozen=True)

    q: float
    domain_tag: DomainTag

    regimes: ClassVar[Dict[str, str]] = {
        "tsallis": "q != 1",
        "borwein": "|q| > 1",
        "kirillov": "0 < q < 1",
    }

    @model_validator(mode="after")
    def q_in_regime(self) -> VariantParam:
        q = self.q
        valid = {
            "tsallis": q != 1,
            "borwein": abs(q) > 1,
            "kirillov": 0 < q < 1,
        }[self.domain_tag]
        if not valid:
            raise ValueError(
                f"The {self.domain_tag} variant needs {self.regimes[self.domain_tag]}, not q={q}."
            )
        return self

    @classmethod
    def for_tag(cls, q: float, domain_tag: str) -> VariantParam:
        """Build a parameter, reporting a bad base as a DomainError."""
        try:
            return cls(q=q, domain_tag=domain_tag)
        except ValidationError as e:
            raise DomainError(str(e.errors()[0]["msg"])) from e


def tsallis_lnq(x: float, q: float) -> float:
    """
    Compute the Tsallis logarithm ``(x^(1-q) - 1)/(1 - q)``.

    >>> tsallis_lnq(1, 0.3)
    0.0
    """
    param = VariantParam.for_tag(q, "tsallis")
    if not x > 0:
        raise DomainError(f"The Tsallis logarithm needs x > 0, not {x}.")
    exponent = 1 - param.q
    return math.expm1(exponent * math.log(x)) / exponent


def borwein_lnq(z: Number, q: float, cfg: Optional[EvalConfig] = None) -> SeriesValue:
    r"""
    Sum :math:`\ln_q(1+z) = \sum_{k \geq 1} (-1)^k z^k/(1 - q^k)` for :math:`|q| > 1`.

    At z = -1 the value is :math:`-\sum_n d(n) q^{-n}`, with d the divisor count.
    """
    cfg = cfg or DEFAULT_CONFIG
    param = VariantParam.for_tag(q, "borwein")
    if abs(z) >= abs(param.q):
        raise DivergentSeries(f"The Borwein series needs |z| < |q|, not |z|={abs(z)}.")

    def terms():
        power = 1 + 0j
        k = 1
        while True:
            power *= -z
            yield power / (1 - param.q**k)
            k += 1

    return sum_series(terms(), cfg, ratio_cap=abs(z / param.q), label="Borwein series")


def _kirillov_base(z: Number, q: float) -> float:
    param = VariantParam.for_tag(q, "kirillov")
    if abs(z) >= 1:
        raise DivergentSeries(f"The series needs |z| < 1, not |z|={abs(z)}.")
    return param.q


def kirillov_logq(z: Number, q: float, cfg: Optional[EvalConfig] = None) -> SeriesValue:
    r"""Sum :math:`\log_q(z) = \sum_n z^n/(1 - q^n)`."""
    cfg = cfg or DEFAULT_CONFIG
    base = _kirillov_base(z, q)

    def terms():
        power = 1 + 0j
        n = 1
        while True:
            power *= z
            yield power / (1 - base**n)
            n += 1

    return sum_series(terms(), cfg, ratio_cap=max(abs(z), base), label="Kirillov logarithm")


def kirillov_logq_quotient(z: Number, q: float, cfg: Optional[EvalConfig] = None) -> SeriesValue:
    r"""
    Compute :math:`z e_q'(z)/e_q(z)`, with :math:`e_q'` summed term by term.
    """
    cfg = cfg or DEFAULT_CONFIG
    base = _kirillov_base(z, q)

    def derivative_terms():
        weight = 1 / (1 - base)
        power = 1 + 0j
        n = 1
        while True:
            yield n * power * weight
            n += 1
            power *= z
            weight /= 1 - base**n

    derivative = sum_series(
        derivative_terms(), cfg, ratio_cap=max(abs(z), base), label="derivative of e_q"
    )
    return derivative * z / e_q(z, base, cfg)


def kirillov_li2(z: Number, q: float, cfg: Optional[EvalConfig] = None) -> SeriesValue:
    r"""
    Sum :math:`\sum_k z^k/(k(1 - q^k))`, which is :math:`\log e_q(z)`.

    >>> kirillov_li2(0, 0.5).value
    0j
    """
    cfg = cfg or DEFAULT_CONFIG
    base = _kirillov_base(z, q)

    def terms():
        power = 1 + 0j
        k = 1
        while True:
            power *= z
            yield power / (k * (1 - base**k))
            k += 1

    return sum_series(terms(), cfg, ratio_cap=max(abs(z), base), label="Kirillov dilogarithm")


def zudilin_l(x: Number, q: float, order: int, cfg: Optional[EvalConfig] = None) -> SeriesValue:
    r"""
    Sum :math:`L_1(x;q) = \sum (xq)^n/(1-q^n)` or :math:`L_2(x;q) = \sum n (xq)^n/(1-q^n)`.

    :param order:
        1 or 2
    """
    cfg = cfg or DEFAULT_CONFIG
    if order not in (1, 2):
        raise DomainError(f"order must be 1 or 2, not {order}.")
    base = VariantParam.for_tag(q, "kirillov").q
    ratio = x * base
    if abs(ratio) >= 1:
        raise DivergentSeries(f"L_{order}(x;q) needs |xq| < 1, not |xq|={abs(ratio)}.")

    def terms():
        power = 1 + 0j
        n = 1
        while True:
            power *= ratio
            yield n ** (order - 1) * power / (1 - base**n)
            n += 1

    cap = abs(ratio) if order == 1 else (1 + abs(ratio)) / 2
    return sum_series(terms(), cfg, ratio_cap=cap, label=f"L_{order} series")
