# src/engine/verify/diagonal.py
"""对角嵌入 a ↦ (a, …, a) 保持逼近质量：min_p ‖q·a⃗ − p⃗‖∞ = min_p |qa − p|"""
import itertools
import logging
import math
from decimal import Decimal
from fractions import Fraction
from typing import Union

from src.models.errors import InvalidParam
from src.models.report_models import DiagonalEmbedReport

logger = logging.getLogger(__name__)


def _exact(a: Union[str, float]) -> Fraction:
    return Fraction(Decimal(a if isinstance(a, str) else repr(a)))


def diagonal_embed(a: Union[str, float], m: int, q_max: int = 10**4) -> DiagonalEmbedReport:
    """
    返回列向量 (a, …, a) 并在 q = 1..q_max 上逐个比较两种逼近质量。

    p⃗ 在 {⌊qa⌋, ⌈qa⌉}^m 中穷举。
    """
    if m < 1:
        raise InvalidParam(f"m 必须 ≥ 1: {m}", module="verify")
    if q_max < 1:
        raise InvalidParam(f"q_max 必须 ≥ 1: {q_max}", module="verify")
    value = _exact(a)
    text = a if isinstance(a, str) else repr(a)
    worst = Fraction(0)
    for q in range(1, q_max + 1):
        x = q * value
        choices = sorted({math.floor(x), math.ceil(x)})
        scalar = min(abs(x - p) for p in choices)
        vector = min(max(abs(x - p) for p in combo) for combo in itertools.product(choices, repeat=m))
        worst = max(worst, abs(vector - scalar))
    report = DiagonalEmbedReport(a=text, m=m, column=[text] * m, q_checked=q_max,
                                 max_difference=float(worst), holds=worst == 0)
    logger.info(f"diagonal_embed: a={text}, m={m}, q ≤ {q_max}, 最大差 {report.max_difference:.3g}")
    return report


__all__ = ["diagonal_embed"]
