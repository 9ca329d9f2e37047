# src/engine/verify/cf_witness.py
"""
连分数手术：构造 α = [0; a_1, a_2, …]，使它在提示附近的渐近分母 q_k 处
满足 |q_kα − p_k| < Φ(q_k)，其余部分商为 1，尾部为黄金比例。
"""
import logging
import math
from typing import List, Optional, Sequence, Tuple

import mpmath

from src.config import default_settings
from src.config.config_loader import VerifySettings
from src.engine.approx_fn import eval_phi
from src.models.approx_models import ApproxFn
from src.models.errors import HintInfeasible, InvalidParam
from src.models.lattice_models import ContinuedFractionData, MatrixA
from src.utils.display_utils import format_int

logger = logging.getLogger(__name__)


def surgical_quotient(phi: ApproxFn, q: int) -> int:
    """
    手术部分商 a = max(1, ⌈1/(qΦ(q))⌉)。

    向上取整保证 |qα − p| = 1/(q(x + q_(k−1)/q_k)) < 1/(qa) ≤ Φ(q)，其中 x > a。
    """
    log_value = -math.log(q) - eval_phi(phi, q)
    if log_value <= 0:
        return 1
    with mpmath.workdps(int(log_value / math.log(10)) + 30):
        value = mpmath.exp(mpmath.mpf(log_value))
        # 浮点的 log Φ 有 1e-15 量级误差，略微放大避免取整落到真值以下
        return max(1, int(mpmath.ceil(value * (1 + mpmath.mpf(10) ** -9))))


def convergents(quotients: Sequence[int]) -> List[Tuple[int, int]]:
    """α = [0; a_1, …] 的渐近分数 (p_k, q_k)，从 (0, 1) 开始"""
    p_prev, q_prev = 1, 0
    p_cur, q_cur = 0, 1
    result = [(p_cur, q_cur)]
    for a in quotients:
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        result.append((p_cur, q_cur))
    return result


def plan_quotients(phi: ApproxFn, t_hint: Sequence[int], q_max: Optional[int] = None,
                   settings: Optional[VerifySettings] = None) -> ContinuedFractionData:
    """
    按提示安排部分商：1 填充直到分母不小于提示，然后在该分母处做手术。

    Raises:
        HintInfeasible: 实现的分母超过 提示·hint_slack，或超过 q_max
    """
    settings = settings or default_settings.verify
    if not t_hint:
        raise InvalidParam("t_hint 不能为空", module="verify")
    quotients: List[int] = []
    surgical: List[int] = []
    q_prev, q_cur = 0, 1
    previous_hint = 0
    for hint in t_hint:
        if hint <= previous_hint or hint < 1:
            raise InvalidParam(f"提示必须严格递增且为正: {hint}", module="verify")
        previous_hint = hint
        while q_cur < hint:
            quotients.append(1)
            q_prev, q_cur = q_cur, q_cur + q_prev
        if q_cur > hint * settings.hint_slack:
            raise HintInfeasible(f"提示 {hint} 处只能实现分母 {format_int(q_cur)}，超出允许倍数 "
                                 f"{settings.hint_slack}")
        if q_max is not None and q_cur > q_max:
            raise HintInfeasible(f"分母 {format_int(q_cur)} 超出 q_max={q_max}")
        surgical.append(q_cur)
        a = surgical_quotient(phi, q_cur)
        quotients.append(a)
        q_prev, q_cur = q_cur, a * q_cur + q_prev
    return ContinuedFractionData(partial_quotients=quotients, convergents=convergents(quotients),
                                 surgical_denominators=surgical)


def cf_witness(phi: ApproxFn, t_hint: Sequence[int], q_max: Optional[int] = None,
               settings: Optional[VerifySettings] = None) -> MatrixA:
    """
    构造 1×1 矩阵 A = [α]。

    Args:
        phi: 逼近函数
        t_hint: 严格递增的分母提示
        q_max: 可选的分母上限
        settings: 验证配置

    Returns:
        MatrixA: α 以 witness_digits 位十进制保存，附带连分数数据
    """
    settings = settings or default_settings.verify
    data = plan_quotients(phi, t_hint, q_max, settings)
    (p_last, q_last), (p_before, q_before) = data.convergents[-1], data.convergents[-2]
    digits = settings.witness_digits
    with mpmath.workdps(digits + 20):
        golden = (1 + mpmath.sqrt(5)) / 2
        alpha = (p_last * golden + p_before) / (q_last * golden + q_before)
        text = mpmath.nstr(alpha, digits)
    logger.info(f"cf_witness: 手术分母 {[format_int(q) for q in data.surgical_denominators]}, "
                f"{len(data.partial_quotients)} 个部分商")
    return MatrixA(m=1, n=1, entries=[[text]], tag="cf_witness", cf_data=data)


__all__ = ["cf_witness", "plan_quotients", "surgical_quotient", "convergents"]
