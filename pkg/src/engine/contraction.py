# src/engine/contraction.py
"""
类 𝒞 模板的局部收缩率 δ(q)、平均收缩率以及下/上极限估计。

δ 在 [b_k, q_k) 上为 mn − m，其余处为 mn（断点处取右极限），积分全部闭式计算。
"""
import logging
import math
from typing import List, Optional

from src.engine.approx_fn import bounded_samples, order_estimates
from src.models.contraction_models import (
    ContractionProfile, IntervalType, LimitEstimates, PartitionInfo, UKSequence,
)
from src.models.errors import (
    ApproxFnError, InvalidParam, OutOfRange, TauUnknown,
)
from src.models.template_models import ClassCTemplate

logger = logging.getLogger(__name__)

# 积分平均超出 [mn − m, mn] 的舍入容差
RATE_TOLERANCE = 1e-9


def local_rate(T: ClassCTemplate, q: float) -> int:
    """
    q 处的局部收缩率（断点处取右极限）。

    Returns:
        int: q ∈ [b_k, q_k) 时为 mn − m，否则为 mn
    """
    mn = T.m * T.n
    for e in T.excursions:
        if e.b > q:
            break
        if q < e.q:
            return mn - T.m
    return mn


def _integral(T: ClassCTemplate, Q: float) -> float:
    # ∫_0^Q δ = mn·Q − m·|∪[b_k, q_k) ∩ [0, Q]|
    reduced = math.fsum(max(0.0, min(e.q, Q) - e.b) for e in T.excursions if e.b < Q)
    return T.m * T.n * Q - T.m * reduced


def average_rate(T: ClassCTemplate, Q: float) -> float:
    """
    平均收缩率 (1/Q)∫_0^Q δ(q) dq。

    Raises:
        OutOfRange: Q ≤ 0，或 Q 超出最后一个断点 c_K（不外推）
    """
    if not Q > 0:
        raise OutOfRange(f"Q 必须为正: {Q}")
    last = T.last_breakpoint
    if Q > last * (1.0 + 1e-12):
        raise OutOfRange(f"Q={Q:.12g} 超出最后一个断点 c_K={last:.12g}")
    lo, hi = float(T.m * T.n - T.m), float(T.m * T.n)
    value = _integral(T, Q) / Q
    if not lo - RATE_TOLERANCE <= value <= hi + RATE_TOLERANCE:
        logger.warning(f"average_rate: Q={Q:.12g} 处积分平均 {value!r} 超出 [{lo:g}, {hi:g}]，已截断")
    return min(hi, max(lo, value))


def contraction_profile(T: ClassCTemplate) -> ContractionProfile:
    """δ 的断点表示与各断点处的累计积分"""
    breakpoints = [0.0] + T.breakpoints
    rates = [local_rate(T, b) for b in breakpoints]
    integrals = [_integral(T, b) for b in breakpoints]
    return ContractionProfile(m=T.m, n=T.n, log_delta=T.log_delta, breakpoints=breakpoints,
                              rate_on_piece=rates, cumulative_integral=integrals)


def _resolve_tau(T: ClassCTemplate, tau: Optional[float]):
    if tau is not None:
        return tau, "argument"
    if T.phi is None:
        raise TauUnknown("模板没有关联 Φ，且未给出 τ")
    if T.phi.analytic_tau is not None:
        return T.phi.analytic_tau, "analytic"
    t_max = T.excursions[-1].t
    try:
        estimate = order_estimates(T.phi, 2, t_max, bounded_samples(2, t_max))
    except ApproxFnError as e:
        raise TauUnknown(f"无法数值估计 τ: {e}")
    return estimate.tau_lower, "estimated"


def limit_estimates(T: ClassCTemplate, tau: Optional[float] = None) -> LimitEstimates:
    """
    在 q_k 与 b_k 处计算平均收缩率，并与闭式极限 (n−1)m + (m+n)/(1+τ) 和 mn 比较。

    Args:
        T: 至少 3 个 excursion 的模板
        tau: Φ 的下阶；缺省时取解析值，再不行就数值估计

    Returns:
        LimitEstimates: 逐 k 序列、闭式值与差距

    Raises:
        TauUnknown: 无法得到 τ
    """
    if len(T.excursions) < 3:
        raise InvalidParam(f"至少需要 3 个 excursion，当前 {len(T.excursions)}", module="contraction")
    tau, source = _resolve_tau(T, tau)
    m, n = T.m, T.n
    closed_inf = (n - 1) * m + (m + n) / (1.0 + tau)
    closed_sup = float(m * n)
    at_q = [average_rate(T, e.q) for e in T.excursions]
    at_b = [average_rate(T, e.b) for e in T.excursions]
    logger.info(f"limit_estimates: τ={tau} ({source}), 末项 {at_q[-1]:.6g} / {at_b[-1]:.6g}, "
                f"闭式 {closed_inf:.6g} / {closed_sup:.6g}")
    return LimitEstimates(
        liminf_seq=at_q,
        limsup_seq=at_b,
        closed_form_liminf=closed_inf,
        closed_form_limsup=closed_sup,
        liminf_gaps=[v - closed_inf for v in at_q],
        limsup_gaps=[v - closed_sup for v in at_b],
        tau=tau,
        tau_source=source,
        log_delta=T.log_delta,
    )


def u_k_sequence(T: ClassCTemplate, tau: Optional[float] = None) -> UKSequence:
    """u_k = b_k/q_k；τ 已知时附带极限 (m+n)/(m(τ+1))"""
    if tau is None and T.phi is not None:
        tau = T.phi.analytic_tau
    limit = None
    if tau is not None:
        limit = (T.m + T.n) / (T.m * (tau + 1.0))
    return UKSequence(values=[e.b / e.q for e in T.excursions], limit=limit)


def partition_case(m: int, n: int, interval_type: IntervalType) -> PartitionInfo:
    """
    三类区间上的 (S₋, S₊) 划分，以及 i₊ < i₋ 的对数（即局部收缩率）。

    平坦与上升区间: S₋ = {m+1, …, m+n}, S₊ = {1, …, m}；
    下降区间: S₋ = {1, m+2, …, m+n}, S₊ = {2, …, m+1}。
    """
    if m < 1 or n < 1:
        raise InvalidParam(f"m, n 必须 ≥ 1: m={m}, n={n}", module="contraction")
    interval_type = IntervalType(interval_type)
    if interval_type is IntervalType.DESCENDING:
        s_minus = [1] + list(range(m + 2, m + n + 1))
        s_plus = list(range(2, m + 2))
    else:
        s_minus = list(range(m + 1, m + n + 1))
        s_plus = list(range(1, m + 1))
    count = sum(1 for i_plus in s_plus for i_minus in s_minus if i_plus < i_minus)
    return PartitionInfo(interval_type=interval_type, s_minus=s_minus, s_plus=s_plus, cardinality=count)


def contraction_rows(T: ClassCTemplate, tau: Optional[float] = None) -> List[list]:
    """CSV 行 k,q_k,b_k,c_k,u_k,avg_at_qk,avg_at_bk"""
    u = u_k_sequence(T, tau).values
    return [[e.k, e.q, e.b, e.c, u[i], average_rate(T, e.q), average_rate(T, e.b)]
            for i, e in enumerate(T.excursions)]


CONTRACTION_HEADER = ["k", "q_k", "b_k", "c_k", "u_k", "avg_at_qk", "avg_at_bk"]

__all__ = [
    "local_rate", "average_rate", "contraction_profile", "limit_estimates", "u_k_sequence",
    "partition_case", "contraction_rows", "CONTRACTION_HEADER",
]
