# src/models/contraction_models.py
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field


class IntervalType(Enum):
    """局部收缩率分析中的三类区间"""
    FLAT = "flat"              # 所有分量为 0
    DESCENDING = "descending"  # (b_k, q_k)，f_1 下降
    ASCENDING = "ascending"    # (q_k, c_k)，f_1 回升


class ContractionProfile(BaseModel):
    """
    模板局部收缩率 δ(q) 的分段精确表示。

    rate_on_piece[i] 是 [breakpoints[i], breakpoints[i+1]) 上的 δ，
    最后一段延伸到无穷（平坦，δ = mn）。
    """
    m: int
    n: int
    log_delta: float
    breakpoints: List[float] = Field(..., description="0, b_1, q_1, c_1, b_2, …")
    rate_on_piece: List[int]
    cumulative_integral: List[float] = Field(..., description="∫_0^breakpoint δ(q) dq")


class LimitEstimates(BaseModel):
    """平均收缩率在 q_k（局部极小）与 b_k（局部极大）处的序列及闭式极限"""
    liminf_seq: List[float]
    limsup_seq: List[float]
    closed_form_liminf: float
    closed_form_limsup: float
    liminf_gaps: List[float]
    limsup_gaps: List[float]
    tau: float
    tau_source: str = Field(..., description="argument / analytic / estimated")
    log_delta: float


class UKSequence(BaseModel):
    """u_k = b_k/q_k 及其闭式极限 (m+n)/(m(τ+1))"""
    values: List[float]
    limit: Optional[float] = None


class PartitionInfo(BaseModel):
    """某类区间上的划分 (S₋, S₊) 以及 #{i₊ < i₋}"""
    interval_type: IntervalType
    s_minus: List[int]
    s_plus: List[int]
    cardinality: int


__all__ = ["IntervalType", "ContractionProfile", "LimitEstimates", "UKSequence", "PartitionInfo"]
