# src/models/report_models.py
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field

from src.models.lattice_models import LatticeVector, MatrixA


class MinimumMatch(BaseModel):
    """模板极小 (q_k, f_1(q_k)) 与组合图极小的对应"""
    k: int
    q_k: float
    f1_at_qk: float
    matched_r: Optional[float] = None
    matched_h1: Optional[float] = None
    witness: Optional[LatticeVector] = None
    box_distance: Optional[float] = Field(None, description="max(|r_k − q_k|, |h_1(r_k) − f_1(q_k)|)")
    candidates: int = Field(0, description="C 盒子内的组合图极小个数")
    strict_hit: Optional[bool] = Field(None, description="‖Aq_k − p_k‖ < Φ(‖q_k‖) 是否成立")
    predicted_x: Optional[float] = Field(None, description="预测的 log‖q_k‖")
    predicted_y: Optional[float] = Field(None, description="预测的 log‖Aq_k − p_k‖")


class StrayMinimum(BaseModel):
    """没有对应模板极小的组合图极小"""
    r: float
    h1: float
    deep: bool = Field(..., description="h_1 < −C")


class ProximityReport(BaseModel):
    """模板与组合图的接近程度及极小对应"""
    T_measured: float
    C1: float
    C2: float
    C3: float
    C_used: float
    per_minimum: List[MinimumMatch] = Field(default_factory=list)
    stray_minima: List[StrayMinimum] = Field(default_factory=list)
    minima_consistent: bool
    grid_points: int = 0


class BestApproximation(BaseModel):
    """一个最佳逼近向量 (p, q) 的分类"""
    q: List[int]
    p: List[int]
    q_norm: int
    log_residual: float
    log_phi: float
    hit: bool = Field(..., description="log‖Aq−p‖ < log Φ(‖q‖)（严格）")
    lower_ratio: float = Field(..., description="log‖Aq−p‖ − log Φ(‖q‖)")
    upper_margin: float = Field(..., description="log‖Aq−p‖ + (n/m)·log‖q‖")
    boundary: bool = False


class BadCertificate(BaseModel):
    """有限尺度下的 Bad(Φ) 证书"""
    matrix: MatrixA
    Q_max: float
    q_bound: float = Field(..., description="枚举的 ‖q‖ 上界（log 形式）")
    approximations: List[BestApproximation] = Field(default_factory=list)
    lower_constant: Optional[float] = Field(None, description="命中中的 min lower_ratio")
    floor_constant: Optional[float] = Field(None, description="非命中中的 inf upper_margin")
    rational_degenerate: bool = False
    chi_ok: Optional[bool] = None

    @property
    def hits(self) -> List[BestApproximation]:
        return [a for a in self.approximations if a.hit]

    @property
    def hit_denominators(self) -> List[int]:
        return [a.q_norm for a in self.hits]


class SeriesVerdict(Enum):
    """级数收敛性的数值判定"""
    CONVERGING = "converging"
    DIVERGING = "diverging"
    INCONCLUSIVE = "inconclusive"


class BorelCantelliResult(BaseModel):
    """Σ Φ(N)^m N^max{1+m, n} (log N)^δ 的部分和与判定"""
    m: int
    n: int
    theta: float = Field(..., description="max{n+1, m+2}/m")
    delta: int = Field(..., description="n = m+1 时为 1")
    partial_sums: List[float]
    tau_measured: float
    decay_exponent: float = Field(..., description="尾部 log 被加项对 log N 的拟合斜率")
    verdict: SeriesVerdict


class DiagonalEmbedReport(BaseModel):
    """对角嵌入 (a, …, a) 的逼近质量对比"""
    a: str
    m: int
    column: List[str]
    q_checked: int
    max_difference: float
    holds: bool

    def as_matrix(self) -> MatrixA:
        return MatrixA(m=self.m, n=1, entries=[[value] for value in self.column], tag="diagonal")


__all__ = [
    "MinimumMatch", "StrayMinimum", "ProximityReport", "BestApproximation", "BadCertificate",
    "SeriesVerdict", "BorelCantelliResult", "DiagonalEmbedReport",
]
