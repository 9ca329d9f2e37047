# src/models/template_models.py
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field

from src.models.approx_models import ApproxFn


class Excursion(BaseModel):
    """模板的一次 excursion：f_1 在 (b_k, c_k) 上下探，在 q_k 处取极小"""
    k: int = Field(..., ge=1)
    t: int = Field(..., ge=2, description="t_k")
    log_t: float
    log_phi: float = Field(..., description="log Φ(t_k)")
    q: float = Field(..., description="q_k")
    f1: float = Field(..., lt=0.0, description="f_1(q_k)")
    b: float = Field(..., description="b_k = q_k + n·f_1(q_k)")
    c: float = Field(..., description="c_k = q_k − m·f_1(q_k)")


class ClassCTemplate(BaseModel):
    """
    由 (Φ, t_k, Δ) 构造的 m×n 模板，只按断点保存。

    [0, b_1] 以及各 [c_k, b_(k+1)] 上所有分量为 0。
    """
    model_config = {"frozen": True}

    m: int = Field(..., ge=1)
    n: int = Field(..., ge=1)
    log_delta: float = Field(0.0, ge=0.0, description="log Δ")
    excursions: List[Excursion] = Field(default_factory=list)
    lacunarity: List[float] = Field(default_factory=list, description="log t_(k+1) / log t_k")
    touching: List[int] = Field(default_factory=list, description="c_k = b_(k+1) 的 k")
    dropped_prefix: List[int] = Field(default_factory=list, description="因重叠被丢弃的 t_k")
    phi: Optional[ApproxFn] = None

    @property
    def t_seq(self) -> List[int]:
        return [e.t for e in self.excursions]

    @property
    def breakpoints(self) -> List[float]:
        """b_1, q_1, c_1, b_2, …（非降）"""
        points = []
        for e in self.excursions:
            points.extend((e.b, e.q, e.c))
        return points

    @property
    def last_breakpoint(self) -> float:
        return self.excursions[-1].c if self.excursions else 0.0


class TemplateCheck(BaseModel):
    """validate_template 中单个 k 的检查结果"""
    k: int
    ordered: bool = Field(..., description="b_k < q_k < c_k")
    separated: bool = Field(..., description="c_k < b_(k+1)（最后一项恒为真）")
    reconstruction_error: float = Field(..., description="|q_k − (m·b_k + n·c_k)/(m+n)|")


class TemplateReport(BaseModel):
    """模板公理检查报告（只报告，不抛异常）"""
    passed: bool
    checks: List[TemplateCheck] = Field(default_factory=list)
    f1_slopes: List[float] = Field(default_factory=list)
    fj_slopes: List[float] = Field(default_factory=list)
    max_sum_error: float = 0.0
    failures: List[str] = Field(default_factory=list, description="失败原因，格式为 '错误码: 说明'")


class TemplateSample(BaseModel):
    """模板在均匀网格上的采样"""
    grid: List[float]
    values: List[List[float]]


class ProjectedCoordinates(BaseModel):
    """第 k 个极小处预测的 (log‖q_k‖, log‖Aq_k − p_k‖)"""
    k: int
    x: float = Field(..., description="q_k/n + f_1(q_k)")
    y: float = Field(..., description="f_1(q_k) − q_k/m")


__all__ = [
    "Excursion", "ClassCTemplate", "TemplateCheck", "TemplateReport",
    "TemplateSample", "ProjectedCoordinates",
]
