# src/models/dim_models.py
from typing import Dict, Optional

from pydantic import BaseModel, Field


class Applicability(BaseModel):
    """某个下界是否适用，以及条件原文"""
    applies: bool
    reason: str


class DimReport(BaseModel):
    """维数公式与阈值常数"""
    m: int = Field(..., ge=1)
    n: int = Field(..., ge=1)
    tau: float = Field(..., description="下阶 τ，可以为 inf")
    hausdorff_bad: float = Field(..., description="(n−1)m + (m+n)/(1+τ)")
    packing_bad: float = Field(..., description="mn")
    exact_lower_a: Optional[float] = Field(None, description="m(n−1) + (m+1)/(1+τ)")
    exact_lower_b: Optional[float] = Field(None, description="m(n−1)")
    exact_packing: Optional[float] = Field(None, description="mn（与 exact_lower_b 同条件）")
    remark_bound: Optional[float] = Field(None, description="m(n−1) + 2/(τ+1)")
    theta: float = Field(..., description="max{n+1, m+2}/m")
    resm_threshold: Optional[float] = Field(None, description="τ_m，仅 m = 1 时已知")
    resm_limit: float = Field(..., description="τ_m 的极限 (3+√5)/2")
    applicability: Dict[str, Applicability] = Field(default_factory=dict)


class ProductBounds(BaseModel):
    """乘积集维数的 Tricot 不等式界"""
    hausdorff_lower: float
    hausdorff_upper: float
    packing_lower: float
    packing_upper: float


__all__ = ["Applicability", "DimReport", "ProductBounds"]
