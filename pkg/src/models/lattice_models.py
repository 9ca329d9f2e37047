# src/models/lattice_models.py
import math
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from src.config import default_settings


class ContinuedFractionData(BaseModel):
    """连分数见证矩阵的来源数据"""
    partial_quotients: List[int] = Field(..., description="a_1, a_2, ...（α = [0; a_1, a_2, ...]，尾部为黄金比例）")
    convergents: List[Tuple[int, int]] = Field(..., description="(p_k, q_k) 渐近分数")
    surgical_denominators: List[int] = Field(default_factory=list, description="被设置大部分商的分母 q_k")


class MatrixA(BaseModel):
    """
    实 m×n 矩阵 A，定义格 {(q, Aq−p)}。

    元素以十进制字符串保存，只在需要时转换为精确有理数或工作精度。
    """
    m: int = Field(..., ge=1)
    n: int = Field(..., ge=1)
    entries: List[List[str]] = Field(..., description="m 行 n 列的十进制字符串")
    tag: Optional[str] = Field(None, description="来源: random / cf_witness / diagonal / 手工")
    cf_data: Optional[ContinuedFractionData] = None

    @field_validator("entries", mode="before")
    @classmethod
    def _stringify(cls, entries):
        # 允许传入数值，但统一成十进制字符串
        return [[e if isinstance(e, str) else repr(e) for e in row] for row in entries]

    @model_validator(mode="after")
    def _check_shape(self) -> "MatrixA":
        cap = default_settings.lattice.dimension_cap
        if self.m + self.n > cap:
            raise ValueError(f"m+n={self.m + self.n} 超过维数上限 {cap}")
        if len(self.entries) != self.m or any(len(row) != self.n for row in self.entries):
            raise ValueError(f"entries 形状应为 {self.m}×{self.n}")
        for row in self.entries:
            for entry in row:
                try:
                    value = Decimal(entry)
                except InvalidOperation:
                    raise ValueError(f"矩阵元素不是十进制数: {entry!r}")
                if not value.is_finite():
                    raise ValueError(f"矩阵元素必须有限: {entry}")
        return self

    @property
    def dimension(self) -> int:
        return self.m + self.n

    def exact_entries(self) -> List[List[Fraction]]:
        """十进制字符串对应的精确有理数"""
        return [[Fraction(Decimal(e)) for e in row] for row in self.entries]


class LatticeVector(BaseModel):
    """格向量 (q, p)，附带 ‖q‖∞ 与 log‖Aq−p‖∞"""
    q: List[int]
    p: List[int]
    first_norm: float = Field(..., description="‖q‖∞")
    log_second: float = Field(..., description="log‖Aq−p‖∞，残差为 0 时为 −∞")

    @model_validator(mode="after")
    def _nonzero(self) -> "LatticeVector":
        if not any(self.q) and not any(self.p):
            raise ValueError("(p, q) 不能为零向量")
        return self

    @property
    def log_first(self) -> float:
        return math.log(self.first_norm) if self.first_norm > 0 else -math.inf


class SuccessiveMinima(BaseModel):
    """单个参数 q = log Q 处的逐次极小"""
    log_Q: float
    log_lambda: List[float] = Field(..., description="h_1(q) ≤ … ≤ h_{m+n}(q)")
    witnesses: List[LatticeVector]
    backend: str = Field(..., description="exact 或 reduced")


class GraphMinimum(BaseModel):
    """h_1 的局部极小（按见证轨迹的顶点精化）"""
    r: float
    h1_at_r: float
    witness: Optional[LatticeVector] = None
    grid_index: Optional[int] = None


class CombinedGraph(BaseModel):
    """采样的逐次极小函数 h_1..h_{m+n}"""
    m: int
    n: int
    grid: List[float]
    values: List[List[float]] = Field(..., description="每个网格点一行，m+n 列")
    minima: List[GraphMinimum] = Field(default_factory=list)
    backend: str
    first_witnesses: List[Optional[LatticeVector]] = Field(default_factory=list, description="每个网格点 λ_1 的见证")
    slope_violations: List[Tuple[int, int, float]] = Field(default_factory=list,
                                                           description="(网格下标, j, 差商) 诊断")

    @property
    def step(self) -> float:
        return self.grid[1] - self.grid[0] if len(self.grid) > 1 else 0.0
