# src/models/approx_models.py
import math
from enum import Enum
from typing import Annotated, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, field_validator, model_validator


class PhiKind(Enum):
    """逼近函数 Φ 的种类"""
    POWER = "power"                        # Φ(t) = t^(−τ)
    PIECEWISE_DYADIC = "piecewise_dyadic"  # Φ(t) = 2^N t^(−e), t ∈ [2^N, 2^(N+1))
    EXP_DECAY = "exp_decay"                # Φ(t) = e^(−rate·t)
    SCALED = "scaled"                      # Φ(t) = base(t) / c
    TABLE = "table"                        # 有限表，不外推


class BasePhi(BaseModel):
    """所有逼近函数的公共字段"""
    model_config = {"frozen": True}


class PowerPhi(BasePhi):
    """幂函数 Φ(t) = t^(−τ)"""
    kind: Literal["power"] = "power"
    tau: float = Field(..., description="指数 τ，必须为正")

    @property
    def analytic_tau(self) -> Optional[float]:
        return self.tau

    @property
    def analytic_omega(self) -> Optional[float]:
        return self.tau


class PiecewiseDyadicPhi(BasePhi):
    """分段二进函数 Φ(t) = 2^N t^(−exponent)，满足 (C1) 但不满足 (∗)"""
    kind: Literal["piecewise_dyadic"] = "piecewise_dyadic"
    exponent: float = Field(3.0, description="每个二进块内的指数")

    # −log Φ(t)/log t = exponent − N·log 2/log t，两端都趋于 exponent − 1
    @property
    def analytic_tau(self) -> Optional[float]:
        return self.exponent - 1.0

    @property
    def analytic_omega(self) -> Optional[float]:
        return self.exponent - 1.0


class ExpDecayPhi(BasePhi):
    """指数衰减 Φ(t) = e^(−rate·t)，阶数为 ∞"""
    kind: Literal["exp_decay"] = "exp_decay"
    rate: float = Field(1.0, gt=0.0, description="衰减速率")

    @property
    def analytic_tau(self) -> Optional[float]:
        return math.inf

    @property
    def analytic_omega(self) -> Optional[float]:
        return math.inf


class ScaledPhi(BasePhi):
    """缩放函数 Φ(t) = base(t)/c，对应 W(Φ/c) 中的 Φ/c"""
    kind: Literal["scaled"] = "scaled"
    base: "ApproxFn"
    divisor: float = Field(..., gt=1.0, description="除数 c > 1")

    @property
    def analytic_tau(self) -> Optional[float]:
        return self.base.analytic_tau

    @property
    def analytic_omega(self) -> Optional[float]:
        return self.base.analytic_omega


class TablePhi(BasePhi):
    """有限表逼近函数。表外求值是错误，绝不外推。"""
    kind: Literal["table"] = "table"
    pairs: List[Tuple[int, float]] = Field(..., description="(t, Φ(t)) 对，t 严格递增")
    tau: Optional[float] = Field(None, description="已知时的解析下阶")
    omega: Optional[float] = Field(None, description="已知时的解析上阶")

    @field_validator("pairs")
    @classmethod
    def _check_pairs(cls, pairs: List[Tuple[int, float]]) -> List[Tuple[int, float]]:
        if not pairs:
            raise ValueError("Table 不能为空")
        previous = 0
        for t, value in pairs:
            if t <= previous:
                raise ValueError(f"Table 的键必须为严格递增的正整数: {t}")
            if not value > 0:
                raise ValueError(f"Φ({t}) 必须为正: {value}")
            previous = t
        return pairs

    @property
    def analytic_tau(self) -> Optional[float]:
        return self.tau

    @property
    def analytic_omega(self) -> Optional[float]:
        return self.omega


ApproxFn = Annotated[
    Union[PowerPhi, PiecewiseDyadicPhi, ExpDecayPhi, ScaledPhi, TablePhi],
    Field(discriminator="kind"),
]

ScaledPhi.model_rebuild()


class OrderEstimate(BaseModel):
    """窗口上的数值阶数估计"""
    tau_lower: float = Field(..., description="min −log Φ(t)/log t（网格上）")
    omega_upper: float = Field(..., description="max −log Φ(t)/log t（网格上）")
    window: Tuple[int, int]
    argmin_t: int = Field(..., description="下确界取到的位置")
    grid_size: int = 0
    analytic_tau: Optional[float] = None
    analytic_omega: Optional[float] = None

    @model_validator(mode="after")
    def _ordered(self) -> "OrderEstimate":
        if self.tau_lower > self.omega_upper:
            raise ValueError("tau_lower 不能大于 omega_upper")
        return self


class DirichletVerdict(BaseModel):
    """Φ(t) ≤ t^(−n/m) 检查结果"""
    holds: bool
    fails_at: Optional[int] = None


class MonotoneVerdict(BaseModel):
    """单调递减检查结果"""
    decreasing: bool
    fails_at: Optional[int] = Field(None, description="Φ(t+1) > Φ(t) 的最小 t")


class C1Result(BaseModel):
    """(C1) 测量结果：窗口上达到的最小 d"""
    c: float
    d_min: float = Field(..., ge=1.0)
    log_d_min: float
    violated: Optional[Tuple[int, int]] = Field(None, description="超过 d_cap 时的见证对 (t, t̃)")
    d_cap: Optional[float] = None

    @property
    def holds(self) -> bool:
        return self.violated is None


class StarVerdict(BaseModel):
    """(∗) 检查结果"""
    holds: bool
    violated: Optional[Tuple[float, int]] = Field(None, description="第一个违反的 (c, t)")
    rho: float
    constant: float = 4.0


class LogRange(BaseModel):
    """整数区间 [a, b] 上 log Φ 的极值"""
    min_log: float
    argmin: int
    max_log: float
    argmax: int
    evaluations: int = 0
