# src/models/sequence_models.py
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field


class SearchCase(Enum):
    """构造性搜索使用的分支"""
    RATIO_SPLIT = "ratio_split"  # ω > τ：在 [r_k, s_k] 中找比值 c² 的好块
    DOUBLING = "doubling"        # ω = τ：ℓ ← c²ℓ 直到满足拒绝不等式的反面


class SequenceTerm(BaseModel):
    """证书中的一项 t_k 及其搜索轨迹"""
    k: int = Field(..., ge=1)
    t: int
    order_ratio: float = Field(..., description="−log Φ(t_k)/log t_k")
    lacunarity_ratio: Optional[float] = Field(None, description="log t_k / log t_(k−1)")
    log_distortion: float = Field(..., description="[⌈t_k/c⌉, ⌊c·t_k⌋] 上的 max |log Φ(t̃) − log Φ(t_k)|")
    trace: Dict[str, Any] = Field(default_factory=dict, description="δ_k, ℓ_k, r_k, s_k, g, 选中的块等")


class SequenceCert(BaseModel):
    """
    find_sequence 的证书。

    对每个 k 与 [⌈t_k/c⌉, ⌊c·t_k⌋] 中的每个整数 t̃，|log Φ(t̃) − log Φ(t_k)| ≤ log d_achieved。
    """
    c: float = Field(..., gt=1.0)
    case_used: SearchCase
    tau: float
    omega: float
    slack: float
    d_theoretical: float
    d_achieved: float = Field(1.0, ge=1.0)
    terms: List[SequenceTerm] = Field(default_factory=list)
    rejection_runs: List[Tuple[int, int]] = Field(default_factory=list, description="(ℓ, 连续拒绝次数 K)")
    case_note: Optional[str] = None

    @property
    def t_seq(self) -> List[int]:
        return [term.t for term in self.terms]

    @property
    def order_trace(self) -> List[float]:
        return [term.order_ratio for term in self.terms]

    @property
    def lacunarity_trace(self) -> List[float]:
        return [term.lacunarity_ratio for term in self.terms if term.lacunarity_ratio is not None]


class VerifySequenceReport(BaseModel):
    """verify_sequence 的结果"""
    passed: bool
    d: float
    worst_k: Optional[int] = None
    worst_t: Optional[int] = Field(None, description="取到最大畸变的 t̃")
    worst_log_distortion: float = 0.0
    evaluations: int = 0

    @property
    def worst(self) -> Tuple[Optional[int], Optional[int], float]:
        return self.worst_k, self.worst_t, self.worst_log_distortion


__all__ = ["SearchCase", "SequenceTerm", "SequenceCert", "VerifySequenceReport"]
