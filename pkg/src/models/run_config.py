# src/models/run_config.py
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.models.approx_models import ApproxFn


class StrictModel(BaseModel):
    """运行配置中的所有对象都拒绝未知字段"""
    model_config = ConfigDict(extra="forbid")


class RandomMatrixSpec(StrictModel):
    """由种子生成的随机矩阵（种子取 RunConfig.seed）"""
    m: int = Field(..., ge=1)
    n: int = Field(..., ge=1)


class CfWitnessSpec(StrictModel):
    """由分母提示构造的 1×1 连分数见证矩阵"""
    t_hint: List[int] = Field(..., min_length=1)
    q_max: Optional[int] = None


class MatrixSpec(StrictModel):
    """
    矩阵来源，三选一：
    entries（十进制字符串，不接受浮点数）、random、cf_witness。
    """
    entries: Optional[List[List[str]]] = None
    random: Optional[RandomMatrixSpec] = None
    cf_witness: Optional[CfWitnessSpec] = None

    @model_validator(mode="after")
    def _exactly_one(self) -> "MatrixSpec":
        given = [name for name in ("entries", "random", "cf_witness") if getattr(self, name) is not None]
        if len(given) != 1:
            raise ValueError(f"matrix 必须且只能给出 entries / random / cf_witness 之一，当前: {given}")
        return self


class TowerSpec(StrictModel):
    """t_k = base^(exponent_base^k)，k = k_from..k_to"""
    base: int = Field(2, ge=2)
    exponent_base: int = Field(2, ge=2)
    k_from: int = Field(1, ge=0)
    k_to: int = Field(..., ge=1)

    def values(self) -> List[int]:
        return [self.base ** (self.exponent_base ** k) for k in range(self.k_from, self.k_to + 1)]


class TemplateInput(StrictModel):
    """模板的公共参数；t_seq 与 tower 二选一"""
    m: int = Field(1, ge=1)
    n: int = Field(1, ge=1)
    t_seq: Optional[List[int]] = None
    tower: Optional[TowerSpec] = None
    log_delta: float = 0.0
    drop_overlapping_prefix: bool = False

    @model_validator(mode="after")
    def _one_sequence(self) -> "TemplateInput":
        if (self.t_seq is None) == (self.tower is None):
            raise ValueError("t_seq 与 tower 必须且只能给出一个")
        return self

    def sequence(self) -> List[int]:
        return list(self.t_seq) if self.t_seq is not None else self.tower.values()


class GraphParams(StrictModel):
    command: Literal["graph"] = "graph"
    q_max: float = Field(..., gt=0.0)
    step: float = Field(0.1, gt=0.0, le=0.25)
    backend: Literal["exact", "reduced"] = "exact"


class TemplateParams(TemplateInput):
    command: Literal["template"] = "template"
    q_max: Optional[float] = Field(None, description="采样上限，缺省为 c_K")
    step: float = Field(0.1, gt=0.0)
    strict: Optional[bool] = None


class ContractParams(TemplateInput):
    command: Literal["contract"] = "contract"
    tau: Optional[float] = None


class SeqParams(StrictModel):
    command: Literal["seq"] = "seq"
    c: float = Field(..., gt=1.0)
    k_target: int = Field(..., ge=1)
    t_start: int = Field(2, ge=1)
    t_cap: int = Field(2 ** 4096, ge=2)
    use_analytic: bool = True
    chi_floor: Optional[List[int]] = None
    verify: bool = Field(True, description="对结果运行 verify_sequence（d = d_theoretical）")


class ProximityCheck(StrictModel):
    kind: Literal["proximity"] = "proximity"
    q_max: float = Field(..., gt=0.0)
    step: float = Field(0.1, gt=0.0, le=0.25)
    backend: Literal["exact", "reduced"] = "exact"
    t_seq: Optional[List[int]] = Field(None, description="缺省时取 cf_witness 的手术分母")
    log_delta: float = 0.0
    T_bound: Optional[float] = None


class BadCheck(StrictModel):
    kind: Literal["bad_certificate"] = "bad_certificate"
    Q_max: float = Field(..., gt=0.0)
    chi_floor: Optional[List[int]] = None
    step: float = Field(0.1, gt=0.0, le=0.25)


class BorelCantelliCheck(StrictModel):
    kind: Literal["borel_cantelli"] = "borel_cantelli"
    m: int = Field(..., ge=1)
    n: int = Field(..., ge=2)
    N_max: int = Field(..., ge=10)


class DiagonalCheck(StrictModel):
    kind: Literal["diagonal"] = "diagonal"
    a: str
    m: int = Field(..., ge=1)
    q_max: int = Field(10 ** 4, ge=1)


class SequenceCheck(StrictModel):
    kind: Literal["sequence"] = "sequence"
    t_seq: List[int] = Field(..., min_length=1)
    c: float = Field(..., gt=1.0)
    d: float = Field(..., ge=1.0)


class VerifyParams(StrictModel):
    command: Literal["verify"] = "verify"
    check: Union[ProximityCheck, BadCheck, BorelCantelliCheck, DiagonalCheck, SequenceCheck] = Field(
        ..., discriminator="kind")


class DimsParams(StrictModel):
    command: Literal["dims"] = "dims"
    m: int = Field(..., ge=1)
    n: int = Field(..., ge=1)
    tau: Optional[float] = Field(None, description="单个 τ，可写 \"inf\"")
    taus: Optional[List[float]] = Field(None, description="给出时输出文本表")
    phi_decreasing: bool = True
    phi_star: bool = False

    @model_validator(mode="after")
    def _one_tau(self) -> "DimsParams":
        if (self.tau is None) == (self.taus is None):
            raise ValueError("tau 与 taus 必须且只能给出一个")
        return self


CommandParams = Union[GraphParams, TemplateParams, ContractParams, SeqParams, VerifyParams, DimsParams]

COMMANDS = ("graph", "template", "contract", "seq", "verify", "dims")


class RunConfig(StrictModel):
    """
    一次 CLI 调用的完整配置（JSON）。

    parameters 按 command 区分类型；未知字段一律拒绝。
    """
    command: Literal["graph", "template", "contract", "seq", "verify", "dims"]
    phi: Optional[ApproxFn] = None
    matrix: Optional[MatrixSpec] = None
    parameters: CommandParams = Field(..., discriminator="command")
    seed: Optional[int] = Field(None, description="只用于随机矩阵，原样写入输出")

    @model_validator(mode="before")
    @classmethod
    def _tag_parameters(cls, data):
        # parameters 不必重复写 command，这里补上判别字段
        if isinstance(data, dict) and isinstance(data.get("parameters"), dict):
            params = dict(data["parameters"])
            params.setdefault("command", data.get("command"))
            data = {**data, "parameters": params}
        return data

    @field_validator("seed")
    @classmethod
    def _non_negative(cls, seed: Optional[int]) -> Optional[int]:
        if seed is not None and seed < 0:
            raise ValueError("seed 必须非负")
        return seed

    @model_validator(mode="after")
    def _requirements(self) -> "RunConfig":
        if self.parameters.command != self.command:
            raise ValueError(f"parameters.command={self.parameters.command} 与 command={self.command} 不一致")
        if self.command in ("template", "contract", "seq") and self.phi is None:
            raise ValueError(f"{self.command} 需要 phi")
        if self.command == "graph" and self.matrix is None:
            raise ValueError("graph 需要 matrix")
        if self.command == "verify":
            kind = self.parameters.check.kind
            if kind in ("proximity", "bad_certificate") and self.matrix is None:
                raise ValueError(f"verify/{kind} 需要 matrix")
            if kind in ("proximity", "bad_certificate", "borel_cantelli", "sequence") and self.phi is None:
                raise ValueError(f"verify/{kind} 需要 phi")
        if self.matrix is not None:
            if self.matrix.random is not None and self.seed is None:
                raise ValueError("random 矩阵需要 seed")
            if self.matrix.cf_witness is not None and self.phi is None:
                raise ValueError("cf_witness 矩阵需要 phi")
        return self


__all__ = [
    "RunConfig", "MatrixSpec", "RandomMatrixSpec", "CfWitnessSpec", "TowerSpec", "TemplateInput",
    "GraphParams", "TemplateParams", "ContractParams", "SeqParams", "VerifyParams", "DimsParams",
    "ProximityCheck", "BadCheck", "BorelCantelliCheck", "DiagonalCheck", "SequenceCheck", "COMMANDS",
]
