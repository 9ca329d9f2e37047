from typing import Any, Optional


class ToolkitError(ValueError):
    """
    所有工具包错误的基类。

    code 为带模块前缀的错误码，例如 "approx_fn.TableMiss"，CLI 据此决定退出码。
    """
    module: str = "toolkit"

    def __init__(self, message: str = "", module: Optional[str] = None, **details: Any):
        super().__init__(message or self.__class__.__name__)
        self.details = details
        if module:
            self.module = module

    @property
    def code(self) -> str:
        return f"{self.module}.{self.__class__.__name__}"


# --- approx_fn ---
class ApproxFnError(ToolkitError):
    module = "approx_fn"


class InvalidParam(ApproxFnError):
    pass


class TableMiss(ApproxFnError):
    def __init__(self, t: int):
        super().__init__(f"Table 中没有键 t={t}", t=t)
        self.t = t


class WindowTooSmall(ApproxFnError):
    pass


# --- lattice_graph ---
class LatticeGraphError(ToolkitError):
    module = "lattice_graph"


class ZeroFirstBlock(LatticeGraphError):
    pass


class BudgetExceeded(LatticeGraphError):
    def __init__(self, message: str, radius: Optional[float] = None,
                 module: Optional[str] = None, **details: Any):
        super().__init__(message, module=module, radius=radius, **details)
        self.radius = radius


class PrecisionLoss(LatticeGraphError):
    pass


# --- template ---
class TemplateError(ToolkitError):
    module = "template"


class NonNegativeMinimum(TemplateError):
    def __init__(self, k: int, f1: float):
        super().__init__(f"第 {k} 个 excursion 的极小值 f1={f1:.6g} 不为负", k=k, f1=f1)
        self.k = k


class OverlappingExcursions(TemplateError):
    def __init__(self, k: int, c_k: float, b_next: float):
        super().__init__(f"excursion {k} 与下一个重叠: c_k={c_k:.12g} >= b_(k+1)={b_next:.12g}",
                         k=k, c_k=c_k, b_next=b_next)
        self.k = k


# --- contraction ---
class ContractionError(ToolkitError):
    module = "contraction"


class OutOfRange(ContractionError):
    pass


class TauUnknown(ContractionError):
    pass


# --- sequence_finder ---
class SequenceFinderError(ToolkitError):
    module = "sequence_finder"


class CapExceeded(SequenceFinderError):
    def __init__(self, k: int, certificate: Any = None):
        super().__init__(f"在得到第 {k} 项之前达到 t_cap", k=k)
        self.k = k
        self.certificate = certificate


class NotDecreasing(SequenceFinderError):
    pass


class CaseUndecidable(SequenceFinderError):
    pass


# --- verify ---
class VerifyError(ToolkitError):
    module = "verify"


class GridMismatch(VerifyError):
    pass


class HintInfeasible(VerifyError):
    pass


# --- dims ---
class DimsError(ToolkitError):
    module = "dims"


class InvalidTau(DimsError):
    pass


# --- cli ---
class CliError(ToolkitError):
    module = "cli"


class ConfigInvalid(CliError):
    pass


class IoError(CliError):
    pass
