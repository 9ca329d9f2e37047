# src/engine/dims.py
"""维数公式与阈值常数的闭式计算。τ = ∞ 用 math.inf 表示。"""
import logging
import math
from typing import Optional, Sequence

from src.models.dim_models import Applicability, DimReport, ProductBounds
from src.models.errors import InvalidTau
from src.utils.display_utils import format_table

logger = logging.getLogger(__name__)

# (5+√17)/2，m = 1 时的阈值，也是 (b) 中的固定常数
TAU_ONE = (5.0 + math.sqrt(17.0)) / 2.0
# τ_m 递减的极限 (3+√5)/2
TAU_LIMIT = (3.0 + math.sqrt(5.0)) / 2.0


def theta(m: int, n: int) -> float:
    """θ_{m,n} = max{n+1, m+2}/m"""
    return max(n + 1, m + 2) / m


def _fraction_of_tau(numerator: float, tau: float) -> float:
    # numerator/(1+τ)，τ = ∞ 时为 0
    return 0.0 if math.isinf(tau) else numerator / (1.0 + tau)


def hausdorff_bad(m: int, n: int, tau: float) -> float:
    """dim_H Bad(Φ) = (n−1)m + (m+n)/(1+τ)"""
    return (n - 1) * m + _fraction_of_tau(m + n, tau)


def dim_formulas(m: int, n: int, tau: float, phi_decreasing: bool = True,
                 phi_star: bool = False) -> DimReport:
    """
    计算全部维数公式与适用性。

    Args:
        m, n: 形状
        tau: 下阶 τ ≥ n/m，可以为 math.inf
        phi_decreasing: Φ 是否单调递减
        phi_star: Φ 是否满足 (∗)

    Returns:
        DimReport: 公式值与适用性

    Raises:
        InvalidTau: τ < n/m
    """
    if m < 1 or n < 1:
        raise InvalidTau(f"m, n 必须 ≥ 1: m={m}, n={n}")
    if math.isnan(tau) or tau < n / m - 1e-12:
        raise InvalidTau(f"τ={tau} 小于 Dirichlet 指数 n/m={n / m:.6g}")
    th = theta(m, n)
    applies_a = tau > th and phi_decreasing
    applies_b = tau > max(th, TAU_ONE)
    applies_remark = tau > th and phi_star
    applicability = {
        "exact_lower_a": Applicability(applies=applies_a, reason="τ > θ 且 Φ 单调递减"),
        "exact_lower_b": Applicability(applies=applies_b, reason="τ > max{θ, (5+√17)/2}"),
        "remark_bound": Applicability(applies=applies_remark, reason="τ > θ 且 Φ 满足 (∗)"),
        "resm_threshold": Applicability(applies=m == 1, reason="τ_m 只对 m = 1 给出，其余 m 只有极限 (3+√5)/2"),
    }
    report = DimReport(
        m=m, n=n, tau=tau,
        hausdorff_bad=hausdorff_bad(m, n, tau),
        packing_bad=float(m * n),
        exact_lower_a=m * (n - 1) + _fraction_of_tau(m + 1, tau) if applies_a else None,
        exact_lower_b=float(m * (n - 1)) if applies_b else None,
        exact_packing=float(m * n) if applies_b else None,
        remark_bound=m * (n - 1) + _fraction_of_tau(2, tau) if applies_remark else None,
        theta=th,
        resm_threshold=TAU_ONE if m == 1 else None,
        resm_limit=TAU_LIMIT,
        applicability=applicability,
    )
    logger.debug(f"dim_formulas: {m}x{n}, τ={tau}, dim_H={report.hausdorff_bad:.6g}")
    return report


def product_bounds(dim_h_a: float, dim_p_a: float, dim_h_b: float, dim_p_b: float) -> ProductBounds:
    """
    Tricot 不等式：
    dim_H A + dim_H B ≤ dim_H(A×B) ≤ min{dim_H A + dim_P B, dim_P A + dim_H B}
                    ≤ max{...} ≤ dim_P(A×B) ≤ dim_P A + dim_P B
    """
    if dim_h_a > dim_p_a or dim_h_b > dim_p_b:
        raise ValueError("Hausdorff 维数不能超过 packing 维数")
    mixed = (dim_h_a + dim_p_b, dim_p_a + dim_h_b)
    return ProductBounds(hausdorff_lower=dim_h_a + dim_h_b, hausdorff_upper=min(mixed),
                         packing_lower=max(mixed), packing_upper=dim_p_a + dim_p_b)


def dims_table(m: int, n: int, taus: Sequence[float], phi_decreasing: bool = True,
               phi_star: bool = False) -> str:
    """一组 τ 的对齐文本表"""
    rows = []
    for tau in taus:
        r = dim_formulas(m, n, tau, phi_decreasing, phi_star)
        rows.append([r.tau, r.hausdorff_bad, r.packing_bad, _cell(r.exact_lower_a),
                     _cell(r.exact_lower_b), _cell(r.remark_bound)])
    return format_table(["tau", "dim_H Bad", "dim_P Bad", "Exact (a)", "Exact (b)", "Exact (∗)"], rows)


def _cell(value: Optional[float]):
    return "-" if value is None else value


__all__ = ["theta", "hausdorff_bad", "dim_formulas", "product_bounds", "dims_table", "TAU_ONE", "TAU_LIMIT"]
