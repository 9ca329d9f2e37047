# src/engine/verify/bad_certificate.py
"""
有限尺度下的 Bad(Φ) 证书：把最佳逼近向量分成命中（‖Aq−p‖ < Φ(‖q‖)）与其余，
并测量两个隐含常数。
"""
import logging
import math
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

from src.config import default_settings
from src.config.config_loader import LatticeSettings, VerifySettings
from src.engine.approx_fn import eval_phi
from src.engine.lattice_graph import combined_graph, first_minimum_witnesses
from src.models.approx_models import ApproxFn
from src.models.errors import InvalidParam
from src.models.lattice_models import MatrixA
from src.models.report_models import BadCertificate, BestApproximation

logger = logging.getLogger(__name__)

BOUNDARY_TOLERANCE = 1e-12


def _log_fraction(value: Fraction) -> float:
    if value == 0:
        return -math.inf
    return math.log(value.numerator) - math.log(value.denominator)


def fraction_convergents(alpha: Fraction) -> Iterator[Tuple[int, int]]:
    """有理数 α 的全部渐近分数 (p_k, q_k)"""
    p_prev, q_prev = 0, 1
    p_cur, q_cur = 1, 0
    x = alpha
    while True:
        a = math.floor(x)
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        yield p_cur, q_cur
        remainder = x - a
        if remainder == 0:
            return
        x = 1 / remainder


def _scalar_candidates(A: MatrixA, q_limit: float, min_denominator: int) -> List[Tuple[List[int], List[int], Fraction]]:
    alpha = A.exact_entries()[0][0]
    result = []
    for p, q in fraction_convergents(alpha):
        if q > q_limit:
            break
        if q < min_denominator or (result and result[-1][0][0] == q):
            continue
        result.append(([q], [p], abs(q * alpha - p)))
    return result


def _graph_candidates(A: MatrixA, Q_max: float, step: float, q_limit: float,
                      settings: Optional[LatticeSettings]) -> List[Tuple[List[int], List[int], Fraction]]:
    exact = A.exact_entries()
    graph = combined_graph(A, Q_max, step, backend="exact", settings=settings)
    result = []
    for witness in first_minimum_witnesses(graph):
        q_norm = max(abs(v) for v in witness.q)
        if q_norm > q_limit:
            continue
        residual = max(abs(sum((row[j] * witness.q[j] for j in range(A.n)), Fraction(0)) - witness.p[i])
                       for i, row in enumerate(exact))
        result.append((list(witness.q), list(witness.p), residual))
    return result


def bad_certificate(A: MatrixA, phi: ApproxFn, Q_max: float,
                    chi_floor: Optional[Sequence[int]] = None, step: float = 0.1,
                    settings: Optional[VerifySettings] = None,
                    lattice_settings: Optional[LatticeSettings] = None) -> BadCertificate:
    """
    构造 Bad(Φ) 证书。

    m = n = 1 时最佳逼近就是连分数渐近分数；一般情形取组合图在 [0, Q_max] 上碰到的 λ_1 见证。

    Args:
        A: 矩阵
        phi: 逼近函数
        Q_max: 组合图参数上限
        chi_floor: 可选的逐项下界，第 k 个命中要求 ‖q‖ > chi_floor[k−1]
        step: 一般情形下组合图的步长
        settings: 验证配置
        lattice_settings: 格配置（枚举预算等）

    Returns:
        BadCertificate: 命中、下常数与下界常数

    Raises:
        BudgetExceeded: 精确枚举超出预算
    """
    settings = settings or default_settings.verify
    if not Q_max > 0:
        raise InvalidParam(f"Q_max 必须为正: {Q_max}", module="verify")
    m, n = A.m, A.n
    log_bound = Q_max * (1.0 + n / m)
    q_limit = math.exp(min(log_bound, 700.0))
    if m == 1 and n == 1:
        candidates = _scalar_candidates(A, q_limit, settings.min_denominator)
    else:
        candidates = _graph_candidates(A, Q_max, step, q_limit, lattice_settings)

    approximations: List[BestApproximation] = []
    for q, p, residual in candidates:
        q_norm = max(abs(v) for v in q)
        if q_norm < settings.min_denominator:
            continue
        log_residual = _log_fraction(residual)
        log_phi = eval_phi(phi, q_norm)
        lower_ratio = log_residual - log_phi
        approximations.append(BestApproximation(
            q=q, p=p, q_norm=q_norm, log_residual=log_residual, log_phi=log_phi,
            hit=log_residual < log_phi, lower_ratio=lower_ratio,
            upper_margin=log_residual + (n / m) * math.log(q_norm),
            boundary=abs(lower_ratio) <= BOUNDARY_TOLERANCE,
        ))

    hits = [a for a in approximations if a.hit]
    others = [a for a in approximations if not a.hit]
    chi_ok = None
    if chi_floor:
        chi_ok = all(a.q_norm > floor for a, floor in zip(hits, chi_floor))
    certificate = BadCertificate(
        matrix=A,
        Q_max=Q_max,
        q_bound=log_bound,
        approximations=approximations,
        lower_constant=min((a.lower_ratio for a in hits), default=None),
        floor_constant=min((a.upper_margin for a in others), default=None),
        rational_degenerate=any(a.log_residual == -math.inf for a in approximations),
        chi_ok=chi_ok,
    )
    if any(a.boundary for a in others):
        logger.warning("bad_certificate: 存在恰好落在边界 ‖Aq−p‖ = Φ(‖q‖) 上的向量，按非命中处理")
    logger.info(f"bad_certificate: {len(approximations)} 个最佳逼近, {len(hits)} 个命中, "
                f"退化={certificate.rational_degenerate}")
    return certificate


__all__ = ["bad_certificate", "fraction_convergents"]
