# src/engine/verify/borel_cantelli.py
"""
体积界级数 Σ Φ(N)^m N^max{1+m, n} (log N)^δ(n, m+1) 的部分和与收敛性判定。
"""
import logging
import math
from typing import Optional

import numpy as np

from src.config import default_settings
from src.config.config_loader import VerifySettings
from src.engine.approx_fn import bounded_samples, eval_phi, order_estimates
from src.models.approx_models import ApproxFn
from src.models.errors import InvalidParam
from src.models.report_models import BorelCantelliResult, SeriesVerdict

logger = logging.getLogger(__name__)


def series_theta(m: int, n: int) -> float:
    """θ = max{n+1, m+2}/m"""
    return max(n + 1, m + 2) / m


def borel_cantelli_sum(phi: ApproxFn, m: int, n: int, N_max: int,
                       settings: Optional[VerifySettings] = None) -> BorelCantelliResult:
    """
    计算 N = 2..N_max 的部分和，并按尾部 log-log 斜率判定收敛性。

    斜率 β < −1 − margin 判为收敛，β > −1 + margin 判为发散，其余不确定。

    Args:
        phi: 逼近函数
        m, n: 形状，n ≥ 2
        N_max: 求和上限，≥ 10
        settings: 验证配置

    Returns:
        BorelCantelliResult: 部分和、θ、实测 τ 与判定
    """
    settings = settings or default_settings.verify
    if m < 1 or n < 2:
        raise InvalidParam(f"需要 m ≥ 1 且 n ≥ 2: m={m}, n={n}", module="verify")
    if N_max < 10:
        raise InvalidParam(f"N_max 必须 ≥ 10: {N_max}", module="verify")

    delta = 1 if n == m + 1 else 0
    N = np.arange(2, N_max + 1, dtype=np.float64)
    log_phi = np.array([eval_phi(phi, int(t)) for t in range(2, N_max + 1)])
    log_terms = m * log_phi + max(1 + m, n) * np.log(N) + delta * np.log(np.log(N))
    partial = np.cumsum(np.exp(log_terms))

    tail = slice(len(N) // 2, None)
    slope, _ = np.polyfit(np.log(N[tail]), log_terms[tail], 1)
    if slope < -1.0 - settings.bc_margin:
        verdict = SeriesVerdict.CONVERGING
    elif slope > -1.0 + settings.bc_margin:
        verdict = SeriesVerdict.DIVERGING
    else:
        verdict = SeriesVerdict.INCONCLUSIVE

    tau = order_estimates(phi, 2, N_max, bounded_samples(2, N_max)).tau_lower
    theta = series_theta(m, n)
    logger.info(f"borel_cantelli_sum: m={m}, n={n}, β={slope:.4g}, τ≈{tau:.4g}, θ={theta:.4g}, {verdict.value}")
    return BorelCantelliResult(m=m, n=n, theta=theta, delta=delta, partial_sums=partial.tolist(),
                               tau_measured=tau, decay_exponent=float(slope), verdict=verdict)


__all__ = ["borel_cantelli_sum", "series_theta"]
