# src/engine/approx_fn.py
"""
逼近函数 Φ 的求值、阶数估计与正则性条件检查。

所有 Φ 值都在 log 空间中返回：e^(−t) 之类的值在普通浮点数中会下溢。
"""
import bisect
import logging
import math
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from src.config import default_settings
from src.config.config_loader import ApproxSettings
from src.models.approx_models import (
    ApproxFn, C1Result, DirichletVerdict, ExpDecayPhi, LogRange, MonotoneVerdict,
    OrderEstimate, PiecewiseDyadicPhi, PowerPhi, ScaledPhi, StarVerdict, TablePhi,
)
from src.models.errors import BudgetExceeded, InvalidParam, TableMiss, WindowTooSmall

logger = logging.getLogger(__name__)

LOG2 = math.log(2.0)
# 超过该值时 float(exp) 溢出，改用 mpmath
_FLOAT_EXP_LIMIT = 700.0


# --- 求值 ---

def _log_power(phi: PowerPhi, t: int) -> float:
    if not phi.tau > 0:
        raise InvalidParam(f"Power 的 τ 必须为正: {phi.tau}")
    return -phi.tau * math.log(t)


def _log_dyadic(phi: PiecewiseDyadicPhi, t: int) -> float:
    block = t.bit_length() - 1
    return block * LOG2 - phi.exponent * math.log(t)


def _log_exp_decay(phi: ExpDecayPhi, t: int) -> float:
    try:
        return -phi.rate * float(t)
    except OverflowError:
        raise InvalidParam(f"ExpDecay 无法在 t≈2^{t.bit_length()} 处求值")


def _log_scaled(phi: ScaledPhi, t: int) -> float:
    return eval_phi(phi.base, t) - math.log(phi.divisor)


def _table_index(phi: TablePhi, t: int) -> int:
    i = bisect.bisect_left(phi.pairs, t, key=lambda pair: pair[0])
    if i == len(phi.pairs) or phi.pairs[i][0] != t:
        raise TableMiss(t)
    return i


def _log_table(phi: TablePhi, t: int) -> float:
    return math.log(phi.pairs[_table_index(phi, t)][1])


_LOG_EVALUATORS: Dict[str, Callable[[ApproxFn, int], float]] = {
    "power": _log_power,
    "piecewise_dyadic": _log_dyadic,
    "exp_decay": _log_exp_decay,
    "scaled": _log_scaled,
    "table": _log_table,
}


def eval_phi(phi: ApproxFn, t: int) -> float:
    """
    返回 log Φ(t)。

    Args:
        phi: 逼近函数
        t: 正整数

    Returns:
        float: log Φ(t)
    """
    if t < 1:
        raise InvalidParam(f"t 必须为正整数: {t}")
    return _LOG_EVALUATORS[phi.kind](phi, int(t))


def order_ratio(phi: ApproxFn, t: int) -> float:
    """−log Φ(t)/log t，t ≥ 2"""
    return -eval_phi(phi, t) / math.log(t)


# --- 区间极值 ---

def _range_from_points(phi: ApproxFn, points: Iterable[int]) -> LogRange:
    best_min = (math.inf, 0)
    best_max = (-math.inf, 0)
    count = 0
    for t in points:
        value = eval_phi(phi, t)
        count += 1
        if value < best_min[0]:
            best_min = (value, t)
        if value > best_max[0]:
            best_max = (value, t)
    return LogRange(min_log=best_min[0], argmin=best_min[1],
                    max_log=best_max[0], argmax=best_max[1], evaluations=count)


def _dyadic_block_ends(a: int, b: int) -> List[int]:
    # Φ 在每个二进块内单调，只需块端点
    points = []
    block = a.bit_length() - 1
    while (1 << block) <= b:
        lo = max(a, 1 << block)
        hi = min(b, (1 << (block + 1)) - 1)
        points.append(lo)
        if hi != lo:
            points.append(hi)
        block += 1
    return points


def log_range(phi: ApproxFn, a: int, b: int, budget: Optional[int] = None) -> LogRange:
    """
    整数区间 [a, b] 上 log Φ 的精确极值。

    单调种类只看端点，二进函数看块端点，Table 逐键枚举（受预算限制，缺键报 TableMiss）。
    """
    if a < 1 or b < a:
        raise InvalidParam(f"区间无效: [{a}, {b}]")
    if isinstance(phi, (PowerPhi, ExpDecayPhi)):
        return _range_from_points(phi, (a, b) if a != b else (a,))
    if isinstance(phi, PiecewiseDyadicPhi):
        return _range_from_points(phi, _dyadic_block_ends(a, b))
    if isinstance(phi, ScaledPhi):
        inner = log_range(phi.base, a, b, budget)
        shift = math.log(phi.divisor)
        return inner.model_copy(update={"min_log": inner.min_log - shift,
                                        "max_log": inner.max_log - shift})
    # Table: 区间内每个整数都必须是键
    budget = budget if budget is not None else default_settings.approx.table_budget
    if b - a + 1 > budget:
        raise BudgetExceeded(f"Table 区间 [{a}, {b}] 超出预算 {budget}", module="approx_fn")
    return _range_from_points(phi, range(a, b + 1))


# --- 网格 ---

def geometric_grid(t_min: int, t_max: int, samples: int) -> List[int]:
    """
    几何网格 {⌊e^(j/samples)⌋} ∩ [t_min, t_max]。

    网格点只依赖 j，不依赖窗口，所以嵌套窗口得到嵌套网格。
    """
    j_lo = math.ceil(samples * math.log(t_min))
    j_hi = math.floor(samples * math.log(t_max))
    if j_hi < j_lo:
        return []
    exponents = np.arange(j_lo, j_hi + 1, dtype=np.float64) / samples
    small = exponents[exponents <= _FLOAT_EXP_LIMIT]
    points = set(int(v) for v in np.floor(np.exp(small)))
    for x in exponents[exponents > _FLOAT_EXP_LIMIT]:
        points.add(int(mpmath.floor(mpmath.exp(mpmath.mpf(float(x))))))
    return sorted(t for t in points if t_min <= t <= t_max)


def bounded_samples(t_min: int, t_max: int, samples: Optional[int] = None,
                    max_points: int = 100000) -> int:
    """让几何网格的总点数不超过 max_points 的每 e 倍区间采样数"""
    samples = samples or default_settings.approx.grid_samples
    span = max(1.0, math.log(t_max) - math.log(max(1, t_min)))
    return max(2, min(samples, int(max_points / span)))


def _window_points(phi: ApproxFn, t_min: int, t_max: int, samples: int) -> List[int]:
    if isinstance(phi, TablePhi):
        return [t for t, _ in phi.pairs if t_min <= t <= t_max]
    return geometric_grid(t_min, t_max, samples)


def _scan_points(t_min: int, t_max: int, settings: ApproxSettings) -> Sequence[int]:
    # 小窗口逐点，大窗口用几何网格
    if t_max - t_min + 1 <= settings.exhaustive_limit:
        return range(t_min, t_max + 1)
    return geometric_grid(t_min, t_max, settings.grid_samples)


def scaled_bounds(t: int, c: float) -> Tuple[int, int]:
    """(⌈t/c⌉, ⌊c·t⌋)，用精确有理数计算"""
    cf = Fraction(str(c))
    return math.ceil(Fraction(t) / cf), math.floor(t * cf)


# --- 阶数估计 ---

def order_estimates(phi: ApproxFn, t_min: int, t_max: int,
                    samples: Optional[int] = None) -> OrderEstimate:
    """
    在几何网格上估计 −log Φ(t)/log t 的下确界和上确界。

    Args:
        phi: 逼近函数
        t_min, t_max: 窗口，2 ≤ t_min < t_max
        samples: 每个 e 倍区间的网格点数

    Returns:
        OrderEstimate: 数值估计，同时附带解析值（若已知）
    """
    samples = samples or default_settings.approx.grid_samples
    if samples < 2:
        raise InvalidParam(f"samples 必须 ≥ 2: {samples}")
    if t_min < 2 or t_max <= t_min:
        raise WindowTooSmall(f"窗口无效: [{t_min}, {t_max}]")
    points = _window_points(phi, t_min, t_max, samples)
    if len(points) < 2:
        raise WindowTooSmall(f"窗口 [{t_min}, {t_max}] 只有 {len(points)} 个有效采样点")

    ratios = [order_ratio(phi, t) for t in points]
    i_min = int(np.argmin(ratios))
    estimate = OrderEstimate(
        tau_lower=ratios[i_min],
        omega_upper=max(ratios),
        window=(t_min, t_max),
        argmin_t=points[i_min],
        grid_size=len(points),
        analytic_tau=phi.analytic_tau,
        analytic_omega=phi.analytic_omega,
    )
    logger.debug(f"order_estimates {phi.kind}: τ≈{estimate.tau_lower:.6g}, ω≈{estimate.omega_upper:.6g} "
                 f"({len(points)} 点)")
    return estimate


# --- 条件检查 ---

def check_dirichlet_bound(phi: ApproxFn, m: int, n: int, t_min: int, t_max: int,
                          samples: Optional[int] = None) -> DirichletVerdict:
    """检查 log Φ(t) ≤ −(n/m)·log t 是否在几何测试网格上处处成立"""
    if m < 1 or n < 1:
        raise InvalidParam(f"m, n 必须 ≥ 1: m={m}, n={n}")
    samples = samples or default_settings.approx.grid_samples
    for t in _window_points(phi, max(1, t_min), t_max, samples):
        if eval_phi(phi, t) > -(n / m) * math.log(t) + 1e-12:
            return DirichletVerdict(holds=False, fails_at=t)
    return DirichletVerdict(holds=True)


def check_monotone(phi: ApproxFn, t_min: int, t_max: int) -> MonotoneVerdict:
    """
    检查 Φ 在 [t_min, t_max] 上是否单调不增。

    幂函数与指数衰减解析判定；二进函数只可能在块边界 2^N 处上跳；Table 逐键比较。
    """
    if isinstance(phi, ScaledPhi):
        return check_monotone(phi.base, t_min, t_max)
    if isinstance(phi, PowerPhi):
        return MonotoneVerdict(decreasing=phi.tau > 0, fails_at=None if phi.tau > 0 else t_min)
    if isinstance(phi, ExpDecayPhi):
        return MonotoneVerdict(decreasing=True)
    if isinstance(phi, PiecewiseDyadicPhi):
        if phi.exponent < 0:
            return MonotoneVerdict(decreasing=False, fails_at=t_min)
        block = max(1, t_min.bit_length())
        while (1 << block) <= t_max:
            edge = 1 << block
            if edge - 1 >= t_min and eval_phi(phi, edge) > eval_phi(phi, edge - 1):
                return MonotoneVerdict(decreasing=False, fails_at=edge - 1)
            block += 1
        return MonotoneVerdict(decreasing=True)

    keys = [t for t, _ in phi.pairs if t_min <= t <= t_max]
    for left, right in zip(keys, keys[1:]):
        if eval_phi(phi, right) > eval_phi(phi, left):
            return MonotoneVerdict(decreasing=False, fails_at=left)
    return MonotoneVerdict(decreasing=True)


def local_distortion(phi: ApproxFn, t: int, c: float, lo: int = 1,
                     hi: Optional[int] = None, budget: Optional[int] = None) -> Tuple[float, int]:
    """
    t 附近的局部畸变 max |log Φ(t̃) − log Φ(t)|，t̃ ∈ [⌈t/c⌉, ⌊ct⌋] ∩ [lo, hi]。

    Returns:
        (畸变, 取到畸变的 t̃)
    """
    a, b = scaled_bounds(t, c)
    a, b = max(a, lo), b if hi is None else min(b, hi)
    center = eval_phi(phi, t)
    span = log_range(phi, a, b, budget)
    up, down = span.max_log - center, center - span.min_log
    if up >= down:
        return up, span.argmax
    return down, span.argmin


def check_c1(phi: ApproxFn, c: float, t_min: int, t_max: int,
             d_cap: Optional[float] = None,
             settings: Optional[ApproxSettings] = None) -> C1Result:
    """
    测量 (C1)：窗口内所有 c^(−1)t ≤ t̃ ≤ ct 的整数对上的最小 d。

    有限窗口只能测量不能证明，所以返回达到的 d_min；给定 d_cap 时报告第一个超出的见证对。
    """
    if not c > 1:
        raise InvalidParam(f"c 必须 > 1: {c}")
    if t_min < 1 or t_max < t_min:
        raise InvalidParam(f"窗口为空: [{t_min}, {t_max}]")
    settings = settings or default_settings.approx
    log_cap = math.log(d_cap) if d_cap is not None else math.inf

    worst = 0.0
    violated = None
    for t in _scan_points(t_min, t_max, settings):
        distortion, partner = local_distortion(phi, t, c, lo=t_min, hi=t_max)
        worst = max(worst, distortion)
        if violated is None and distortion > log_cap:
            violated = (t, partner)

    result = C1Result(c=c, d_min=math.exp(min(worst, 709.0)) if worst < 709.0 else math.inf,
                      log_d_min=worst, violated=violated, d_cap=d_cap)
    logger.info(f"check_c1 {phi.kind} c={c}: log d_min={worst:.6g}, violated={violated}")
    return result


def check_star(phi: ApproxFn, rho: float, t0: int, c_grid: Sequence[float], t_max: int,
               constant: Optional[float] = None,
               settings: Optional[ApproxSettings] = None) -> StarVerdict:
    """
    检查 (∗): log Φ(⌈ct⌉) ≤ log constant + ρ log c + log Φ(t)，其中 ⌈ct⌉ ≤ t_max。
    """
    if not c_grid:
        raise InvalidParam("c_grid 不能为空")
    if t0 < 1:
        raise InvalidParam(f"t0 必须 ≥ 1: {t0}")
    settings = settings or default_settings.approx
    constant = constant if constant is not None else settings.star_constant
    log_constant = math.log(constant)
    for c in c_grid:
        if not c > 1:
            raise InvalidParam(f"c 必须 > 1: {c}")
        cf = Fraction(str(c))
        bound = log_constant + rho * math.log(c)
        for t in _scan_points(t0, t_max, settings):
            image = math.ceil(t * cf)
            if image > t_max:
                break
            if eval_phi(phi, image) > bound + eval_phi(phi, t) + 1e-12:
                return StarVerdict(holds=False, violated=(c, t), rho=rho, constant=constant)
    return StarVerdict(holds=True, rho=rho, constant=constant)


def star_exponent(phi: ApproxFn, c: float, t0: int, t_max: int, constant: Optional[float] = None,
                  settings: Optional[ApproxSettings] = None) -> float:
    """窗口上使 (∗) 在给定 c 处成立的最小 ρ"""
    if not c > 1:
        raise InvalidParam(f"c 必须 > 1: {c}")
    settings = settings or default_settings.approx
    constant = constant if constant is not None else settings.star_constant
    cf = Fraction(str(c))
    needed = -math.inf
    for t in _scan_points(t0, t_max, settings):
        image = math.ceil(t * cf)
        if image > t_max:
            break
        excess = eval_phi(phi, image) - eval_phi(phi, t) - math.log(constant)
        needed = max(needed, excess / math.log(c))
    return needed


def c1_propagation(d0: float, rho0: float, c: float) -> float:
    """(C1) 在某个 c0 处成立时推出的任意 c 的常数 d = max{d0, c^(2ρ0)}（仅公式，不验证）"""
    if not c > 1 or d0 < 1:
        raise InvalidParam(f"需要 c > 1 且 d0 ≥ 1: c={c}, d0={d0}")
    return max(d0, c ** (2.0 * rho0))
