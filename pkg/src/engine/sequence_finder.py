# src/engine/sequence_finder.py
"""
构造满足阶数收敛、缺项性与局部 (C1) 的整数序列 t_k。

两条分支：
- ω > τ：在比值落在 (τ+δ_k/2, τ+δ_k) 的 r_k 与比值 < τ+δ_k/3 的 s_k = c^(2g) r_k 之间
  按比值 c² 分块，取第一个畸变不超过 c^(2ω) 的块 I_j，令 t_k = c·a_j；
- ω = τ：从 ℓ 出发，若 Φ 在 [ℓ, ⌊c·⌈cℓ⌉⌋] 上的下降小于 c^(4τ) 就取 t_k = ⌈cℓ⌉，否则 ℓ 前移。
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from src.config import default_settings
from src.config.config_loader import SequenceSettings
from src.engine.approx_fn import (
    bounded_samples, check_c1, check_monotone, eval_phi, local_distortion, log_range,
    order_estimates, order_ratio, scaled_bounds,
)
from src.models.approx_models import ApproxFn
from src.models.errors import (
    BudgetExceeded, CapExceeded, CaseUndecidable, InvalidParam, NotDecreasing,
)
from src.models.sequence_models import SearchCase, SequenceCert, SequenceTerm, VerifySequenceReport
from src.utils.display_utils import format_int

TOLERANCE = 1e-12


def _ceil_mul(x: int, factor: Fraction) -> int:
    return -((-x * factor.numerator) // factor.denominator)


def _floor_mul(x: int, factor: Fraction) -> int:
    return (x * factor.numerator) // factor.denominator


def _window_top(ell: int, c: Fraction) -> int:
    """⌊c·⌈cℓ⌉⌋，即 t = ⌈cℓ⌉ 的检查窗口上端"""
    return _floor_mul(_ceil_mul(ell, c), c)


class _CapReached(Exception):
    """内部信号：在得到当前项之前越过了 t_cap"""


class SequenceSearch:
    """
    单次 find_sequence 的搜索状态。

    按 k 依次寻找 t_k，每一项都以前一项的幂为下界，保证 log t_(k+1)/log t_k ≥ k+1。
    """

    def __init__(self, phi: ApproxFn, c: float, t_start: int, t_cap: int,
                 tau: float, omega: float, case: SearchCase,
                 chi_floor: Optional[Sequence[int]] = None,
                 settings: Optional[SequenceSettings] = None):
        self.phi = phi
        self.c = c
        self.c_exact = Fraction(str(c))
        self.c_squared = self.c_exact ** 2
        self.log_c = math.log(c)
        self.t_start = max(2, t_start)
        self.t_cap = t_cap
        self.tau = tau
        self.omega = omega
        self.case = case
        self.chi_floor = list(chi_floor) if chi_floor else []
        self.settings = settings or default_settings.sequence
        self.logger = logging.getLogger(self.__class__.__name__)

        if case is SearchCase.RATIO_SPLIT:
            self.log_d = 2.0 * omega * self.log_c
            self.delta0 = (omega - tau) / 2.0
        else:
            self.log_d = 4.0 * tau * self.log_c
            self.delta0 = 0.0
        self.terms: List[SequenceTerm] = []
        self.rejection_runs: List[Tuple[int, int]] = []
        # 几何扫描的有理乘子 e^step
        self.scan_factor = Fraction(math.exp(self.settings.scan_step)).limit_denominator(10**9)

    # --- 下界 ---

    def floor_for(self, k: int) -> int:
        floor = self.t_start
        if self.terms:
            previous = self.terms[-1].t
            floor = max(floor, previous ** k, previous + 1)
        if k <= len(self.chi_floor):
            floor = max(floor, self.chi_floor[k - 1] + 1)
        return floor

    # --- 扫描 ---

    def _scan(self, start: int, accept: Callable[[int], bool]) -> Optional[int]:
        t = start
        while t <= self.t_cap:
            if accept(t):
                return t
            t = max(t + 1, _ceil_mul(t, self.scan_factor))
        return None

    def _ratio(self, t: int) -> float:
        return order_ratio(self.phi, t)

    # --- ω > τ ---

    def _ratio_split_term(self, k: int, floor: int) -> SequenceTerm:
        delta = self.delta0 / 2 ** k
        tau = self.tau
        start = floor
        for attempt in range(self.settings.max_retries):
            ell = self._scan(start, lambda t: self._ratio(t) > tau + delta)
            if ell is None:
                break
            r = self._scan(ell + 1, lambda t: tau + delta / 2 < self._ratio(t) < tau + delta)
            if r is None:
                break
            g, s = 1, _ceil_mul(r, self.c_squared)
            while s <= self.t_cap and not self._ratio(s) < tau + delta / 3:
                g += 1
                s = _ceil_mul(r, self.c_squared ** g)
            if s > self.t_cap:
                break
            for j in range(g):
                a = _ceil_mul(r, self.c_squared ** j)
                t = _ceil_mul(a, self.c_exact)
                if t > self.t_cap:
                    break
                distortion, _ = local_distortion(self.phi, t, self.c)
                if distortion <= self.log_d + TOLERANCE:
                    trace = {"delta_k": delta, "ell": ell, "r": r, "s": s, "g": g, "block": j + 1,
                             "attempt": attempt + 1}
                    return self._make_term(k, t, distortion, trace)
            # 没有好块：从 s_k 之后重新选 ℓ_k
            self.logger.debug(f"k={k}: [r, s] 中没有满足畸变界的块，第 {attempt + 1} 次重试")
            start = s + 1
        raise _CapReached()

    # --- ω = τ ---

    def _doubling_term(self, k: int, floor: int) -> SequenceTerm:
        ell = max(1, -((-floor * self.c_exact.denominator) // self.c_exact.numerator))
        run, run_start, rejected = 0, ell, 0
        while True:
            t = _ceil_mul(ell, self.c_exact)
            if t > self.t_cap:
                raise _CapReached()
            top = _floor_mul(t, self.c_exact)
            drop = eval_phi(self.phi, ell) - eval_phi(self.phi, top)
            if drop < self.log_d:
                distortion, _ = local_distortion(self.phi, t, self.c)
                if distortion <= self.log_d + TOLERANCE:
                    if run:
                        self.rejection_runs.append((run_start, run))
                    return self._make_term(k, t, distortion, {"ell": ell, "rejections": rejected})
                # 非单调 Φ：端点下降不足以控制窗口内畸变
                if run:
                    self.rejection_runs.append((run_start, run))
                run = 0
            else:
                if run == 0:
                    run_start = ell
                run += 1
            rejected += 1
            ell = top

    def _make_term(self, k: int, t: int, distortion: float, trace: dict) -> SequenceTerm:
        lacunarity = None
        if self.terms:
            lacunarity = math.log(t) / math.log(self.terms[-1].t)
        return SequenceTerm(k=k, t=t, order_ratio=self._ratio(t), lacunarity_ratio=lacunarity,
                            log_distortion=distortion, trace=trace)

    # --- 主循环 ---

    def certificate(self, slack: float, note: Optional[str]) -> SequenceCert:
        worst = max((term.log_distortion for term in self.terms), default=0.0)
        return SequenceCert(
            c=self.c,
            case_used=self.case,
            tau=self.tau,
            omega=self.omega,
            slack=slack,
            d_theoretical=math.exp(min(self.log_d, 709.0)) if self.log_d < 709.0 else math.inf,
            d_achieved=max(1.0, math.exp(worst)),
            terms=list(self.terms),
            rejection_runs=list(self.rejection_runs),
            case_note=note,
        )

    def run(self, k_target: int, slack: float, note: Optional[str]) -> SequenceCert:
        step = self._ratio_split_term if self.case is SearchCase.RATIO_SPLIT else self._doubling_term
        for k in range(1, k_target + 1):
            floor = self.floor_for(k)
            if floor > self.t_cap:
                raise CapExceeded(k, self.certificate(slack, note))
            try:
                term = step(k, floor)
            except _CapReached:
                self.logger.warning(f"第 {k} 项超出 t_cap={format_int(self.t_cap)}，返回部分证书")
                raise CapExceeded(k, self.certificate(slack, note))
            self.terms.append(term)
            self.logger.info(f"t_{k} = {format_int(term.t)}, 阶数比 {term.order_ratio:.6g}, "
                             f"畸变 e^{term.log_distortion:.4g}")
        return self.certificate(slack, note)


def _orders(phi: ApproxFn, t_start: int, t_cap: int, use_analytic: bool,
            settings: SequenceSettings) -> Tuple[float, float, float]:
    """(τ, ω, slack)"""
    if use_analytic and phi.analytic_tau is not None and phi.analytic_omega is not None:
        return phi.analytic_tau, phi.analytic_omega, settings.case_slack
    samples = bounded_samples(t_start, t_cap)
    estimate = order_estimates(phi, max(2, t_start), t_cap, samples)
    return estimate.tau_lower, estimate.omega_upper, max(settings.case_slack, 3.0 / samples)


def find_sequence(phi: ApproxFn, c: float, k_target: int, t_start: int, t_cap: int,
                  use_analytic: bool = True, chi_floor: Optional[Sequence[int]] = None,
                  settings: Optional[SequenceSettings] = None) -> SequenceCert:
    """
    寻找满足局部 (C1) 的缺项序列。

    Args:
        phi: 逼近函数（单调递减，或在窗口上 (C1) 畸变不超过理论常数）
        c: 比值 c > 1
        k_target: 需要的项数
        t_start: 第一项的下界
        t_cap: 搜索上限
        use_analytic: 是否优先使用解析的 τ、ω
        chi_floor: 可选的逐项下界 t_k > chi_floor[k−1]
        settings: 序列搜索配置

    Returns:
        SequenceCert: 证书

    Raises:
        CaseUndecidable: ω 发散（ω = ∞ 的分支不支持）
        NotDecreasing: Φ 不单调且 (C1) 畸变超过理论常数
        CapExceeded: 得到 k_target 项之前越过 t_cap（附部分证书）
    """
    settings = settings or default_settings.sequence
    if not c > 1:
        raise InvalidParam(f"c 必须 > 1: {c}", module="sequence_finder")
    if k_target < 1 or t_cap <= t_start:
        raise InvalidParam(f"需要 k_target ≥ 1 且 t_cap > t_start: {k_target}, {t_start}, {t_cap}",
                           module="sequence_finder")
    logger = logging.getLogger(__name__)

    tau, omega, slack = _orders(phi, t_start, t_cap, use_analytic, settings)
    if not math.isfinite(omega) or omega > settings.max_finite_order:
        raise CaseUndecidable(f"上阶 ω={omega:.6g} 发散，ω = ∞ 的情形不支持")
    note = None
    if omega - tau > slack:
        case = SearchCase.RATIO_SPLIT
    else:
        case = SearchCase.DOUBLING
        if omega - tau > 0:
            note = f"ω−τ={omega - tau:.4g} 在数值误差 {slack:.4g} 之内，按 ω = τ 处理"
            logger.warning(note)

    search = SequenceSearch(phi, c, t_start, t_cap, tau, omega, case, chi_floor, settings)
    monotone = check_monotone(phi, max(1, t_start), t_cap)
    if not monotone.decreasing:
        c1 = check_c1(phi, c, max(1, t_start), t_cap)
        if c1.log_d_min > search.log_d + TOLERANCE:
            raise NotDecreasing(f"Φ 在 t={monotone.fails_at} 处上升，且 (C1) 畸变 e^{c1.log_d_min:.4g} "
                                f"超过理论常数")
        logger.info(f"Φ 不单调（t={monotone.fails_at}），但 (C1) 畸变 e^{c1.log_d_min:.4g} 在理论常数之内")

    logger.info(f"find_sequence: τ={tau:.6g}, ω={omega:.6g}, slack={slack:.4g}, 分支 {case.value}")
    return search.run(k_target, slack, note)


def rejection_bound(phi: ApproxFn, ell: int, K: int, c: float, tau: float) -> bool:
    """
    连续 K 次拒绝后的阶数下界是否成立：
    −log Φ(ℓ_K)/log ℓ_K ≥ (4τK log c − log Φ(ℓ))/log ℓ_K，其中 ℓ_(i+1) = ⌊c·⌈cℓ_i⌉⌋。
    """
    if K < 1:
        raise InvalidParam(f"K 必须 ≥ 1: {K}", module="sequence_finder")
    c_exact = Fraction(str(c))
    current = ell
    for _ in range(K):
        current = _window_top(current, c_exact)
    bound = (4.0 * tau * K * math.log(c) - eval_phi(phi, ell)) / math.log(current)
    return order_ratio(phi, current) >= bound - 1e-9


def _term_distortion(phi: ApproxFn, t: int, c: float, budget: int):
    a, b = scaled_bounds(t, c)
    span = log_range(phi, max(1, a), b, budget)
    center = eval_phi(phi, t)
    up, down = span.max_log - center, center - span.min_log
    if up >= down:
        return up, span.argmax, span.evaluations
    return down, span.argmin, span.evaluations


def verify_sequence(phi: ApproxFn, t_seq: Sequence[int], c: float, d: float,
                    threads: int = 1,
                    settings: Optional[SequenceSettings] = None) -> VerifySequenceReport:
    """
    检查每个 k 与 [⌈t_k/c⌉, ⌊c·t_k⌋] 中每个整数 t̃ 是否满足 d^(−1)Φ(t_k) ≤ Φ(t̃) ≤ dΦ(t_k)。

    区间极值由 log_range 精确给出；预算按实际求值次数计。

    Raises:
        BudgetExceeded: 求值次数超过 sequence.verify_budget
    """
    settings = settings or default_settings.sequence
    if not c > 1 or d < 1:
        raise InvalidParam(f"需要 c > 1 且 d ≥ 1: c={c}, d={d}", module="sequence_finder")
    if any(b <= a for a, b in zip(t_seq, t_seq[1:])):
        raise InvalidParam("t_seq 必须严格递增", module="sequence_finder")

    budget = settings.verify_budget
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda t: _term_distortion(phi, t, c, budget), t_seq))
    else:
        results = [_term_distortion(phi, t, c, budget) for t in t_seq]

    evaluations = sum(r[2] for r in results)
    if evaluations > budget:
        raise BudgetExceeded(f"verify_sequence 求值 {evaluations} 次，超出预算 {budget}",
                             module="sequence_finder")
    report = VerifySequenceReport(passed=True, d=d, evaluations=evaluations)
    for k, (distortion, partner, _) in enumerate(results, start=1):
        if distortion > report.worst_log_distortion or report.worst_k is None:
            report.worst_k, report.worst_t, report.worst_log_distortion = k, partner, distortion
    report.passed = report.worst_log_distortion <= math.log(d) + TOLERANCE
    return report


__all__ = ["SequenceSearch", "find_sequence", "verify_sequence", "rejection_bound"]
