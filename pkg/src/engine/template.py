# src/engine/template.py
"""
类 𝒞 模板：由 (Φ, t_k, Δ) 构造、求值与公理检查。

模板只按断点 b_k < q_k < c_k 保存，所有下游积分都是闭式的。
"""
import bisect
import logging
import math
from typing import List, Optional, Sequence

import numpy as np

from src.config import default_settings
from src.config.config_loader import TemplateSettings
from src.engine.approx_fn import eval_phi
from src.engine.lattice_graph import make_grid
from src.models.approx_models import ApproxFn
from src.models.errors import InvalidParam, NonNegativeMinimum, OverlappingExcursions
from src.models.lattice_models import CombinedGraph, GraphMinimum
from src.models.template_models import (
    ClassCTemplate, Excursion, ProjectedCoordinates, TemplateCheck, TemplateReport, TemplateSample,
)
from src.utils.display_utils import format_int

logger = logging.getLogger(__name__)

SLOPE_TOLERANCE = 1e-9


def _gap_state(c: float, b_next: float, tolerance: float) -> str:
    """'separated' / 'touching' / 'overlap'"""
    scale = max(1.0, abs(c), abs(b_next))
    if abs(b_next - c) <= tolerance * scale:
        return "touching"
    return "separated" if c < b_next else "overlap"


def _excursion(phi: ApproxFn, k: int, t: int, log_delta: float, m: int, n: int) -> Excursion:
    log_t = math.log(t)
    log_phi = eval_phi(phi, t)
    q = (log_t - log_phi) / (1.0 / m + 1.0 / n)
    f1 = log_t - q / n - log_delta
    if f1 >= 0:
        raise NonNegativeMinimum(k, f1)
    return Excursion(k=k, t=t, log_t=log_t, log_phi=log_phi, q=q, f1=f1, b=q + n * f1, c=q - m * f1)


def build_template(phi: ApproxFn, t_seq: Sequence[int], log_delta: float, m: int, n: int,
                   drop_overlapping_prefix: bool = False,
                   settings: Optional[TemplateSettings] = None) -> ClassCTemplate:
    """
    由 (Φ, t_k, Δ) 构造模板。

    Args:
        phi: 逼近函数
        t_seq: 严格递增的 t_k ≥ 2
        log_delta: log Δ ≥ 0
        m, n: 矩阵形状
        drop_overlapping_prefix: 遇到重叠时丢弃其之前（含）的前缀而不是报错
        settings: 模板配置

    Returns:
        ClassCTemplate: 全部断点已导出的模板

    Raises:
        NonNegativeMinimum: 某个 f_1(q_k) ≥ 0
        OverlappingExcursions: c_k > b_(k+1)，或严格模式下相切
    """
    settings = settings or default_settings.template
    if m < 1 or n < 1:
        raise InvalidParam(f"m, n 必须 ≥ 1: m={m}, n={n}", module="template")
    if log_delta < 0:
        raise InvalidParam(f"log Δ 必须 ≥ 0: {log_delta}", module="template")
    previous = 1
    for t in t_seq:
        if t < 2 or t <= previous:
            raise InvalidParam(f"t_k 必须严格递增且 ≥ 2: {format_int(int(t))}", module="template")
        previous = t

    excursions = [_excursion(phi, k, int(t), log_delta, m, n) for k, t in enumerate(t_seq, start=1)]

    start = 0
    touching: List[int] = []
    for i in range(len(excursions) - 1):
        current, following = excursions[i], excursions[i + 1]
        state = _gap_state(current.c, following.b, settings.touch_tolerance)
        if state == "touching" and not settings.strict_separation:
            touching.append(current.k)
            continue
        if state == "separated":
            continue
        if drop_overlapping_prefix:
            start = i + 1
            continue
        raise OverlappingExcursions(current.k, current.c, following.b)

    dropped = [e.t for e in excursions[:start]]
    if dropped:
        logger.info(f"build_template: 丢弃了 {len(dropped)} 个重叠的前缀 excursion")
    kept = excursions[start:]
    lacunarity = [b.log_t / a.log_t for a, b in zip(kept, kept[1:])]
    return ClassCTemplate(m=m, n=n, log_delta=log_delta, excursions=kept, lacunarity=lacunarity,
                          touching=[k for k in touching if k > start], dropped_prefix=dropped, phi=phi)


def _locate(T: ClassCTemplate, q: float) -> Optional[Excursion]:
    """包含 q 的开区间 (b_k, c_k) 所属的 excursion"""
    starts = [e.b for e in T.excursions]
    i = bisect.bisect_left(starts, q) - 1
    if i < 0:
        return None
    e = T.excursions[i]
    return e if e.b < q < e.c else None


def eval_f1(T: ClassCTemplate, q: float) -> float:
    e = _locate(T, q)
    if e is None:
        return 0.0
    if q <= e.q:
        return -(q - e.b) / T.n
    return (q - e.c) / T.m


def eval_template(T: ClassCTemplate, q: float) -> List[float]:
    """
    模板在 q 处的 m+n 个分量。

    f_1 在 [b_k, q_k] 以斜率 −1/n 下降，在 [q_k, c_k] 以斜率 1/m 回升，
    其余分量相等且使总和为零。
    """
    if q < 0:
        raise InvalidParam(f"q 必须 ≥ 0: {q}", module="template")
    f1 = eval_f1(T, q)
    rest = -f1 / (T.m + T.n - 1) if f1 else 0.0
    return [f1] + [rest] * (T.m + T.n - 1)


def _piece_slopes(T: ClassCTemplate) -> List[float]:
    slopes = [0.0]
    for e in T.excursions:
        slopes.append(e.f1 / (e.q - e.b))
        slopes.append(-e.f1 / (e.c - e.q))
    return slopes


def _slope_allowed(slope: float, allowed: Sequence[float]) -> bool:
    return any(abs(slope - a) <= SLOPE_TOLERANCE * max(1.0, abs(a)) for a in allowed)


def validate_template(T: ClassCTemplate, strict: Optional[bool] = None,
                      settings: Optional[TemplateSettings] = None) -> TemplateReport:
    """
    检查模板公理，只生成报告。

    Args:
        T: 模板
        strict: 相切是否算失败；默认取 template.strict_separation
        settings: 模板配置

    Returns:
        TemplateReport: 逐 k 检查、斜率集合与求和为零误差
    """
    settings = settings or default_settings.template
    strict = settings.strict_separation if strict is None else strict
    m, n = T.m, T.n
    failures: List[str] = []
    if not T.excursions:
        return TemplateReport(passed=False, failures=["template.EmptyTemplate: 全零模板不属于类 𝒞"])

    checks = []
    for i, e in enumerate(T.excursions):
        ordered = e.b < e.q < e.c
        separated = True
        if i + 1 < len(T.excursions):
            state = _gap_state(e.c, T.excursions[i + 1].b, settings.touch_tolerance)
            separated = state == "separated" or (state == "touching" and not strict)
        error = abs(e.q - (m * e.b + n * e.c) / (m + n))
        checks.append(TemplateCheck(k=e.k, ordered=ordered, separated=separated, reconstruction_error=error))
        if not ordered:
            failures.append(f"template.NonNegativeMinimum: k={e.k} 不满足 b_k < q_k < c_k")
        if not separated:
            failures.append(f"template.OverlappingExcursions: k={e.k}, c_k={e.c:.12g}, "
                            f"b_(k+1)={T.excursions[i + 1].b:.12g}")
        if error > 1e-9 * max(1.0, abs(e.q)):
            failures.append(f"template.Reconstruction: k={e.k} 误差 {error:.3g}")

    f1_slopes = _piece_slopes(T)
    bad = [s for s in f1_slopes if not _slope_allowed(s, (-1.0 / n, 0.0, 1.0 / m))]
    if bad:
        failures.append(f"template.SlopeSet: f_1 斜率 {bad[:3]} 不在 {{−1/n, 0, 1/m}} 中")
    width = m + n - 1
    fj_slopes = [-s / width for s in f1_slopes]
    allowed_j = (-1.0 / (m * width), 0.0, 1.0 / (n * width))
    if any(not _slope_allowed(s, allowed_j) for s in fj_slopes):
        failures.append("template.SlopeSet: f_j 斜率超出允许集合")

    rng = np.random.default_rng(settings.seed)
    upper = T.last_breakpoint * 1.1 + 1.0
    max_sum = max(abs(math.fsum(eval_template(T, float(q))))
                  for q in rng.uniform(0.0, upper, settings.sum_zero_samples))
    if max_sum > 1e-12:
        failures.append(f"template.SumZero: 最大 |Σ f_j| = {max_sum:.3g}")

    report = TemplateReport(passed=not failures, checks=checks, f1_slopes=sorted(set(f1_slopes)),
                            fj_slopes=sorted(set(fj_slopes)), max_sum_error=max_sum, failures=failures)
    logger.info(f"validate_template: {len(T.excursions)} 个 excursion, passed={report.passed}")
    return report


def sample_template(T: ClassCTemplate, q_max: float, step: float) -> TemplateSample:
    """在 {0, step, …, q_max} 上采样模板，与组合图使用同一网格"""
    if not step > 0 or q_max < step:
        raise InvalidParam(f"网格无效: q_max={q_max}, step={step}", module="template")
    grid = make_grid(q_max, step)
    return TemplateSample(grid=grid, values=[eval_template(T, q) for q in grid])


def template_as_graph(T: ClassCTemplate, q_max: float, step: float) -> CombinedGraph:
    """把模板当作组合图，极小取精确的 (q_k, f_1(q_k))"""
    sample = sample_template(T, q_max, step)
    minima = [GraphMinimum(r=e.q, h1_at_r=e.f1) for e in T.excursions if e.q <= q_max]
    return CombinedGraph(m=T.m, n=T.n, grid=sample.grid, values=sample.values, minima=minima,
                         backend="template", first_witnesses=[None] * len(sample.grid))


def projected_coordinates(T: ClassCTemplate) -> List[ProjectedCoordinates]:
    """第 k 个极小对应的预测 (log‖q_k‖, log‖Aq_k − p_k‖)"""
    return [ProjectedCoordinates(k=e.k, x=e.q / T.n + e.f1, y=e.f1 - e.q / T.m) for e in T.excursions]


def template_json(T: ClassCTemplate) -> dict:
    """导出格式 {m, n, log_delta, per_k: [...]}"""
    return {
        "m": T.m,
        "n": T.n,
        "log_delta": T.log_delta,
        "per_k": [{"t_k": e.t, "q_k": e.q, "f1": e.f1, "b_k": e.b, "c_k": e.c} for e in T.excursions],
        "lacunarity": T.lacunarity,
        "touching": T.touching,
        "dropped_prefix": T.dropped_prefix,
    }


__all__ = [
    "build_template", "eval_template", "eval_f1", "validate_template", "sample_template",
    "template_as_graph", "projected_coordinates", "template_json",
]
