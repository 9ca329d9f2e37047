# src/engine/verify/proximity.py
"""
模板与组合图的接近程度：T = sup max_j |f_j − h_j|，以及模板极小与组合图极小的 C-盒对应。
"""
import logging
from typing import List, Optional, Tuple

from src.engine.approx_fn import eval_phi
from src.engine.template import eval_template
from src.models.errors import GridMismatch
from src.models.lattice_models import CombinedGraph, GraphMinimum
from src.models.report_models import MinimumMatch, ProximityReport, StrayMinimum
from src.models.template_models import ClassCTemplate, Excursion

logger = logging.getLogger(__name__)


def proximity_constants(T: float, m: int, n: int) -> Tuple[float, float, float, float]:
    """
    由接近程度 T 推出的常数链。

    Returns:
        (C1, C2, C3, C)，C1 = T + 2T·max{m,n}/(m+n)，C2 = 4mnT/(m+n)，C3 = max{C2, T}，C = max{C1, C3}
    """
    c1 = T + 2.0 * T * max(m, n) / (m + n)
    c2 = 4.0 * m * n * T / (m + n)
    c3 = max(c2, T)
    return c1, c2, c3, max(c1, c3)


def _shared_points(graph: CombinedGraph, T: ClassCTemplate) -> List[int]:
    if graph.m != T.m or graph.n != T.n:
        raise GridMismatch(f"形状不一致: 组合图 {graph.m}x{graph.n}, 模板 {T.m}x{T.n}")
    support = T.last_breakpoint
    if not graph.grid or graph.grid[-1] < support - 1e-9:
        top = graph.grid[-1] if graph.grid else None
        raise GridMismatch(f"组合图网格上端 {top} 未覆盖模板支撑 [0, {support:.6g}]")
    return [i for i, q in enumerate(graph.grid) if q <= support + 1e-9]


def measure_closeness(graph: CombinedGraph, T: ClassCTemplate) -> float:
    """共享网格 ∩ [0, c_K] 上的 max_j |f_j − h_j|"""
    worst = 0.0
    for i in _shared_points(graph, T):
        f = eval_template(T, graph.grid[i])
        worst = max(worst, max(abs(a - b) for a, b in zip(f, graph.values[i])))
    return worst


def _match(e: Excursion, minima: List[GraphMinimum], C: float) -> List[int]:
    # 候选必须在 C-盒内，并落在该 excursion 的支撑 [b_k, c_k] 中
    return [i for i, g in enumerate(minima)
            if abs(g.r - e.q) <= C and abs(g.h1_at_r - e.f1) <= C and e.b - 1e-9 <= g.r <= e.c + 1e-9]


def proximity(graph: CombinedGraph, T: ClassCTemplate, T_bound: Optional[float] = None) -> ProximityReport:
    """
    检查组合图是否与模板 T-接近，并逐个对应模板极小。

    Args:
        graph: 组合图，网格需覆盖 [0, c_K]
        T: 模板
        T_bound: 声称的接近程度；缺省时用实测值。给定时还要求实测值不超过它

    Returns:
        ProximityReport: 实测 T、常数链、逐 k 对应与游离极小

    Raises:
        GridMismatch: 网格未覆盖模板支撑或形状不一致
    """
    measured = measure_closeness(graph, T)
    closeness = measured if T_bound is None else T_bound
    c1, c2, c3, C = proximity_constants(closeness, T.m, T.n)
    q_top = graph.grid[-1]

    matches: List[MinimumMatch] = []
    used = set()
    consistent = T_bound is None or measured <= T_bound + 1e-12
    for e in T.excursions:
        if e.q > q_top:
            continue
        entry = MinimumMatch(k=e.k, q_k=e.q, f1_at_qk=e.f1,
                             predicted_x=e.q / T.n + e.f1, predicted_y=e.f1 - e.q / T.m)
        candidates = _match(e, graph.minima, C)
        entry.candidates = len(candidates)
        if len(candidates) != 1:
            consistent = False
        if candidates:
            best = min(candidates, key=lambda i: max(abs(graph.minima[i].r - e.q),
                                                     abs(graph.minima[i].h1_at_r - e.f1)))
            g = graph.minima[best]
            used.add(best)
            entry.matched_r, entry.matched_h1, entry.witness = g.r, g.h1_at_r, g.witness
            entry.box_distance = max(abs(g.r - e.q), abs(g.h1_at_r - e.f1))
            if g.witness is not None and T.phi is not None and g.witness.first_norm >= 1:
                log_phi = eval_phi(T.phi, int(g.witness.first_norm))
                entry.strict_hit = g.witness.log_second < log_phi
        matches.append(entry)

    strays = [StrayMinimum(r=g.r, h1=g.h1_at_r, deep=g.h1_at_r < -C)
              for i, g in enumerate(graph.minima) if i not in used and g.r <= T.last_breakpoint]
    if any(s.deep for s in strays):
        consistent = False

    report = ProximityReport(T_measured=measured, C1=c1, C2=c2, C3=c3, C_used=C, per_minimum=matches,
                             stray_minima=strays, minima_consistent=consistent,
                             grid_points=len(_shared_points(graph, T)))
    logger.info(f"proximity: T={measured:.6g}, C={C:.6g}, 匹配 {sum(1 for x in matches if x.matched_r is not None)}"
                f"/{len(matches)}, 游离 {len(strays)}, 一致={consistent}")
    return report


def proximity_overlay(graph: CombinedGraph, T: ClassCTemplate):
    """两图叠加的 CSV 表头与行: q, f_1..f_d, h_1..h_d"""
    d = T.m + T.n
    header = ["q"] + [f"f_{j}" for j in range(1, d + 1)] + [f"h_{j}" for j in range(1, d + 1)]
    rows = [[graph.grid[i]] + eval_template(T, graph.grid[i]) + list(graph.values[i])
            for i in _shared_points(graph, T)]
    return header, rows


__all__ = ["proximity", "proximity_constants", "measure_closeness", "proximity_overlay"]
