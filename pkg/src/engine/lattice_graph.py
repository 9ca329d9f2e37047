# src/engine/lattice_graph.py
"""
逐次极小函数 h_j(q) = log λ_j(e^q)、轨迹与组合图。
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional

import numpy as np

from src.config import default_settings
from src.config.config_loader import LatticeSettings
from src.engine.minima_backends import get_backend, integer_rank
from src.models.errors import InvalidParam, ZeroFirstBlock
from src.models.lattice_models import (
    CombinedGraph, GraphMinimum, LatticeVector, MatrixA, SuccessiveMinima,
)

logger = logging.getLogger(__name__)

SLOPE_TOLERANCE = 1e-9


def trajectory(A: MatrixA, v: LatticeVector, q: float) -> float:
    """
    向量 v 的轨迹 max{log‖q‖ − q/n, log‖Aq−p‖ + q/m}。

    Raises:
        ZeroFirstBlock: v.q = 0
    """
    if not any(v.q):
        raise ZeroFirstBlock(f"轨迹要求 q ≠ 0: {v}")
    return max(v.log_first - q / A.n, v.log_second + q / A.m)


def trajectory_vertex(A: MatrixA, v: LatticeVector) -> tuple:
    """
    轨迹顶点 (q*, 值)。

    q* = mn/(m+n)·(log‖q‖ − log‖Aq−p‖)，值 = (n·log‖q‖ + m·log‖Aq−p‖)/(m+n)。
    残差为 0 时顶点在无穷远，返回 (inf, −inf)。
    """
    if not any(v.q):
        raise ZeroFirstBlock(f"轨迹要求 q ≠ 0: {v}")
    m, n = A.m, A.n
    if v.log_second == -math.inf:
        return math.inf, -math.inf
    r = m * n / (m + n) * (v.log_first - v.log_second)
    value = (n * v.log_first + m * v.log_second) / (m + n)
    return r, value


def successive_minima_exact(A: MatrixA, log_Q: float,
                            settings: Optional[LatticeSettings] = None) -> SuccessiveMinima:
    """精确逐次极小（约化基上的完整枚举）"""
    return get_backend("exact", settings).minima(A, log_Q)


def successive_minima_reduced(A: MatrixA, log_Q: float,
                              settings: Optional[LatticeSettings] = None) -> SuccessiveMinima:
    """约化基近似，误差不超过 (m+n)·log 2"""
    return get_backend("reduced", settings).minima(A, log_Q)


def make_grid(q_max: float, step: float) -> List[float]:
    """{0, step, 2·step, …, q_max}，四舍五入到 12 位，使不同步长的网格精确嵌套"""
    count = int(math.floor(q_max / step + 1e-9))
    return [round(i * step, 12) for i in range(count + 1)]


def _first_minima(A: MatrixA, grid: List[float], h1: List[float],
                  witnesses: List[Optional[LatticeVector]]) -> List[GraphMinimum]:
    minima: List[GraphMinimum] = []
    for i in range(1, len(grid) - 1):
        if not (h1[i - 1] > h1[i] <= h1[i + 1]):
            continue
        witness = witnesses[i]
        r, value = grid[i], h1[i]
        if witness is not None and any(witness.q):
            vertex_r, vertex_value = trajectory_vertex(A, witness)
            if math.isfinite(vertex_r):
                r, value = vertex_r, vertex_value
        if minima and minima[-1].witness is not None and minima[-1].witness == witness:
            continue
        minima.append(GraphMinimum(r=r, h1_at_r=value, witness=witness, grid_index=i))
    minima.sort(key=lambda item: item.r)
    return minima


def _slope_violations(A: MatrixA, grid: List[float], values: List[List[float]]):
    lower, upper = -1.0 / A.n - SLOPE_TOLERANCE, 1.0 / A.m + SLOPE_TOLERANCE
    violations = []
    for i in range(1, len(grid)):
        dq = grid[i] - grid[i - 1]
        for j in range(A.dimension):
            slope = (values[i][j] - values[i - 1][j]) / dq
            if not lower <= slope <= upper:
                violations.append((i, j, slope))
    return violations


def combined_graph(A: MatrixA, q_max: float, step: float, backend: str = "exact",
                   threads: Optional[int] = None,
                   settings: Optional[LatticeSettings] = None) -> CombinedGraph:
    """
    在网格 {0, step, …, q_max} 上采样 h_1..h_{m+n}，并记录 h_1 的局部极小。

    网格点相互独立，可并行计算；结果与顺序计算逐位一致。
    """
    if not 0 < step <= 0.25:
        raise InvalidParam(f"step 必须在 (0, 0.25] 内: {step}", module="lattice_graph")
    if q_max < step:
        raise InvalidParam(f"q_max 必须 ≥ step: {q_max}", module="lattice_graph")
    settings = settings or default_settings.lattice
    threads = threads or settings.threads
    engine = get_backend(backend, settings)
    grid = make_grid(q_max, step)

    logger.info(f"combined_graph: {A.m}x{A.n}, {len(grid)} 个网格点, 后端 {backend}, 线程 {threads}")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda x: engine.minima(A, x), grid))
    else:
        results = [engine.minima(A, x) for x in grid]

    values = [res.log_lambda for res in results]
    first_witnesses = [res.witnesses[0] for res in results]
    h1 = [row[0] for row in values]
    minima = _first_minima(A, grid, h1, first_witnesses)
    violations = _slope_violations(A, grid, values) if backend == "exact" else []
    if violations:
        logger.warning(f"combined_graph: {len(violations)} 处差商超出 [−1/n, 1/m]")
    return CombinedGraph(m=A.m, n=A.n, grid=grid, values=values, minima=minima, backend=backend,
                         first_witnesses=first_witnesses, slope_violations=violations)


def first_minimum_witnesses(graph: CombinedGraph) -> List[LatticeVector]:
    """组合图中出现过的不同 λ_1 见证（q ≠ 0），按首次出现顺序"""
    seen = set()
    result = []
    for witness in graph.first_witnesses:
        if witness is None or not any(witness.q):
            continue
        key = (tuple(witness.q), tuple(witness.p))
        if key not in seen:
            seen.add(key)
            result.append(witness)
    return result


def random_matrix(m: int, n: int, seed: int) -> MatrixA:
    """均匀随机 [0,1) 元素的矩阵，元素保存为 17 位十进制字符串"""
    rng = np.random.default_rng(seed)
    entries = [[format(float(x), ".17g") for x in row] for row in rng.random((m, n))]
    return MatrixA(m=m, n=n, entries=entries, tag=f"random(seed={seed})")


__all__ = [
    "trajectory", "trajectory_vertex", "successive_minima_exact", "successive_minima_reduced",
    "combined_graph", "make_grid", "first_minimum_witnesses", "random_matrix", "integer_rank",
]
