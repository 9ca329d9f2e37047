# src/engine/minima_backends/base_backend.py
import abc
import logging
import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from src.config import default_settings
from src.config.config_loader import LatticeSettings
from src.engine.minima_backends.lll import lll_reduce, working_context
from src.models.errors import PrecisionLoss
from src.models.lattice_models import LatticeVector, MatrixA, SuccessiveMinima


class ReducedLattice:
    """某个 q = log Q 处缩放后的约化基及其 Gram-Schmidt 数据"""

    def __init__(self, ctx, rows, U, mu, B):
        self.ctx = ctx
        self.rows = rows
        self.U = U
        self.mu = mu
        self.B = B


class BaseMinimaBackend(abc.ABC):
    """
    逐次极小后端的抽象基类。

    参数 q 处使用的凸体为 [−e^(q/n), e^(q/n)]^n × [−e^(−q/m), e^(−q/m)]^m，
    于是格点 (q, Aq−p) 的 log K-范数正好是它的轨迹 max{log‖q‖ − q/n, log‖Aq−p‖ + q/m}。
    """
    name: str = "base"

    def __init__(self, settings: Optional[LatticeSettings] = None):
        self.settings = settings or default_settings.lattice
        self.logger = logging.getLogger(self.__class__.__name__)

    @abc.abstractmethod
    def minima(self, A: MatrixA, log_Q: float) -> SuccessiveMinima:
        """
        计算 log_Q 处的逐次极小。

        Args:
            A: 矩阵
            log_Q: 参数 q ≥ 0

        Returns:
            SuccessiveMinima: h_j(q) 及见证向量
        """
        pass

    # --- 精度 ---

    def working_dps(self, A: MatrixA, log_Q: float) -> int:
        # 缩放后的基元素跨越 e^(±q(1/n+1/m))，残差抵消还要再付一份
        spread = log_Q * (1.0 / A.n + 1.0 / A.m) / math.log(10.0)
        return self.settings.working_digits + int(math.ceil(2.0 * spread)) + 10

    # --- 缩放基 ---

    def scaled_basis(self, ctx, A: MatrixA, log_Q: float) -> List[list]:
        """整数坐标 z = (q, p) 的单位向量在缩放坐标下的像，按行排列"""
        m, n = A.m, A.n
        x = ctx.mpf(log_Q)
        shrink = ctx.exp(-x / n)
        grow = ctx.exp(x / m)
        exact = A.exact_entries()
        rows = []
        for j in range(n):
            row = [shrink if i == j else ctx.zero for i in range(n)]
            row += [ctx.mpf(exact[i][j].numerator) / exact[i][j].denominator * grow for i in range(m)]
            rows.append(row)
        for i in range(m):
            rows.append([ctx.zero] * n + [-grow if k == i else ctx.zero for k in range(m)])
        return rows

    def reduce(self, A: MatrixA, log_Q: float) -> ReducedLattice:
        """LLL 约化缩放基；行列式偏离 1 时加倍精度重试一次"""
        dps = self.working_dps(A, log_Q)
        for attempt in range(2):
            ctx = working_context(dps)
            rows, U, mu, B = lll_reduce(ctx, self.scaled_basis(ctx, A, log_Q), self.settings.lll_delta)
            log_det = ctx.fsum(ctx.log(b) for b in B) / 2 if all(b > 0 for b in B) else None
            if log_det is not None and abs(log_det) < 1e-8:
                return ReducedLattice(ctx, rows, U, mu, B)
            self.logger.warning(f"q={log_Q}: 约化后行列式偏离 1（dps={dps}），提高精度重试")
            dps *= 2
        raise PrecisionLoss(f"q={log_Q} 处扩展精度下约化仍失败 (dps={dps // 2})")

    # --- 精确范数 ---

    @staticmethod
    def residual(A_exact: List[List[Fraction]], q: Sequence[int], p: Sequence[int]) -> Fraction:
        """‖Aq−p‖∞（精确有理数）"""
        return max(abs(sum((row[j] * q[j] for j in range(len(q))), Fraction(0)) - p[i])
                   for i, row in enumerate(A_exact))

    def log_k_norm(self, ctx, A: MatrixA, A_exact, z: Sequence[int], log_Q: float):
        """
        Returns:
            (log K-范数 mpf, ‖q‖∞, 残差 Fraction)
        """
        n = A.n
        q, p = z[:n], z[n:]
        first = max(abs(v) for v in q)
        second = self.residual(A_exact, q, p)
        x = ctx.mpf(log_Q)
        parts = []
        if first > 0:
            parts.append(ctx.log(first) - x / n)
        if second > 0:
            parts.append(ctx.log(ctx.mpf(second.numerator) / second.denominator) + x / A.m)
        return max(parts), first, second

    @staticmethod
    def make_vector(A: MatrixA, z: Sequence[int], first: int, second: Fraction) -> LatticeVector:
        log_second = math.log(second.numerator) - math.log(second.denominator) if second > 0 else -math.inf
        return LatticeVector(q=list(z[:A.n]), p=list(z[A.n:]), first_norm=float(first), log_second=log_second)

    @staticmethod
    def normalize_sign(z: Tuple[int, ...]) -> Tuple[int, ...]:
        """±z 只保留第一个非零坐标为正的那个"""
        for v in z:
            if v != 0:
                return z if v > 0 else tuple(-w for w in z)
        return z

    @staticmethod
    def sort_key(log_norm, first: int, z: Tuple[int, ...], n: int):
        # 范数相同时按 (‖q‖∞, q, p) 字典序，保证确定性
        return (log_norm, first, z[:n], z[n:])


def integer_rank(vectors: Sequence[Sequence[int]]) -> int:
    """整数向量组在 ℚ 上的秩（Fraction 高斯消元）"""
    rows = [[Fraction(v) for v in vec] for vec in vectors]
    rank = 0
    width = len(rows[0]) if rows else 0
    for col in range(width):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(rank + 1, len(rows)):
            if rows[r][col] != 0:
                factor = rows[r][col] / rows[rank][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank
