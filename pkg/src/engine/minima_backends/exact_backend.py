# src/engine/minima_backends/exact_backend.py
import math
from typing import Dict, List, Tuple

from src.engine.minima_backends.base_backend import BaseMinimaBackend, integer_rank
from src.engine.minima_backends.lll import enumerate_ball
from src.models.errors import BudgetExceeded
from src.models.lattice_models import MatrixA, SuccessiveMinima

# 半径倍增的上限
MAX_RADIUS_DOUBLINGS = 60


class ExactMinimaBackend(BaseMinimaBackend):
    """
    精确逐次极小：枚举 r·K 中的全部格点，按 K-范数排序后贪心构造线性无关链。

    r·K 包含在约化基的半径 r·√(m+n) 欧氏球内，所以 Fincke-Pohst 枚举是完整的；
    找不到 m+n 个无关点时 r 加倍重来。
    """
    name = "exact"

    def minima(self, A: MatrixA, log_Q: float) -> SuccessiveMinima:
        if log_Q < 0:
            raise ValueError(f"log_Q 必须 ≥ 0: {log_Q}")
        d = A.dimension
        lattice = self.reduce(A, log_Q)
        ctx = lattice.ctx
        A_exact = A.exact_entries()
        budget = self.settings.enumeration_budget
        slack = ctx.mpf(10) ** (-(ctx.dps - 10))

        radius = 1.0
        for _ in range(MAX_RADIUS_DOUBLINGS):
            radius_sq = ctx.mpf(radius) ** 2 * d * (1 + slack)
            coefficients, nodes = enumerate_ball(ctx, lattice.mu, lattice.B, radius_sq, budget)
            if coefficients is None:
                raise BudgetExceeded(f"q={log_Q}: 枚举节点超过预算 {budget}", radius=radius)

            log_radius = ctx.log(radius) + slack
            candidates: Dict[Tuple[int, ...], tuple] = {}
            for x in coefficients:
                z = tuple(sum(x[k] * lattice.U[k][i] for k in range(d)) for i in range(d))
                z = self.normalize_sign(z)
                if z in candidates:
                    continue
                log_norm, first, second = self.log_k_norm(ctx, A, A_exact, z, log_Q)
                if log_norm <= log_radius:
                    candidates[z] = (log_norm, first, second)

            ordered = sorted(candidates.items(), key=lambda item: self.sort_key(item[1][0], item[1][1], item[0], A.n))
            chain: List[tuple] = []
            for z, data in ordered:
                if integer_rank([c[0] for c in chain] + [z]) > len(chain):
                    chain.append((z, data))
                    if len(chain) == d:
                        break
            if len(chain) == d:
                self.logger.debug(f"q={log_Q}: 半径 {radius} 内 {len(candidates)} 个候选，{nodes} 个节点")
                return SuccessiveMinima(
                    log_Q=log_Q,
                    log_lambda=[float(data[0]) for _, data in chain],
                    witnesses=[self.make_vector(A, z, data[1], data[2]) for z, data in chain],
                    backend=self.name,
                )
            radius *= 2.0
        raise BudgetExceeded(f"q={log_Q}: 半径倍增 {MAX_RADIUS_DOUBLINGS} 次仍未找到 {d} 个无关点",
                             radius=radius)
