# src/engine/minima_backends/reduced_backend.py
from src.engine.minima_backends.base_backend import BaseMinimaBackend
from src.models.lattice_models import MatrixA, SuccessiveMinima


class ReducedMinimaBackend(BaseMinimaBackend):
    """
    近似逐次极小：LLL 约化基各向量的 K-范数排序后作为 λ̃_j。

    对 δ=0.99 的 LLL，|log λ̃_j − log λ_j| ≤ (m+n)·log 2。
    """
    name = "reduced"

    def minima(self, A: MatrixA, log_Q: float) -> SuccessiveMinima:
        if log_Q < 0:
            raise ValueError(f"log_Q 必须 ≥ 0: {log_Q}")
        lattice = self.reduce(A, log_Q)
        A_exact = A.exact_entries()
        scored = []
        for row in lattice.U:
            z = self.normalize_sign(tuple(row))
            log_norm, first, second = self.log_k_norm(lattice.ctx, A, A_exact, z, log_Q)
            scored.append((self.sort_key(log_norm, first, z, A.n), z, first, second))
        scored.sort(key=lambda item: item[0])
        return SuccessiveMinima(
            log_Q=log_Q,
            log_lambda=[float(item[0][0]) for item in scored],
            witnesses=[self.make_vector(A, z, first, second) for _, z, first, second in scored],
            backend=self.name,
        )
