# src/engine/minima_backends/lll.py
"""
扩展精度下的 LLL 约化与 Fincke-Pohst 枚举。

基向量按行存储，元素为给定 mpmath 上下文中的 mpf；同时跟踪整数变换 U（约化行 = U · 原始行）。
"""
import threading
from typing import List, Sequence, Tuple

from mpmath.ctx_mp import MPContext

_local = threading.local()


def working_context(dps: int) -> MPContext:
    """每个线程、每种精度一个独立上下文，避免共享全局 mp 的精度状态"""
    contexts = getattr(_local, "contexts", None)
    if contexts is None:
        contexts = _local.contexts = {}
    ctx = contexts.get(dps)
    if ctx is None:
        ctx = MPContext()
        ctx.dps = dps
        contexts[dps] = ctx
    return ctx


def _dot(ctx: MPContext, x: Sequence, y: Sequence):
    return ctx.fsum(a * b for a, b in zip(x, y))


def gram_schmidt(ctx: MPContext, basis: List[list]) -> Tuple[List[list], List[object]]:
    """
    Returns:
        (mu, B)：mu[k][j] 为 b_k 在 b*_j 上的系数（j < k），B[k] = ‖b*_k‖²
    """
    d = len(basis)
    star: List[list] = []
    mu = [[ctx.zero] * d for _ in range(d)]
    norms = []
    for k in range(d):
        v = list(basis[k])
        for j in range(k):
            mu[k][j] = _dot(ctx, basis[k], star[j]) / norms[j]
            v = [vi - mu[k][j] * sj for vi, sj in zip(v, star[j])]
        star.append(v)
        norms.append(_dot(ctx, v, v))
    return mu, norms


def lll_reduce(ctx: MPContext, basis: List[list], delta: float = 0.99):
    """
    LLL 约化。

    Returns:
        (约化基, U, mu, B)
    """
    b = [list(row) for row in basis]
    d = len(b)
    U = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    mu, B = gram_schmidt(ctx, b)
    k = 1
    while k < d:
        for j in range(k - 1, -1, -1):
            r = int(ctx.nint(mu[k][j]))
            if r:
                b[k] = [x - r * y for x, y in zip(b[k], b[j])]
                U[k] = [x - r * y for x, y in zip(U[k], U[j])]
                for l in range(j):
                    mu[k][l] -= r * mu[j][l]
                mu[k][j] -= r
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            U[k], U[k - 1] = U[k - 1], U[k]
            mu, B = gram_schmidt(ctx, b)
            k = max(k - 1, 1)
    return b, U, mu, B


def enumerate_ball(ctx: MPContext, mu: List[list], B: List[object], radius_sq,
                   budget: int) -> Tuple[List[Tuple[int, ...]], int]:
    """
    Fincke-Pohst：枚举约化基坐标 x，使 ‖Σ x_k b_k‖² ≤ radius_sq。

    Returns:
        (非零系数向量列表, 访问的节点数)；节点数超过 budget 时返回 (None, 节点数)
    """
    d = len(B)
    x = [0] * d
    found: List[Tuple[int, ...]] = []
    nodes = 0

    def visit(i: int, partial) -> bool:
        nonlocal nodes
        center = -ctx.fsum(mu[k][i] * x[k] for k in range(i + 1, d)) if i + 1 < d else ctx.zero
        remaining = radius_sq - partial
        if remaining < 0:
            return True
        width = ctx.sqrt(remaining / B[i])
        lo = int(ctx.ceil(center - width))
        hi = int(ctx.floor(center + width))
        for xi in range(lo, hi + 1):
            nodes += 1
            if nodes > budget:
                return False
            x[i] = xi
            value = partial + B[i] * (xi - center) ** 2
            if value > radius_sq:
                continue
            if i == 0:
                if any(x):
                    found.append(tuple(x))
            elif not visit(i - 1, value):
                return False
        x[i] = 0
        return True

    completed = visit(d - 1, ctx.zero)
    return (found if completed else None), nodes
