import math

import numpy as np
import pytest

from src.engine.lattice_graph import (
    combined_graph, first_minimum_witnesses, make_grid, random_matrix, successive_minima_exact,
    successive_minima_reduced, trajectory, trajectory_vertex,
)
from src.engine.minima_backends import get_backend, integer_rank
from src.engine.minima_backends.lll import gram_schmidt, lll_reduce, working_context
from src.models.errors import InvalidParam, ZeroFirstBlock
from src.models.lattice_models import LatticeVector, MatrixA

FIBONACCI = {1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987, 1597, 2584, 4181, 6765, 10946,
             17711, 28657, 46368, 75025, 121393, 196418, 317811, 514229, 832040, 1346269, 2178309}
GOLDEN_FLOOR = -0.25 * math.log(5.0)


@pytest.fixture(scope="module")
def golden_graph(golden_matrix, settings):
    """A = [φ−1]，q ∈ [0, 15]，精确后端"""
    return combined_graph(golden_matrix, 15.0, 0.1, "exact", settings=settings.lattice)


def _shapes():
    return [(m, n) for m in (1, 2, 3) for n in (1, 2, 3) if m + n <= 5]


# --- 轨迹 ---

def test_trajectory_and_vertex(golden_matrix):
    v = LatticeVector(q=[1], p=[1], first_norm=1.0, log_second=math.log(1 - 0.6180339887498949))
    assert trajectory(golden_matrix, v, 0.0) == pytest.approx(0.0)
    r, value = trajectory_vertex(golden_matrix, v)
    print(f"\n(1, 1) 的轨迹顶点: r={r}, 值={value}")
    assert r == pytest.approx(-0.5 * v.log_second)
    assert value == pytest.approx(0.5 * v.log_second)
    assert trajectory(golden_matrix, v, r) == pytest.approx(value, abs=1e-12), "顶点处两支相等"


def test_trajectory_rejects_zero_first_block(golden_matrix):
    v = LatticeVector(q=[0], p=[1], first_norm=0.0, log_second=0.0)
    with pytest.raises(ZeroFirstBlock):
        trajectory(golden_matrix, v, 1.0)


# --- 网格与参数 ---

def test_make_grid_nested():
    assert make_grid(1.0, 0.25) == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert len(make_grid(12.0, 0.1)) == 121
    coarse = set(make_grid(10.0, 0.2))
    assert coarse <= set(make_grid(10.0, 0.1)), "步长减半的网格应包含原网格"


def test_combined_graph_rejects_bad_step(golden_matrix):
    with pytest.raises(InvalidParam) as excinfo:
        combined_graph(golden_matrix, 5.0, 0.5)
    assert excinfo.value.code == "lattice_graph.InvalidParam"


def test_integer_rank():
    assert integer_rank([[1, 2, 3], [2, 4, 6]]) == 1
    assert integer_rank([[1, 0, 0], [0, 1, 0], [1, 1, 1]]) == 3


def test_random_matrix_deterministic():
    a, b = random_matrix(2, 3, seed=11), random_matrix(2, 3, seed=11)
    assert a.entries == b.entries
    assert a.entries != random_matrix(2, 3, seed=12).entries
    assert all(0.0 <= float(x) < 1.0 for row in a.entries for x in row)


def test_lll_preserves_determinant():
    ctx = working_context(30)
    basis = [[ctx.mpf(1), ctx.mpf(0)], [ctx.mpf("0.6180339887"), ctx.mpf(1)]]
    rows, U, mu, B = lll_reduce(ctx, basis, 0.99)
    _, B_before = gram_schmidt(ctx, basis)
    assert float(ctx.fprod(B)) == pytest.approx(float(ctx.fprod(B_before)), rel=1e-20)
    assert abs(U[0][0] * U[1][1] - U[0][1] * U[1][0]) == 1, "变换矩阵必须幺模"


# --- 逐次极小 ---

def test_minima_at_q_zero_are_one(settings):
    """Q = 1 时 20 个随机矩阵的 λ_j 全部为 1"""
    shapes = _shapes()
    for seed in range(20):
        m, n = shapes[seed % len(shapes)]
        A = random_matrix(m, n, seed)
        result = successive_minima_exact(A, 0.0, settings.lattice)
        assert result.log_lambda == [0.0] * (m + n), f"seed={seed} ({m}x{n}) 的 h_j(0) 应全为 0"


def test_reduced_not_below_exact(settings):
    A = random_matrix(2, 1, 5)
    exact = successive_minima_exact(A, 3.0, settings.lattice)
    reduced = successive_minima_reduced(A, 3.0, settings.lattice)
    for h_exact, h_reduced in zip(exact.log_lambda, reduced.log_lambda):
        assert h_exact - 1e-9 <= h_reduced <= h_exact + 3 * math.log(2.0) + 1e-9


def test_exact_minima_deterministic(settings):
    A = random_matrix(1, 2, 3)
    first = successive_minima_exact(A, 4.0, settings.lattice)
    second = successive_minima_exact(A, 4.0, settings.lattice)
    assert first == second


def test_unknown_backend(settings):
    with pytest.raises(ValueError):
        get_backend("quantum", settings.lattice)


# --- 组合图 ---

def test_golden_graph_shape(golden_graph):
    assert len(golden_graph.grid) == 151
    assert golden_graph.values[0] == [0.0, 0.0]
    assert not golden_graph.slope_violations, "精确后端的差商应落在 [−1, 1] 内"
    for row in golden_graph.values:
        assert -math.log(2.0) - 1e-9 <= sum(row) <= 1e-9


def test_golden_witnesses_are_fibonacci(golden_graph):
    witnesses = first_minimum_witnesses(golden_graph)
    denominators = [int(w.first_norm) for w in witnesses]
    print(f"\nλ_1 见证分母: {denominators}")
    assert denominators, "应至少有一个见证"
    assert set(denominators) <= FIBONACCI, "黄金比例的最佳逼近分母都是 Fibonacci 数"


def test_golden_ratio_floor(golden_graph):
    deep = [g for g in golden_graph.minima if g.witness is not None and g.witness.first_norm >= 21
            and 2.0 <= g.r <= 15.0]
    print(f"\n分母 ≥ F_8 的局部极小: {[(round(g.r, 3), round(g.h1_at_r, 5)) for g in deep]}")
    assert len(deep) >= 5
    for g in deep:
        assert -0.41 <= g.h1_at_r <= -0.39, f"r={g.r} 处的极小 {g.h1_at_r} 偏离 {GOLDEN_FLOOR}"


def test_threads_do_not_change_result(golden_matrix, settings):
    single = combined_graph(golden_matrix, 4.0, 0.25, "exact", threads=1, settings=settings.lattice)
    pooled = combined_graph(golden_matrix, 4.0, 0.25, "exact", threads=4, settings=settings.lattice)
    assert single.values == pooled.values


@pytest.mark.slow
def test_minkowski_product_bound(settings):
    """Σ_j h_j(q) ∈ [−log((m+n)!), 0]"""
    shapes = [(m, n) for m, n in _shapes() if m + n <= 4]
    for seed in range(10):
        m, n = shapes[seed % len(shapes)]
        graph = combined_graph(random_matrix(m, n, 100 + seed), 10.0, 0.25, "exact", settings=settings.lattice)
        sums = np.array([math.fsum(row) for row in graph.values])
        lower = -math.log(math.factorial(m + n)) - 1e-9
        assert sums.min() >= lower and sums.max() <= 1e-9, f"seed={100 + seed} ({m}x{n}) 违反 Minkowski 界"


@pytest.mark.slow
def test_backend_agreement(settings):
    shapes = [(m, n) for m, n in _shapes() if m + n <= 4]
    for seed in range(10):
        m, n = shapes[seed % len(shapes)]
        A = random_matrix(m, n, 100 + seed)
        exact = combined_graph(A, 10.0, 0.25, "exact", settings=settings.lattice)
        reduced = combined_graph(A, 10.0, 0.25, "reduced", settings=settings.lattice)
        gap = np.abs(np.array(exact.values) - np.array(reduced.values)).max()
        assert gap <= (m + n) * math.log(2.0) + 1e-9, f"seed={100 + seed} 两后端相差 {gap}"


def test_matrix_rejects_non_decimal():
    with pytest.raises(ValueError):
        MatrixA(m=1, n=1, entries=[["abc"]])
