import math

import pytest

from src.engine.sequence_finder import find_sequence, rejection_bound, verify_sequence
from src.models.approx_models import TablePhi
from src.models.errors import BudgetExceeded, CapExceeded, CaseUndecidable, InvalidParam
from src.models.sequence_models import SearchCase

LOG2 = math.log(2.0)


@pytest.fixture(scope="module")
def power_certificate(power2, settings):
    """Φ = Power(2)，c = 2，从 t = 4 开始取 5 项"""
    return find_sequence(power2, 2.0, 5, 4, 2 ** 4096, settings=settings.sequence)


# --- ω = τ 分支 ---

def test_power_sequence_terms(power_certificate):
    print(f"\nPower(2) 序列: {[t.bit_length() - 1 for t in power_certificate.t_seq]} (以 2 为底的指数)")
    assert power_certificate.case_used is SearchCase.DOUBLING
    assert power_certificate.t_seq == [4, 16, 4096, 2 ** 48, 2 ** 240]
    assert power_certificate.d_theoretical == pytest.approx(256.0), "d = c^(4τ)"
    assert power_certificate.d_achieved == pytest.approx(4.0)
    assert power_certificate.d_achieved <= power_certificate.d_theoretical


def test_power_sequence_traces(power_certificate):
    assert all(r == pytest.approx(2.0, abs=1e-12) for r in power_certificate.order_trace)
    lacunarity = power_certificate.lacunarity_trace
    for k, ratio in enumerate(lacunarity, start=2):
        assert ratio >= k - 1e-12, f"log t_{k}/log t_{k - 1} 应 ≥ {k}"


def test_power_sequence_verifies(power2, power_certificate, settings):
    report = verify_sequence(power2, power_certificate.t_seq, 2.0, power_certificate.d_theoretical,
                             settings=settings.sequence)
    assert report.passed
    assert report.worst_log_distortion == pytest.approx(2 * LOG2)
    assert report.evaluations == 10, "幂函数每项只求值两个端点"


def test_dyadic_sequence(dyadic3, settings):
    cert = find_sequence(dyadic3, 2.0, 5, 2, 2 ** 200, settings=settings.sequence)
    print(f"\ndyadic(3) 序列指数: {[t.bit_length() - 1 for t in cert.t_seq]}")
    assert cert.case_used is SearchCase.DOUBLING
    assert len(cert.terms) == 5
    report = verify_sequence(dyadic3, cert.t_seq, 2.0, cert.d_theoretical, settings=settings.sequence)
    assert report.passed, f"最坏畸变 e^{report.worst_log_distortion} 超过 {cert.d_theoretical}"


def test_chi_floor_raises_terms(power2, settings):
    cert = find_sequence(power2, 2.0, 2, 4, 2 ** 4096, chi_floor=[100], settings=settings.sequence)
    assert cert.t_seq[0] > 100


# --- ω > τ 分支 ---

def test_ratio_split_hand_trace(dyadic3, settings):
    """不用解析阶数时窗口估计给出 ω > τ，第一项由 r_1 = 9 的第一个块得到"""
    cert = find_sequence(dyadic3, 2.0, 2, 2, 2 ** 40, use_analytic=False, settings=settings.sequence)
    print(f"\nω > τ 分支: τ={cert.tau:.4f}, ω={cert.omega:.4f}, t={cert.t_seq}")
    assert cert.case_used is SearchCase.RATIO_SPLIT
    assert cert.t_seq[0] == 18
    assert cert.terms[0].trace["r"] == 9
    assert cert.t_seq[1] >= 18 ** 2
    report = verify_sequence(dyadic3, cert.t_seq, 2.0, cert.d_theoretical, settings=settings.sequence)
    assert report.passed


# --- 错误 ---

def test_exp_decay_is_undecidable(exp_decay, settings):
    with pytest.raises(CaseUndecidable) as excinfo:
        find_sequence(exp_decay, 2.0, 3, 2, 10 ** 6, settings=settings.sequence)
    assert excinfo.value.code == "sequence_finder.CaseUndecidable"


def test_exp_decay_candidate_fails_verification(exp_decay, settings):
    report = verify_sequence(exp_decay, [10, 100], 2.0, 1e9, settings=settings.sequence)
    assert not report.passed
    assert report.worst == (2, 200, 100.0), "t = 100 的窗口下端 200 处下降 e^100"


def test_cap_exceeded_carries_partial_certificate(power2, settings):
    with pytest.raises(CapExceeded) as excinfo:
        find_sequence(power2, 2.0, 4, 4, 10 ** 6, settings=settings.sequence)
    partial = excinfo.value.certificate
    print(f"\n部分证书: {partial.t_seq}")
    assert partial.t_seq == [4, 16, 4096]


def test_invalid_parameters(power2):
    with pytest.raises(InvalidParam):
        find_sequence(power2, 1.0, 3, 2, 10 ** 6)
    with pytest.raises(InvalidParam):
        find_sequence(power2, 2.0, 0, 2, 10 ** 6)
    with pytest.raises(InvalidParam):
        verify_sequence(power2, [16, 4], 2.0, 4.0)
    with pytest.raises(InvalidParam):
        verify_sequence(power2, [4, 16], 2.0, 0.5)


def test_verify_threads_agree(power2, power_certificate, settings):
    single = verify_sequence(power2, power_certificate.t_seq, 2.0, 4.0, settings=settings.sequence)
    pooled = verify_sequence(power2, power_certificate.t_seq, 2.0, 4.0, threads=3, settings=settings.sequence)
    assert single == pooled


def test_verify_budget_counts_evaluations(settings):
    table = TablePhi(pairs=[(t, 1.0 / t ** 2) for t in range(1, 41)])
    tight = settings.sequence.model_copy(update={"verify_budget": 10})
    with pytest.raises(BudgetExceeded):
        verify_sequence(table, [10, 20], 2.0, 16.0, settings=tight)
    report = verify_sequence(table, [10, 20], 2.0, 16.0, settings=settings.sequence)
    assert report.evaluations == 16 + 31
    assert report.passed


def test_rejection_bound(power2, exp_decay):
    # 指数衰减在每个窗口上的下降都远超 c^(4τ)，下界成立
    assert rejection_bound(exp_decay, 10, 2, 2.0, 1.0)
    # 幂函数从不被拒绝，下界不成立
    assert not rejection_bound(power2, 5, 1, 2.0, 2.0)
    with pytest.raises(InvalidParam):
        rejection_bound(power2, 5, 0, 2.0, 2.0)
