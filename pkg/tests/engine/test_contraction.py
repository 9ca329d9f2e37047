import logging
import math

import pytest

from src.engine import contraction
from src.engine.contraction import (
    average_rate, contraction_profile, contraction_rows, limit_estimates, local_rate, partition_case,
    u_k_sequence, CONTRACTION_HEADER,
)
from src.engine.template import build_template
from src.models.approx_models import PowerPhi
from src.models.contraction_models import IntervalType
from src.models.errors import InvalidParam, NonNegativeMinimum, OutOfRange, TauUnknown

LACUNARY = [2 ** (50 ** k) for k in range(1, 5)]


@pytest.fixture(scope="module")
def doubly_exponential(power2):
    return build_template(power2, [2 ** (2 ** k) for k in range(1, 11)], 0.0, 1, 1)


@pytest.fixture(scope="module")
def lacunary_template(power2):
    """t_k = 2^(50^k)，log t_(k+1)/log t_k = 50"""
    return build_template(power2, LACUNARY, 0.0, 1, 1)


def test_u_k_is_two_thirds(doubly_exponential):
    sequence = u_k_sequence(doubly_exponential)
    assert sequence.limit == pytest.approx(2 / 3)
    for u in sequence.values:
        assert u == pytest.approx(2 / 3, rel=1e-12)


def test_local_rate_right_limit(doubly_exponential):
    e = doubly_exponential.excursions[0]
    assert local_rate(doubly_exponential, e.b) == 0, "[b_k, q_k) 上为 mn − m"
    assert local_rate(doubly_exponential, e.q) == 1, "q_k 处取右极限 mn"
    assert local_rate(doubly_exponential, 0.1) == 1


def test_non_lacunary_closed_forms(doubly_exponential):
    """t_k = 2^(2^k) 不是缺项序列：平均值 1/3 + 2^(1−k)/3 与 1/2 + 2^(−k)"""
    for e in doubly_exponential.excursions:
        at_q = average_rate(doubly_exponential, e.q)
        at_b = average_rate(doubly_exponential, e.b)
        assert at_q == pytest.approx(1 / 3 + 2.0 ** (1 - e.k) / 3, rel=1e-12), f"k={e.k} 处 q_k 平均值"
        assert at_b == pytest.approx(0.5 + 2.0 ** (-e.k), rel=1e-12), f"k={e.k} 处 b_k 平均值"


def test_lacunary_limits_one_by_one(lacunary_template):
    limits = limit_estimates(lacunary_template)
    print(f"\n缺项模板: liminf 序列 {limits.liminf_seq}, limsup 序列 {limits.limsup_seq}")
    assert limits.tau == 2.0 and limits.tau_source == "analytic"
    assert limits.closed_form_liminf == pytest.approx(2 / 3)
    assert limits.closed_form_limsup == 1.0
    assert abs(limits.liminf_gaps[-1]) < 0.02, "q_K 处平均值应接近 2/3"
    assert abs(limits.limsup_gaps[-1]) < 0.02, "b_K 处平均值应接近 mn = 1"


@pytest.mark.parametrize("m,n,tau", [(2, 1, 2.0), (2, 2, 2.0), (2, 1, 5.0), (1, 2, 5.0), (2, 2, 5.0)])
def test_lacunary_limits_general_shape(m, n, tau):
    T = build_template(PowerPhi(tau=tau), LACUNARY, 0.0, m, n)
    expected_u = (m + n) / (m * (tau + 1))
    assert all(u == pytest.approx(expected_u, rel=1e-12) for u in u_k_sequence(T).values)
    limits = limit_estimates(T)
    closed = (n - 1) * m + (m + n) / (1 + tau)
    assert limits.closed_form_liminf == pytest.approx(closed)
    assert abs(limits.liminf_seq[-1] - closed) < 0.05, f"({m},{n}), τ={tau}: {limits.liminf_seq[-1]} vs {closed}"


def test_dirichlet_exponent_has_no_template():
    # (m, n) = (1, 2) 且 τ = 2 = n/m 时 f_1(q_k) = 0
    with pytest.raises(NonNegativeMinimum):
        build_template(PowerPhi(tau=2.0), LACUNARY, 0.0, 1, 2)


def test_one_two_tau_three():
    T = build_template(PowerPhi(tau=3.0), LACUNARY, 0.0, 1, 2)
    limits = limit_estimates(T)
    assert limits.liminf_seq[-1] == pytest.approx(1.75, abs=0.01)


def test_average_rate_out_of_range(doubly_exponential):
    with pytest.raises(OutOfRange):
        average_rate(doubly_exponential, 0.0)
    with pytest.raises(OutOfRange) as excinfo:
        average_rate(doubly_exponential, doubly_exponential.last_breakpoint * 2)
    assert excinfo.value.code == "contraction.OutOfRange"


def test_limit_estimates_needs_three(power2):
    T = build_template(power2, [4, 16], 0.0, 1, 1)
    with pytest.raises(InvalidParam):
        limit_estimates(T)


def test_tau_unknown_without_phi(doubly_exponential):
    T = doubly_exponential.model_copy(update={"phi": None})
    with pytest.raises(TauUnknown):
        limit_estimates(T)
    assert limit_estimates(T, tau=2.0).tau_source == "argument"


def test_partition_cases():
    assert partition_case(1, 1, IntervalType.FLAT).cardinality == 1
    assert partition_case(1, 1, IntervalType.DESCENDING).cardinality == 0
    descending = partition_case(2, 3, IntervalType.DESCENDING)
    assert descending.s_minus == [1, 4, 5] and descending.s_plus == [2, 3]
    assert descending.cardinality == 2 * 3 - 2
    assert partition_case(2, 3, "ascending").cardinality == 6


def test_profile_and_rows(doubly_exponential):
    profile = contraction_profile(doubly_exponential)
    assert profile.breakpoints[0] == 0.0
    assert profile.rate_on_piece[:3] == [1, 0, 1]
    assert profile.cumulative_integral[1] == pytest.approx(profile.breakpoints[1])
    rows = contraction_rows(doubly_exponential)
    assert len(rows) == 10 and len(rows[0]) == len(CONTRACTION_HEADER)
    assert rows[0][0] == 1


def test_average_never_leaves_rate_range(doubly_exponential):
    for q in [0.3 * k for k in range(1, 100)]:
        value = average_rate(doubly_exponential, q)
        assert 0.0 <= value <= 1.0
        assert math.isfinite(value)


def test_average_rate_in_range_without_warning(doubly_exponential, caplog):
    with caplog.at_level(logging.WARNING, logger="src.engine.contraction"):
        for e in doubly_exponential.excursions:
            average_rate(doubly_exponential, e.q)
            average_rate(doubly_exponential, e.b)
    assert not caplog.records, "闭式积分平均应落在 [mn − m, mn] 内"


def test_average_rate_warns_when_clamping(doubly_exponential, monkeypatch, caplog):
    monkeypatch.setattr(contraction, "_integral", lambda T, Q: 1.5 * Q)
    with caplog.at_level(logging.WARNING, logger="src.engine.contraction"):
        value = average_rate(doubly_exponential, doubly_exponential.excursions[0].q)
    assert value == 1.0, "超出范围时截断到 mn"
    assert any("超出" in r.getMessage() for r in caplog.records), "截断时应记录警告"
