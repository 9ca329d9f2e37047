import pytest

from src.engine.verify import borel_cantelli_sum, series_theta
from src.models.approx_models import PowerPhi
from src.models.errors import InvalidParam
from src.models.report_models import SeriesVerdict


def test_series_theta():
    assert series_theta(1, 2) == 3
    assert series_theta(2, 2) == 2
    assert series_theta(2, 3) == 2


def test_converging_above_theta(settings):
    """(m, n) = (2, 2)，τ = 4 > θ = 2：被加项 N^(−5)"""
    result = borel_cantelli_sum(PowerPhi(tau=4.0), 2, 2, 2000, settings=settings.verify)
    print(f"\n(2,2) τ=4: β={result.decay_exponent:.4f}, 部分和末项 {result.partial_sums[-1]:.6g}")
    assert result.verdict is SeriesVerdict.CONVERGING
    assert result.delta == 0
    assert result.decay_exponent == pytest.approx(-5.0, abs=1e-6)
    assert result.tau_measured == pytest.approx(4.0, abs=1e-9)
    assert len(result.partial_sums) == 1999


def test_diverging_below_theta(settings):
    """(m, n) = (1, 2)，τ = 2 < θ = 3：被加项 log N，δ = 1"""
    result = borel_cantelli_sum(PowerPhi(tau=2.0), 1, 2, 2000, settings=settings.verify)
    assert result.delta == 1, "n = m + 1 时带 log 因子"
    assert result.theta == 3
    assert result.verdict is SeriesVerdict.DIVERGING
    assert result.partial_sums[-1] > result.partial_sums[len(result.partial_sums) // 2] * 1.9


def test_borderline_is_inconclusive(settings):
    # m = 1, n = 3：Φ^1·N^3 = N^(−1)，δ = 0
    result = borel_cantelli_sum(PowerPhi(tau=4.0), 1, 3, 2000, settings=settings.verify)
    assert result.verdict is SeriesVerdict.INCONCLUSIVE


def test_partial_sums_increase(settings):
    result = borel_cantelli_sum(PowerPhi(tau=3.0), 1, 2, 100, settings=settings.verify)
    assert all(b > a for a, b in zip(result.partial_sums, result.partial_sums[1:]))


def test_invalid_arguments(power2):
    with pytest.raises(InvalidParam):
        borel_cantelli_sum(power2, 1, 1, 100)
    with pytest.raises(InvalidParam) as excinfo:
        borel_cantelli_sum(power2, 1, 2, 5)
    assert excinfo.value.code == "verify.InvalidParam"
