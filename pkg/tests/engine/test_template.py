import math

import pytest

from src.config.config_loader import TemplateSettings
from src.engine.template import (
    build_template, eval_f1, eval_template, projected_coordinates, sample_template,
    template_as_graph, template_json, validate_template,
)
from src.models.approx_models import PowerPhi
from src.models.errors import InvalidParam, NonNegativeMinimum, OverlappingExcursions

LOG2 = math.log(2.0)


@pytest.fixture(scope="module")
def doubly_exponential(power2, settings):
    """m = n = 1，Φ = Power(2)，t_k = 2^(2^k)，k = 1..10，Δ = 1"""
    return build_template(power2, [2 ** (2 ** k) for k in range(1, 11)], 0.0, 1, 1, settings=settings.template)


def test_breakpoints_closed_form(doubly_exponential):
    for e in doubly_exponential.excursions:
        L = (2 ** e.k) * LOG2
        assert e.q == pytest.approx(1.5 * L, rel=1e-12)
        assert e.f1 == pytest.approx(-0.5 * L, rel=1e-12)
        assert (e.b, e.c) == (pytest.approx(L, rel=1e-12), pytest.approx(2 * L, rel=1e-12))


def test_touching_excursions_accepted(doubly_exponential, settings):
    print(f"\n相切的 k: {doubly_exponential.touching}")
    assert doubly_exponential.touching == list(range(1, 10)), "c_k = b_(k+1) 对每个 k 成立"
    report = validate_template(doubly_exponential, settings=settings.template)
    assert report.passed, f"相切模板应通过校验: {report.failures}"
    assert report.max_sum_error <= 1e-12


def test_strict_rejects_touching(power2):
    strict = TemplateSettings(strict_separation=True)
    with pytest.raises(OverlappingExcursions):
        build_template(power2, [4, 16], 0.0, 1, 1, settings=strict)
    T = build_template(power2, [4, 16], 0.0, 1, 1)
    report = validate_template(T, strict=True)
    assert not report.passed
    assert any(f.startswith("template.OverlappingExcursions") for f in report.failures)


def test_overlap_raises_and_drop_prefix(power2):
    with pytest.raises(OverlappingExcursions) as excinfo:
        build_template(power2, [4, 8], 0.0, 1, 1)
    assert excinfo.value.code == "template.OverlappingExcursions"
    T = build_template(power2, [4, 8], 0.0, 1, 1, drop_overlapping_prefix=True)
    assert T.dropped_prefix == [4]
    assert [e.k for e in T.excursions] == [2], "保留原来的 k 编号"


def test_non_negative_minimum():
    # τ = n/m 时 f_1(q_k) = 0
    with pytest.raises(NonNegativeMinimum):
        build_template(PowerPhi(tau=1.0), [4, 64], 0.0, 1, 1)


def test_invalid_sequence(power2):
    with pytest.raises(InvalidParam):
        build_template(power2, [16, 4], 0.0, 1, 1)
    with pytest.raises(InvalidParam):
        build_template(power2, [4, 16], -1.0, 1, 1)


@pytest.mark.parametrize("m,n,tau", [(2, 1, 2.0), (1, 2, 5.0), (2, 2, 2.0)])
def test_general_shape_breakpoints(m, n, tau):
    L = math.log(2 ** 50)
    T = build_template(PowerPhi(tau=tau), [2 ** 50], 0.0, m, n)
    e = T.excursions[0]
    assert e.b == pytest.approx(n * L, rel=1e-12)
    assert e.c == pytest.approx(m * tau * L, rel=1e-12)
    assert e.b / e.q == pytest.approx((m + n) / (m * (tau + 1)), rel=1e-12)


def test_eval_template_pieces(doubly_exponential):
    e = doubly_exponential.excursions[2]
    assert eval_f1(doubly_exponential, e.q) == pytest.approx(e.f1)
    assert eval_f1(doubly_exponential, 0.5) == 0.0, "第一个 excursion 之前 f_1 为 0"
    middle = (e.b + e.q) / 2
    assert eval_f1(doubly_exponential, middle) == pytest.approx(-(middle - e.b))
    values = eval_template(doubly_exponential, e.q)
    assert values == [pytest.approx(e.f1), pytest.approx(-e.f1)]
    with pytest.raises(InvalidParam):
        eval_template(doubly_exponential, -1.0)


def test_projected_coordinates_match_phi(power3):
    T = build_template(power3, [10, 10 ** 12], math.log(3.0), 2, 1)
    for point, e in zip(projected_coordinates(T), T.excursions):
        assert point.x == pytest.approx(e.log_t - math.log(3.0), rel=1e-12)
        assert point.y == pytest.approx(e.log_phi - math.log(3.0), rel=1e-12)


def test_empty_template_fails_validation(power2):
    T = build_template(power2, [], 0.0, 1, 1)
    report = validate_template(T)
    assert not report.passed
    assert report.failures[0].startswith("template.EmptyTemplate")


def test_sample_and_graph(doubly_exponential):
    sample = sample_template(doubly_exponential, 20.0, 0.5)
    assert len(sample.grid) == 41
    assert all(abs(sum(row)) < 1e-12 for row in sample.values)
    graph = template_as_graph(doubly_exponential, 20.0, 0.5)
    assert graph.backend == "template"
    assert [g.r for g in graph.minima] == [e.q for e in doubly_exponential.excursions if e.q <= 20.0]


def test_template_json(doubly_exponential):
    payload = template_json(doubly_exponential)
    assert payload["m"] == 1 and payload["log_delta"] == 0.0
    assert len(payload["per_k"]) == 10
    assert payload["per_k"][0]["t_k"] == 4
