import json
import math

import pytest

import spiralmin as sm


def test_immersion_jet_at_origin():
    point, jet = sm.immersion_jet(0.0, 0.0, 0.1)
    assert list(point) == pytest.approx([0.0, 0.0, 10.0])
    ds, dth, dss, dthth, dsth = (list(v) for v in jet)
    assert ds == pytest.approx([0.0, 1.0, 0.0])
    assert dth == pytest.approx([0.0, 0.0, 1.0])
    assert dsth == pytest.approx([1.0, 0.1, 0.0])
    assert dthth == pytest.approx([0.0, 0.0, 0.1])


def test_geometry_record_mean_curvature():
    s, theta, delta = 0.7, 1.3, 0.1
    rec = sm.geometry_at(s, theta, delta)
    expected = delta * math.exp(-delta * theta) * math.tanh(s) / math.cosh(s) ** 2
    assert rec["H"] == pytest.approx(expected, rel=1e-12)
    assert rec["det_g"] == pytest.approx(math.exp(4 * delta * theta) * math.cosh(s) ** 4, rel=1e-12)


def test_cylinder_mean_curvature():
    jet = [[0, 2, 0], [0, 0, 1], [-2, 0, 0], [0, 0, 0], [0, 0, 0]]
    assert abs(sm.mean_curvature_of_jet(jet)) == pytest.approx(0.5, abs=1e-14)


def test_operator_at_zero_is_delta_tanh():
    half_width, n, delta = 1.0, 201, 0.05
    q = sm.minimal_graph_operator(half_width, [0.0] * n, delta)
    h = 2 * half_width / (n - 1)
    for i, value in enumerate(q):
        assert value == pytest.approx(delta * math.tanh((i - n // 2) * h), abs=1e-12)


def test_solve_and_certificates():
    res = sm.solve(delta=0.05)
    assert res["converged"]
    assert res["residual_history"][-1] <= 1e-10
    assert res["norm_X2"] <= 10 * 0.05
    assert sm.surface_residual(res["half_width"], res["u"], 0.05, [0.0, 1.0]) <= 1e-6
    assert sm.embeddedness_margin(res["half_width"], res["u"], 0.05, 0.0, 4 * math.pi) > 1


def test_blowup_and_helicoid():
    assert sm.blowup_ratio(0.1, 100.0) == pytest.approx(2.0, abs=1e-3)
    errs = sm.helicoid_errors([0.04, 0.02, 0.01], 1.0, 2 * math.pi)
    assert errs[0] > errs[1] > errs[2]


def test_invalid_delta_raises():
    with pytest.raises(ValueError):
        sm.geometry_at(0.0, 0.0, 0.5)


def test_unknown_config_key_is_rejected():
    with pytest.raises(ValueError, match="bogus"):
        sm.report_json("geometry-check", '{"bogus": 1}')


def test_geometry_report_is_deterministic():
    first = sm.report_json("geometry-check", '{"delta": 0.1}')
    assert first == sm.report_json("geometry-check", '{"delta": 0.1}')
    doc = json.loads(first)
    assert doc["passed"]
    assert "H-sign-convention: trace(+) vs Corollary(-)" in doc["notes"]
