"""Flow integration against closed forms, first integrals, and the error
control contract."""

import math

import numpy as np
import pytest

from leafgauge import (
    FlowConfig,
    PointC2,
    RankDropError,
    StepBudgetError,
    WirtingerPoly,
    VectorFieldC2,
    integrate_flow,
    leaf_flow_map,
    trace_leaf,
)
from conftest import FLOW_TIGHT, make_field_nonholo, make_field_v3, make_pzw
from leafgauge import derive_candidate_fields


def mono(a, b, c, d, re=1, im=0):
    return WirtingerPoly.monomial(a, b, c, d, re, im)


def _err(p: PointC2, q: PointC2) -> float:
    return math.sqrt(abs(p.z - q.z) ** 2 + abs(p.w - q.w) ** 2)


def test_linear_flow_closed_form():
    # q' = X1 of (-z, w): z(s) = e^-s, w(s) = e^s
    V = make_field_v3()
    for s in (0.3, -0.45, 1.0):
        got = integrate_flow(V, (1, 0), s, PointC2(1, 1), FLOW_TIGHT)
        want = PointC2(math.exp(-s), math.exp(s))
        assert _err(got, want) <= 1e-10


def test_zero_time_is_identity():
    q = PointC2(0.3 + 1j, -2)
    assert integrate_flow(make_field_v3(), (1, 0), 0.0, q) is q


def test_small_time_taylor_oracle():
    # residual against q + s*X1(q) is C*s^2; for (-z zbar, zbar w) at (1,1)
    # the acceleration is (2, 0), so C = 1
    V = make_field_nonholo()
    q = PointC2(1, 1)
    for s in (1e-2, 1e-3):
        got = integrate_flow(V, (1, 0), s, q, FLOW_TIGHT)
        taylor = PointC2(q.z + s * (-1), q.w + s * (1))
        ratio = _err(got, taylor) / s ** 2
        assert 0.9 <= ratio <= 1.1


def test_leaf_flow_map_zero_times():
    q = PointC2(1, 0.5)
    assert leaf_flow_map(make_field_v3(), q, 0.0, 0.0) is q


def test_leaf_flow_keeps_z_for_w_directed_field():
    V = VectorFieldC2(WirtingerPoly.zero(), mono(1, 1, 0, 0, 4), 2)
    q = PointC2(1, 0.3)
    for s1, s2 in ((0.2, 0.0), (0.1, -0.3), (-0.25, 0.25)):
        p = leaf_flow_map(V, q, s1, s2, FLOW_TIGHT)
        assert abs(p.z - 1) <= 1e-10


def test_leaf_flow_linear_first_integral():
    V = make_field_v3()
    for t in (0.2, -0.6):
        p = leaf_flow_map(V, PointC2(1, 1), t, 0.0, FLOW_TIGHT)
        assert abs(p.z - math.exp(-t)) <= 1e-10
        assert abs(p.z * p.w - 1) <= 1e-10


def test_trace_leaf_singleton_grid():
    q = PointC2(1, 1)
    assert trace_leaf(make_field_v3(), q, [(0.0, 0.0)]) == [q]


def test_trace_leaf_pzw_first_integral():
    # z*w is a first integral of the span of (-z wbar, w wbar)
    V1, _ = derive_candidate_fields(make_pzw())
    grid = [(s1, s2) for s1 in np.linspace(-0.1, 0.1, 5)
            for s2 in np.linspace(-0.1, 0.1, 5)]
    pts = trace_leaf(V1, PointC2(1, 1), grid, FLOW_TIGHT)
    assert len(pts) == 25
    assert max(abs(p.z * p.w - 1) for p in pts) <= 1e-8


def test_trace_leaf_z_constant_leaves():
    V = VectorFieldC2(WirtingerPoly.zero(), mono(1, 1, 0, 0, 4), 2)
    grid = [(s1, s2) for s1 in (-0.1, 0.0, 0.1) for s2 in (-0.1, 0.0, 0.1)]
    pts = trace_leaf(V, PointC2(1, 0), grid, FLOW_TIGHT)
    assert max(abs(p.z - 1) for p in pts) <= 1e-10


def test_flow_composition():
    # flowing s then t equals flowing s + t, residual <= 10 * abs_tol
    V1, _ = derive_candidate_fields(make_pzw())
    cfg = FlowConfig(abs_tol=1e-10, rel_tol=1e-10)
    q = PointC2(1, 1)
    one = integrate_flow(V1, (1, 0), 0.25, q, cfg)
    two = integrate_flow(V1, (1, 0), 0.1, integrate_flow(V1, (1, 0), 0.15, q, cfg), cfg)
    assert _err(one, two) <= 10 * cfg.abs_tol


def test_tolerance_monotonicity():
    # halving the tolerances does not increase the error on the linear field
    V = make_field_v3()
    q = PointC2(1, 1)
    want = PointC2(math.exp(-0.8), math.exp(0.8))
    errs = []
    for tol in (1e-6, 5e-7, 2.5e-7, 1.25e-7):
        cfg = FlowConfig(abs_tol=tol, rel_tol=tol)
        errs.append(_err(integrate_flow(V, (1, 0), 0.8, q, cfg), want))
    for coarse, fine in zip(errs, errs[1:]):
        assert fine <= coarse + 1e-15


def test_step_budget_error():
    cfg = FlowConfig(abs_tol=1e-12, rel_tol=1e-12, max_step=0.01, max_steps=3)
    with pytest.raises(StepBudgetError):
        integrate_flow(make_field_v3(), (1, 0), 5.0, PointC2(1, 1), cfg)


def test_rank_drop_detected():
    # (-z, 0) shrinks z to zero; the field norm crosses the threshold
    V = VectorFieldC2(mono(1, 0, 0, 0, -1), WirtingerPoly.zero(), 1)
    with pytest.raises(RankDropError):
        integrate_flow(V, (1, 0), 25.0, PointC2(1, 1), FLOW_TIGHT)


def test_config_validation():
    with pytest.raises(ValueError):
        FlowConfig(abs_tol=-1)
    with pytest.raises(ValueError):
        FlowConfig(max_steps=0)
