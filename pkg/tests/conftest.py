"""Shared builders and session-scoped charts/gauges for the test suite.

Charts and gauges are expensive enough to share: they are immutable after
construction, so session scope is safe.  All solver tolerances here match
the pipeline defaults (ODE 1e-12, projection 1e-13 relative); per-fixture
chart radii and brackets are sized so the closed-form oracle regions lie
inside the evaluable domain.
"""

from __future__ import annotations

from pathlib import Path

import pytest

from leafgauge import (
    ChartConfig,
    FlowConfig,
    PointC2,
    VectorFieldC2,
    WirtingerPoly,
    build_chart,
    build_gauge,
    select_field,
)

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"

FLOW_TIGHT = FlowConfig(abs_tol=1e-12, rel_tol=1e-12, max_step=0.1, max_steps=20000)

# Populated by the acceptance module; echoed after the run so the
# per-criterion verdicts always appear in the terminal output.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def chart_cfg(radius: float) -> ChartConfig:
    return ChartConfig(radius_scale=radius, newton_tol=1e-13, flow=FLOW_TIGHT)


# -- polynomial and field builders ------------------------------------------

def make_pzw() -> WirtingerPoly:
    """|z w|^2 = z zbar w wbar."""
    return WirtingerPoly.monomial(1, 1, 1, 1)


def make_pz4() -> WirtingerPoly:
    """|z|^4 = z^2 zbar^2."""
    return WirtingerPoly.monomial(2, 2, 0, 0)


def make_ball() -> WirtingerPoly:
    """|z|^2 + |w|^2."""
    return WirtingerPoly.monomial(1, 1, 0, 0) + WirtingerPoly.monomial(0, 0, 1, 1)


def make_field_v3() -> VectorFieldC2:
    """(-z, w): linear field tangent to the level sets of z*w."""
    return VectorFieldC2(WirtingerPoly.monomial(1, 0, 0, 0, -1),
                         WirtingerPoly.monomial(0, 0, 1, 0), 1)


def make_field_nonholo() -> VectorFieldC2:
    """(-z zbar, zbar w): same complex span as (-z, w) where zbar != 0,
    with non-holomorphic components."""
    return VectorFieldC2(WirtingerPoly.monomial(1, 1, 0, 0, -1),
                         WirtingerPoly.monomial(0, 1, 1, 0), 2)


def make_field_bad() -> VectorFieldC2:
    """(1, zbar): not involutive, and inhomogeneous for its declared degree."""
    return VectorFieldC2(WirtingerPoly.constant(1),
                         WirtingerPoly.monomial(0, 1, 0, 0), 1)


X_PZW = PointC2(1, 1)
X_PZ4 = PointC2(1, 0)


# -- session charts and gauges ----------------------------------------------

@pytest.fixture(scope="session")
def chart_pz4():
    return build_chart(select_field(make_pz4(), X_PZ4), X_PZ4, chart_cfg(0.30))


@pytest.fixture(scope="session")
def chart_pzw():
    return build_chart(select_field(make_pzw(), X_PZW), X_PZW, chart_cfg(0.30))


@pytest.fixture(scope="session")
def chart_v3():
    return build_chart(make_field_v3(), X_PZW, chart_cfg(0.30))


@pytest.fixture(scope="session")
def chart_nonholo():
    return build_chart(make_field_nonholo(), X_PZW, chart_cfg(0.30))


@pytest.fixture(scope="session")
def gauge_pz4_n4(chart_pz4):
    return build_gauge(chart_pz4, 4, bracket_halfwidth=0.60)


@pytest.fixture(scope="session")
def gauge_pz4_n2(chart_pz4):
    return build_gauge(chart_pz4, 2, bracket_halfwidth=0.60)


@pytest.fixture(scope="session")
def gauge_pzw_n4(chart_pzw):
    return build_gauge(chart_pzw, 4, bracket_halfwidth=0.45)


@pytest.fixture(scope="session")
def gauge_v3_n2(chart_v3):
    return build_gauge(chart_v3, 2, bracket_halfwidth=0.45)


@pytest.fixture(scope="session")
def gauge_nonholo_n2(chart_nonholo):
    return build_gauge(chart_nonholo, 2, bracket_halfwidth=0.45)
