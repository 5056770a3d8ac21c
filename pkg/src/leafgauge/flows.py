"""Adaptive integration of the real flows spanned by a field on C^2.

The trajectories of q' = a*X1(q) + b*X2(q), where X1 and X2 are the real
views of V and i*V, sweep out the leaves of the induced foliation.  Since
a*X1 + b*X2 is the real view of (a + i b)*V, the right-hand side costs one
complex field evaluation.

The stepper is a Dormand-Prince 5(4) embedded pair with the usual mixed
absolute/relative error control and the FSAL reuse of the last stage.  It
is hand-rolled rather than delegated so that the step budget and the
rank-drop monitor (field norm falling below the nonvanishing threshold)
are first-class failures, and so that runs are bit-deterministic.  The
state is a plain 4-tuple of floats and the stage combinations are written
out explicitly: this integrator sits under every chart projection and
gauge evaluation, so constant factors matter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import RankDropError, StepBudgetError
from .fields import NONVANISH_THRESHOLD, PointC2, VectorFieldC2

__all__ = ["FlowConfig", "integrate_flow", "leaf_flow_map", "trace_leaf"]


@dataclass(frozen=True)
class FlowConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_step: float = 0.1
    max_steps: int = 20000

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0 and self.max_step > 0):
            raise ValueError("tolerances and max_step must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")


# Dormand-Prince 5(4) tableau.
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
# 5th order weights (propagated solution); also the 7th stage row (FSAL).
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
# difference to the embedded 4th order weights, for the error estimate
_E1, _E3, _E4, _E5, _E6, _E7 = (71 / 57600, -71 / 16695, 71 / 1920,
                                -17253 / 339200, 22 / 525, -1 / 40)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


def integrate_flow(V: VectorFieldC2, coeffs: tuple[float, float], s: float,
                   q0: PointC2, cfg: FlowConfig | None = None) -> PointC2:
    """Solve q' = a*X1(q) + b*X2(q) from q0 over the time interval [0, s].

    Raises StepBudgetError when the step budget is exhausted and
    RankDropError when the field norm falls below the relative
    nonvanishing threshold along the trajectory.
    """
    cfg = cfg or FlowConfig()
    a, b = coeffs
    if s == 0.0 or (a == 0.0 and b == 0.0):
        return q0
    mix = complex(a, b)
    deg = V.degree
    ev = V.eval_complex
    thr_sq = NONVANISH_THRESHOLD * NONVANISH_THRESHOLD

    def rhs(y0, y1, y2, y3):
        vz, vw = ev(complex(y0, y1), complex(y2, y3))
        nv_sq = vz.real * vz.real + vz.imag * vz.imag + vw.real * vw.real + vw.imag * vw.imag
        scale_sq = max(1.0, y0 * y0 + y1 * y1 + y2 * y2 + y3 * y3) ** deg
        if nv_sq <= thr_sq * scale_sq:
            raise RankDropError("field norm below threshold along trajectory")
        rz = mix * vz
        rw = mix * vw
        return (rz.real, rz.imag, rw.real, rw.imag)

    y = q0.to_real4()
    atol, rtol = cfg.abs_tol, cfg.rel_tol
    direction = 1.0 if s > 0 else -1.0
    t = 0.0
    k1 = rhs(*y)

    # Hairer-style initial step: a small fraction of the solution scale over
    # the derivative scale, so the first attempt is rarely rejected.
    d0 = math.sqrt(sum(yi * yi for yi in y))
    d1 = math.sqrt(sum(ki * ki for ki in k1))
    h = min(abs(s), cfg.max_step, 0.01 * (d0 + atol) / (d1 + 1e-300))
    h = direction * max(h, 1e-12 * abs(s))

    steps = 0
    while direction * (s - t) > 1e-16 * abs(s):
        if steps >= cfg.max_steps:
            raise StepBudgetError("flow integration exceeded max_steps")
        steps += 1
        if direction * (t + h) > direction * s:
            h = s - t
        y0, y1, y2, y3 = y
        k10, k11, k12, k13 = k1

        k2 = rhs(y0 + h * (_A21 * k10),
                 y1 + h * (_A21 * k11),
                 y2 + h * (_A21 * k12),
                 y3 + h * (_A21 * k13))
        k3 = rhs(y0 + h * (_A31 * k10 + _A32 * k2[0]),
                 y1 + h * (_A31 * k11 + _A32 * k2[1]),
                 y2 + h * (_A31 * k12 + _A32 * k2[2]),
                 y3 + h * (_A31 * k13 + _A32 * k2[3]))
        k4 = rhs(y0 + h * (_A41 * k10 + _A42 * k2[0] + _A43 * k3[0]),
                 y1 + h * (_A41 * k11 + _A42 * k2[1] + _A43 * k3[1]),
                 y2 + h * (_A41 * k12 + _A42 * k2[2] + _A43 * k3[2]),
                 y3 + h * (_A41 * k13 + _A42 * k2[3] + _A43 * k3[3]))
        k5 = rhs(y0 + h * (_A51 * k10 + _A52 * k2[0] + _A53 * k3[0] + _A54 * k4[0]),
                 y1 + h * (_A51 * k11 + _A52 * k2[1] + _A53 * k3[1] + _A54 * k4[1]),
                 y2 + h * (_A51 * k12 + _A52 * k2[2] + _A53 * k3[2] + _A54 * k4[2]),
                 y3 + h * (_A51 * k13 + _A52 * k2[3] + _A53 * k3[3] + _A54 * k4[3]))
        k6 = rhs(y0 + h * (_A61 * k10 + _A62 * k2[0] + _A63 * k3[0] + _A64 * k4[0] + _A65 * k5[0]),
                 y1 + h * (_A61 * k11 + _A62 * k2[1] + _A63 * k3[1] + _A64 * k4[1] + _A65 * k5[1]),
                 y2 + h * (_A61 * k12 + _A62 * k2[2] + _A63 * k3[2] + _A64 * k4[2] + _A65 * k5[2]),
                 y3 + h * (_A61 * k13 + _A62 * k2[3] + _A63 * k3[3] + _A64 * k4[3] + _A65 * k5[3]))
        yn = (y0 + h * (_B1 * k10 + _B3 * k3[0] + _B4 * k4[0] + _B5 * k5[0] + _B6 * k6[0]),
              y1 + h * (_B1 * k11 + _B3 * k3[1] + _B4 * k4[1] + _B5 * k5[1] + _B6 * k6[1]),
              y2 + h * (_B1 * k12 + _B3 * k3[2] + _B4 * k4[2] + _B5 * k5[2] + _B6 * k6[2]),
              y3 + h * (_B1 * k13 + _B3 * k3[3] + _B4 * k4[3] + _B5 * k5[3] + _B6 * k6[3]))
        k7 = rhs(*yn)

        err = 0.0
        for i in range(4):
            e = h * (_E1 * k1[i] + _E3 * k3[i] + _E4 * k4[i]
                     + _E5 * k5[i] + _E6 * k6[i] + _E7 * k7[i])
            sc = atol + rtol * max(abs(y[i]), abs(yn[i]))
            err += (e / sc) ** 2
        err = math.sqrt(err / 4.0)

        if err <= 1.0:
            t += h
            y = yn
            k1 = k7  # FSAL
            factor = _MAX_FACTOR if err == 0.0 else min(
                _MAX_FACTOR, max(_MIN_FACTOR, _SAFETY * err ** -0.2))
        else:
            factor = max(_MIN_FACTOR, _SAFETY * err ** -0.2)
        h *= factor
        if abs(h) > cfg.max_step:
            h = direction * cfg.max_step

    return PointC2.from_real4(y)


def leaf_flow_map(V: VectorFieldC2, q: PointC2, s1: float, s2: float,
                  cfg: FlowConfig | None = None) -> PointC2:
    """Flow along X1 for time s1, then along X2 for time s2 (fixed order)."""
    mid = integrate_flow(V, (1.0, 0.0), s1, q, cfg) if s1 != 0.0 else q
    return integrate_flow(V, (0.0, 1.0), s2, mid, cfg) if s2 != 0.0 else mid


def trace_leaf(V: VectorFieldC2, q: PointC2, grid, cfg: FlowConfig | None = None):
    """leaf_flow_map applied pointwise; output order matches grid order."""
    return [leaf_flow_map(V, q, s1, s2, cfg) for (s1, s2) in grid]
