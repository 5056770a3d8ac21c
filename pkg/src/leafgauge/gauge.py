"""The homogeneous leaf-constant gauge function.

Given a leaf chart, the scaling velocity d is the derivative at t = 1 of
t -> leaf_coords(t * base): it measures how the leaf changes along the
radial ray through the base point, and it cannot vanish when the base
point is transversal to the field.

The zero set of q -> <leaf_coords(q), d> is a union of leaves through the
base leaf and is transverse to radial scaling, so for each nearby q there
is a unique scale factor t in (1 - delta, 1 + delta) with
radial_mismatch(q, t) = 0.  The gauge value is that factor to the power
-degree: it is positive, constant along leaves, and homogeneous of the
requested degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .charts import LeafChart, leaf_coords, leaf_coords_with_times
from .errors import AssumptionError, DegenerateRootError, ProjectionError, RootSearchError
from .fields import PointC2

__all__ = [
    "GaugeFunction",
    "scaling_velocity",
    "build_gauge",
    "radial_mismatch",
    "solve_scale",
    "gauge_eval",
    "gauge_grid_rows",
]

_SLOPE_FLOOR = 1e-10
_MAX_ROOT_ITER = 60


def scaling_velocity(chart: LeafChart, step: float = 1e-4) -> tuple[float, float]:
    """Richardson-extrapolated central difference of t -> leaf_coords(t*x)
    at t = 1.  A norm below 1e-4 means the ray is numerically tangent to
    the leaf, which contradicts transversality of the base point."""
    x = chart.base

    def u_at(t: float) -> np.ndarray:
        return np.array(leaf_coords(chart, x.scale(t)))

    def central(h: float) -> np.ndarray:
        return (u_at(1.0 + h) - u_at(1.0 - h)) / (2.0 * h)

    d = (4.0 * central(step / 2) - central(step)) / 3.0
    if float(np.linalg.norm(d)) <= 1e-4:
        raise AssumptionError(
            "radial direction tangent to leaf: base point fails transversality numerically")
    return (float(d[0]), float(d[1]))


@dataclass(frozen=True, eq=False)
class GaugeFunction:
    chart: LeafChart
    ray_velocity: tuple[float, float]   # scaling velocity at the base point
    degree: int                         # homogeneity degree of the gauge
    bracket_halfwidth: float            # scale factor searched in (1-d, 1+d)
    root_tol: float


def build_gauge(chart: LeafChart, degree: int, bracket_halfwidth: float = 0.15,
                root_tol: float = 1e-11, velocity_step: float = 1e-4) -> GaugeFunction:
    if int(degree) != degree or degree < 1:
        raise ValueError("gauge degree must be a positive integer")
    if not (0 < bracket_halfwidth < 1):
        raise ValueError("bracket halfwidth must lie in (0, 1)")
    if root_tol <= 0:
        raise ValueError("root_tol must be positive")
    d = scaling_velocity(chart, velocity_step)
    G = GaugeFunction(chart=chart, ray_velocity=d, degree=int(degree),
                      bracket_halfwidth=bracket_halfwidth, root_tol=root_tol)
    base_val = gauge_eval(G, chart.base)
    if abs(base_val - 1.0) > degree * root_tol:
        raise AssumptionError("gauge normalization failed at the base point")
    return G


def radial_mismatch(G: GaugeFunction, q: PointC2, t: float) -> float:
    """<leaf_coords(t*q), ray_velocity>; zero iff t*q lies on the reference
    union of leaves through the base leaf."""
    u = leaf_coords(G.chart, q.scale(t))
    return u[0] * G.ray_velocity[0] + u[1] * G.ray_velocity[1]


def solve_scale(G: GaugeFunction, q: PointC2, t_guess: float | None = None) -> float:
    """Unique root of t -> radial_mismatch(G, q, t) in the bracket
    (1 - delta, 1 + delta).

    Safeguarded Newton: the slope comes from finite differences of the
    iterates (secant), iterates leaving the bracket or a known sign-change
    interval fall back to bisection, and the bracket endpoints are only
    evaluated when the iteration needs them.  Raises RootSearchError when
    no root exists in the bracket and DegenerateRootError when the slope
    collapses away from a root.
    """
    delta = G.bracket_halfwidth
    lo, hi = 1.0 - delta, 1.0 + delta
    d1, d2 = G.ray_velocity
    chart = G.chart
    warm = [None]

    def f(t: float) -> float:
        try:
            u, times = leaf_coords_with_times(chart, q.scale(t), warm[0])
        except ProjectionError:
            # A stale warm start can sabotage the projection after a long
            # bisection jump; retry cold before declaring the point outside.
            try:
                u, times = leaf_coords_with_times(chart, q.scale(t), None)
            except ProjectionError as exc:
                raise RootSearchError(f"point outside gauge domain: {exc}") from exc
        warm[0] = times
        return u[0] * d1 + u[1] * d2

    seen: list[tuple[float, float]] = []
    bracket = [None]  # narrowest (ta, fa, tb, fb) with a sign change

    def note(t: float, ft: float):
        for (ts, fs) in seen:
            if fs == 0.0 or ft == 0.0:
                continue
            if (fs > 0) != (ft > 0):
                a, b = (ts, t) if ts < t else (t, ts)
                if bracket[0] is None or (b - a) < (bracket[0][1] - bracket[0][0]):
                    fa = fs if ts < t else ft
                    fb = ft if ts < t else fs
                    bracket[0] = (a, b, fa, fb)
        seen.append((t, ft))

    def endpoints() -> None:
        # Lazy: bring the interval endpoints into `seen` to look for a sign
        # change when Newton cannot make progress on its own.
        for te in (lo + 1e-12, hi - 1e-12):
            if all(abs(te - ts) > 1e-12 for ts, _ in seen):
                note(te, f(te))

    t0 = 1.0 if t_guess is None else min(max(t_guess, lo + 1e-9), hi - 1e-9)
    f0 = f(t0)
    if abs(f0) <= G.root_tol:
        return t0
    note(t0, f0)
    h = 1e-6 if t0 + 1e-6 <= hi else -1e-6
    t1 = t0 + h
    f1 = f(t1)
    note(t1, f1)

    for _ in range(_MAX_ROOT_ITER):
        if abs(f1) <= G.root_tol:
            return t1
        slope = (f1 - f0) / (t1 - t0) if t1 != t0 else 0.0
        t_next = None
        if abs(slope) >= _SLOPE_FLOOR:
            t_next = t1 - f1 / slope
        if bracket[0] is not None:
            a, b, _, _ = bracket[0]
            if t_next is None or not (a < t_next < b) or abs(t_next - t1) < 1e-15:
                t_next = 0.5 * (a + b)
        elif t_next is None or not (lo < t_next < hi):
            endpoints()
            hit = next((ts for ts, fs in seen if abs(fs) <= G.root_tol), None)
            if hit is not None:
                return hit
            if bracket[0] is None:
                if abs(slope) < _SLOPE_FLOOR:
                    raise DegenerateRootError("degenerate implicit equation")
                raise RootSearchError("point outside gauge domain: no sign change in bracket")
            t_next = 0.5 * (bracket[0][0] + bracket[0][1])
        f_next = f(t_next)
        note(t_next, f_next)
        t0, f0, t1, f1 = t1, f1, t_next, f_next

    raise RootSearchError("scale factor iteration did not converge")


def gauge_eval(G: GaugeFunction, q: PointC2, t_guess: float | None = None) -> float:
    """g(q) = solve_scale(q) ** (-degree); positive on the whole domain.
    An optional scale-factor guess (e.g. from a nearby point) warm-starts
    the root search without changing the result."""
    t = solve_scale(G, q, t_guess)
    value = t ** (-G.degree)
    if not (value > 0.0) or not math.isfinite(value):
        raise RootSearchError(f"gauge evaluation produced non-positive value {value}")
    return value


def gauge_grid_rows(G: GaugeFunction, points) -> list[tuple[float, ...]]:
    """Rows (re_z, im_z, re_w, im_w, scale, gauge) for a CSV dump."""
    rows = []
    for q in points:
        t = solve_scale(G, q)
        rows.append((q.z.real, q.z.imag, q.w.real, q.w.imag, t, t ** (-G.degree)))
    return rows
