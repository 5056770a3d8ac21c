"""Polynomial vector fields on C^2 and the admissibility checks they must
pass before a leaf chart can be built on them.

A field V = (comp_z, comp_w) with a declared homogeneity degree spans a
complex line at each point where it does not vanish.  Its two real views
X1 (of V) and X2 (of i*V) span a rank-2 real distribution; the checks in
this module probe nonvanishing, involutivity of that distribution,
transversality to the radial direction, and exact homogeneity of the
components.

The candidate-field construction takes a real-valued polynomial with
identically vanishing Levi determinant and returns the two columns of its
rotated Hessian; whichever of them survives at the base point annihilates
the Hessian and is tangent to the level foliation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from .errors import AssumptionError, RankDropError
from .wirtinger import (
    WirtingerPoly,
    complex_hessian,
    homogeneity_degree,
    poly_diff,
    poly_eval,
    poly_is_real,
)

__all__ = [
    "PointC2",
    "VectorFieldC2",
    "CheckResult",
    "field_eval",
    "real_views",
    "derive_candidate_fields",
    "select_field",
    "annihilation_check",
    "lie_bracket_real",
    "bracket_span_residual",
    "involutivity_check",
    "transversality_check",
    "homogeneity_check_field",
]

NONVANISH_THRESHOLD = 1e-8


@dataclass(frozen=True)
class PointC2:
    """A point of C^2 with a canonical real view (Re z, Im z, Re w, Im w)."""

    z: complex
    w: complex

    def to_real4(self) -> tuple[float, float, float, float]:
        return (self.z.real, self.z.imag, self.w.real, self.w.imag)

    @classmethod
    def from_real4(cls, v: Sequence[float]) -> "PointC2":
        return cls(complex(float(v[0]), float(v[1])), complex(float(v[2]), float(v[3])))

    def norm(self) -> float:
        return math.sqrt(abs(self.z) ** 2 + abs(self.w) ** 2)

    def scale(self, t: float) -> "PointC2":
        return PointC2(t * self.z, t * self.w)


def _compile(poly: WirtingerPoly):
    return [(complex(float(re), float(im)), a, b, c, d)
            for (a, b, c, d), (re, im) in poly.items()]


@dataclass(frozen=True)
class VectorFieldC2:
    """Vector field on C^2 with WirtingerPoly components and a declared
    homogeneity degree.

    Construction is permissive: the declared degree is not verified here,
    so that inhomogeneous negative-control fields can be represented and
    then rejected by homogeneity_check_field.
    """

    comp_z: WirtingerPoly
    comp_w: WirtingerPoly
    degree: int

    def __post_init__(self):
        if int(self.degree) != self.degree or self.degree < 0:
            raise ValueError("degree must be a nonnegative integer")

    @cached_property
    def _compiled(self):
        return (_compile(self.comp_z), _compile(self.comp_w))

    def eval_complex(self, z: complex, w: complex) -> tuple[complex, complex]:
        """Fast float evaluation of both components; the hot path for flows.
        Exponents are small, so powers are unrolled into multiplies."""
        zb = z.conjugate()
        wb = w.conjugate()
        cz, cw = self._compiled
        acc_z = 0j
        for coeff, a, b, c, d in cz:
            t = coeff
            while a:
                t *= z
                a -= 1
            while b:
                t *= zb
                b -= 1
            while c:
                t *= w
                c -= 1
            while d:
                t *= wb
                d -= 1
            acc_z += t
        acc_w = 0j
        for coeff, a, b, c, d in cw:
            t = coeff
            while a:
                t *= z
                a -= 1
            while b:
                t *= zb
                b -= 1
            while c:
                t *= w
                c -= 1
            while d:
                t *= wb
                d -= 1
            acc_w += t
        return acc_z, acc_w

    @cached_property
    def _real_derivative_polys(self):
        # d/dx_j of each component, j over (Re z, Im z, Re w, Im w), as exact
        # polynomials: d/dx1 = d_z + d_zbar, d/dx2 = i(d_z - d_zbar), etc.
        def four(poly):
            pz, pzb = poly_diff(poly, "z"), poly_diff(poly, "zbar")
            pw, pwb = poly_diff(poly, "w"), poly_diff(poly, "wbar")
            return (pz + pzb, (pz - pzb).scale(0, 1),
                    pw + pwb, (pw - pwb).scale(0, 1))

        return (four(self.comp_z), four(self.comp_w))


class CheckResult(NamedTuple):
    passed: bool
    residual: float


def field_eval(V: VectorFieldC2, q: PointC2) -> PointC2:
    """Componentwise exact evaluation folded to complex floats."""
    return PointC2(poly_eval(V.comp_z, q), poly_eval(V.comp_w, q))


def real_views(V: VectorFieldC2, q: PointC2) -> tuple[np.ndarray, np.ndarray]:
    """The real 4-vectors X1 = view(V(q)) and X2 = view(i*V(q))."""
    vz, vw = V.eval_complex(q.z, q.w)
    X1 = np.array([vz.real, vz.imag, vw.real, vw.imag])
    X2 = np.array([-vz.imag, vz.real, -vw.imag, vw.real])
    return X1, X2


def vanish_scale(V: VectorFieldC2, q: PointC2) -> float:
    """Natural magnitude scale of a degree-m field near q, used to make the
    nonvanishing threshold relative."""
    return max(1.0, q.norm()) ** V.degree


def derive_candidate_fields(P: WirtingerPoly):
    """The two candidate tangent fields of a Levi-degenerate polynomial:
    (-P_w_zbar, P_z_zbar) and (-P_w_wbar, P_z_wbar), each homogeneous of
    degree deg(P) - 2."""
    if not poly_is_real(P):
        raise ValueError("candidate fields require a real-valued polynomial")
    deg = homogeneity_degree(P)
    if deg is None or deg < 2:
        raise ValueError("polynomial must be homogeneous of degree >= 2")
    H = complex_hessian(P)
    m = deg - 2
    V1 = VectorFieldC2(-H.entries[0][1], H.entries[0][0], m)
    V2 = VectorFieldC2(-H.entries[1][1], H.entries[1][0], m)
    return V1, V2


def select_field(P: WirtingerPoly, x: PointC2,
                 threshold: float = NONVANISH_THRESHOLD) -> VectorFieldC2:
    """Pick the candidate field that does not vanish at x, preferring the
    first on ties.  Raises AssumptionError when both vanish (the Hessian of
    P is zero at x)."""
    V1, V2 = derive_candidate_fields(P)
    scale = vanish_scale(V1, x)
    n1 = field_eval(V1, x).norm()
    n2 = field_eval(V2, x).norm()
    if n1 > threshold * scale:
        return V1
    if n2 > threshold * scale:
        return V2
    raise AssumptionError("Hessian vanishes at base point")


def annihilation_check(P: WirtingerPoly, V: VectorFieldC2) -> bool:
    """Exact test that the complex Hessian of P annihilates V as a
    polynomial identity."""
    if not poly_is_real(P):
        raise ValueError("annihilation check requires a real-valued polynomial")
    r0, r1 = complex_hessian(P).matvec(V.comp_z, V.comp_w)
    return r0.is_zero and r1.is_zero


def _real_jacobians(V: VectorFieldC2, p: PointC2):
    dz_polys, dw_polys = V._real_derivative_polys
    dz = [poly_eval(poly, p) for poly in dz_polys]
    dw = [poly_eval(poly, p) for poly in dw_polys]
    DX1 = np.array([[v.real for v in dz],
                    [v.imag for v in dz],
                    [v.real for v in dw],
                    [v.imag for v in dw]])
    DX2 = np.array([[-v.imag for v in dz],
                    [v.real for v in dz],
                    [-v.imag for v in dw],
                    [v.real for v in dw]])
    return DX1, DX2


def lie_bracket_real(V: VectorFieldC2, p: PointC2) -> np.ndarray:
    """[X1, X2](p) = DX2(p) X1(p) - DX1(p) X2(p) with Jacobians obtained by
    exact symbolic differentiation in the four real coordinates."""
    X1 = np.array(field_eval(V, p).to_real4())
    iv = field_eval(V, p)
    X2 = np.array([-iv.z.imag, iv.z.real, -iv.w.imag, iv.w.real])
    DX1, DX2 = _real_jacobians(V, p)
    return DX2 @ X1 - DX1 @ X2


def bracket_span_residual(V: VectorFieldC2, p: PointC2) -> float:
    """Norm of the component of [X1, X2](p) orthogonal to span{X1, X2}."""
    X1, X2 = real_views(V, p)
    br = lie_bracket_real(V, p)
    Q, _ = np.linalg.qr(np.column_stack([X1, X2]))
    return float(np.linalg.norm(br - Q @ (Q.T @ br)))


def involutivity_check(V: VectorFieldC2, samples: Sequence[PointC2],
                       tol: float = 1e-8) -> CheckResult:
    """Rank test of [X1 | X2 | [X1,X2]] at each sample: the smallest
    singular value must stay below tol times the largest, i.e. the bracket
    must remain in the span of the field."""
    worst = 0.0
    for p in samples:
        X1, X2 = real_views(V, p)
        if float(np.linalg.norm(X1)) <= NONVANISH_THRESHOLD * vanish_scale(V, p):
            raise RankDropError(f"distribution rank drop at {p}")
        br = lie_bracket_real(V, p)
        M = np.column_stack([X1, X2, br])
        sv = np.linalg.svd(M, compute_uv=False)
        worst = max(worst, float(sv[-1] / sv[0]))
    return CheckResult(worst <= tol, worst)


def transversality_check(V: VectorFieldC2, p: PointC2,
                         threshold: float = NONVANISH_THRESHOLD) -> CheckResult:
    """|det[p | V(p)]| against a relative threshold; failure means p and
    V(p) are (numerically) complex-linearly dependent."""
    v = field_eval(V, p)
    det = p.z * v.w - p.w * v.z
    bound = threshold * p.norm() * v.norm()
    return CheckResult(abs(det) > bound, abs(det))


def homogeneity_check_field(V: VectorFieldC2) -> bool:
    """Exact check that every monomial of both components has total degree
    equal to the declared degree."""
    for comp in (V.comp_z, V.comp_w):
        for exp in comp.terms:
            if sum(exp) != V.degree:
                return False
    return True
