"""Exact polynomial algebra in two complex variables and their conjugates.

A polynomial in (z, zbar, w, wbar) is stored as a sparse map from exponent
quadruples (a, b, c, d), standing for z^a zbar^b w^c wbar^d, to complex
coefficients kept as pairs of exact rationals (re, im).  Every ring
operation (sum, product, formal derivative, conjugate) is exact, so
identity tests such as "this determinant is the zero polynomial" are
decided by an empty term map, never by a floating-point tolerance.
Rounding happens only when a polynomial is evaluated at a numeric point,
and then only in the final fold from rationals to a complex float.

Canonical form: no zero coefficients, at most one entry per quadruple,
terms ordered lexicographically on (a, b, c, d) wherever order matters
(printing, serialization, hashing).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

__all__ = [
    "WirtingerPoly",
    "PolyMatrix2",
    "VARIABLES",
    "poly_eval",
    "poly_diff",
    "poly_is_real",
    "homogeneity_degree",
    "complex_hessian",
    "hessian_eval",
    "levi_determinant",
    "line_hessian_restriction",
    "is_on_harmonic_line",
    "psh_sample_check",
    "poly_from_records",
    "poly_to_records",
]

VARIABLES = ("z", "zbar", "w", "wbar")
_VAR_INDEX = {name: k for k, name in enumerate(VARIABLES)}

Exponent = tuple[int, int, int, int]
Coeff = tuple[Fraction, Fraction]
Rational = Union[int, Fraction, str]


def _coeff(re: Rational, im: Rational = 0) -> Coeff:
    return (Fraction(re), Fraction(im))


def _cadd(x: Coeff, y: Coeff) -> Coeff:
    return (x[0] + y[0], x[1] + y[1])


def _cmul(x: Coeff, y: Coeff) -> Coeff:
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _cscale(x: Coeff, s: Fraction) -> Coeff:
    return (x[0] * s, x[1] * s)


def _cconj(x: Coeff) -> Coeff:
    return (x[0], -x[1])


def _is_zero(x: Coeff) -> bool:
    return x[0] == 0 and x[1] == 0


class WirtingerPoly:
    """Sparse polynomial in (z, zbar, w, wbar) with exact complex-rational
    coefficients.  Instances are immutable; all arithmetic returns new
    polynomials in canonical form."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Union[Mapping[Exponent, Coeff], Iterable] = ()):
        canon: dict[Exponent, Coeff] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exp, coeff in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != 4 or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent quadruple {exp!r}")
            cf = _coeff(coeff[0], coeff[1])
            if exp in canon:
                cf = _cadd(canon[exp], cf)
            if _is_zero(cf):
                canon.pop(exp, None)
            else:
                canon[exp] = cf
        self._terms = canon

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "WirtingerPoly":
        return cls()

    @classmethod
    def constant(cls, re: Rational, im: Rational = 0) -> "WirtingerPoly":
        return cls([((0, 0, 0, 0), _coeff(re, im))])

    @classmethod
    def monomial(cls, a: int, b: int, c: int, d: int,
                 re: Rational = 1, im: Rational = 0) -> "WirtingerPoly":
        """The single term (re + i*im) * z^a zbar^b w^c wbar^d."""
        return cls([((a, b, c, d), _coeff(re, im))])

    # -- inspection --------------------------------------------------------

    @property
    def terms(self) -> dict[Exponent, Coeff]:
        """Snapshot of the term map (mutating it does not affect self)."""
        return dict(self._terms)

    def items(self):
        """Terms in lexicographic exponent order."""
        return sorted(self._terms.items())

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WirtingerPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(self.items()))

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "WirtingerPoly") -> "WirtingerPoly":
        if not isinstance(other, WirtingerPoly):
            return NotImplemented
        out = dict(self._terms)
        for exp, cf in other._terms.items():
            acc = _cadd(out.get(exp, (Fraction(0), Fraction(0))), cf)
            if _is_zero(acc):
                out.pop(exp, None)
            else:
                out[exp] = acc
        return _wrap(out)

    def __neg__(self) -> "WirtingerPoly":
        return _wrap({exp: (-re, -im) for exp, (re, im) in self._terms.items()})

    def __sub__(self, other: "WirtingerPoly") -> "WirtingerPoly":
        return self + (-other)

    def __mul__(self, other: "WirtingerPoly") -> "WirtingerPoly":
        if not isinstance(other, WirtingerPoly):
            return NotImplemented
        out: dict[Exponent, Coeff] = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                exp = (ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3])
                acc = _cadd(out.get(exp, (Fraction(0), Fraction(0))), _cmul(ca, cb))
                if _is_zero(acc):
                    out.pop(exp, None)
                else:
                    out[exp] = acc
        return _wrap(out)

    def scale(self, re: Rational, im: Rational = 0) -> "WirtingerPoly":
        """Multiply by the exact complex scalar re + i*im."""
        s = _coeff(re, im)
        if _is_zero(s):
            return WirtingerPoly.zero()
        return _wrap({exp: _cmul(cf, s) for exp, cf in self._terms.items()})

    def conjugate(self) -> "WirtingerPoly":
        """The polynomial representing q -> conj(p(q)): exponents are swapped
        (a,b,c,d) -> (b,a,d,c) and coefficients conjugated."""
        return _wrap({(b, a, d, c): _cconj(cf)
                      for (a, b, c, d), cf in self._terms.items()})

    # -- printing ----------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exp, cf in self.items():
            parts.append(_term_str(exp, cf))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"WirtingerPoly({self!s})"


def _wrap(canon: dict[Exponent, Coeff]) -> WirtingerPoly:
    p = WirtingerPoly.__new__(WirtingerPoly)
    p._terms = canon
    return p


def _rat_str(x: Fraction) -> str:
    return str(x)


def _term_str(exp: Exponent, cf: Coeff) -> str:
    re, im = cf
    if im == 0:
        coeff = _rat_str(re)
    elif re == 0:
        coeff = f"{_rat_str(im)}i"
    else:
        sign = "+" if im > 0 else "-"
        coeff = f"({_rat_str(re)}{sign}{_rat_str(abs(im))}i)"
    factors = [f"{name}^{e}" if e > 1 else name
               for name, e in zip(VARIABLES, exp) if e > 0]
    if not factors:
        return coeff
    body = "*".join(factors)
    if coeff == "1":
        return body
    if coeff == "-1":
        return f"-{body}"
    return f"{coeff}*{body}"


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _zw(q) -> tuple[complex, complex]:
    """Accept a PointC2-like object (attributes .z/.w) or a (z, w) pair."""
    if hasattr(q, "z") and hasattr(q, "w"):
        return complex(q.z), complex(q.w)
    z, w = q
    return complex(z), complex(w)


def _cpow(base: Coeff, n: int) -> Coeff:
    acc = (Fraction(1), Fraction(0))
    for _ in range(n):
        acc = _cmul(acc, base)
    return acc


def poly_eval(p: WirtingerPoly, q) -> complex:
    """Evaluate p at the conjugate-consistent point q (zbar = conj z,
    wbar = conj w).

    The float components of q are lifted to exact rationals, the whole sum
    is accumulated exactly, and the result is folded to a complex float in
    one final rounding step.
    """
    z, w = _zw(q)
    zv = (Fraction(z.real), Fraction(z.imag))
    wv = (Fraction(w.real), Fraction(w.imag))
    zc, wc = _cconj(zv), _cconj(wv)
    acc = (Fraction(0), Fraction(0))
    for (a, b, c, d), cf in p._terms.items():
        term = cf
        if a:
            term = _cmul(term, _cpow(zv, a))
        if b:
            term = _cmul(term, _cpow(zc, b))
        if c:
            term = _cmul(term, _cpow(wv, c))
        if d:
            term = _cmul(term, _cpow(wc, d))
        acc = _cadd(acc, term)
    return complex(float(acc[0]), float(acc[1]))


def poly_diff(p: WirtingerPoly, var: str) -> WirtingerPoly:
    """Formal partial derivative treating z, zbar, w, wbar as independent."""
    k = _VAR_INDEX[var]
    out: dict[Exponent, Coeff] = {}
    for exp, cf in p._terms.items():
        e = exp[k]
        if e == 0:
            continue
        new = list(exp)
        new[k] = e - 1
        out[tuple(new)] = _cscale(cf, Fraction(e))
    return _wrap(out)


def poly_is_real(p: WirtingerPoly) -> bool:
    """Exact test that p takes real values on conjugate-consistent points:
    the coefficient of (a,b,c,d) must equal the conjugate of the
    coefficient of (b,a,d,c) for every term."""
    return p == p.conjugate()


def homogeneity_degree(p: WirtingerPoly):
    """Common total degree a+b+c+d of all terms, or None when the terms
    disagree (inhomogeneous).  The zero polynomial has no degree."""
    if p.is_zero:
        raise ValueError("degree undefined for the zero polynomial")
    degrees = {sum(exp) for exp in p._terms}
    if len(degrees) == 1:
        return degrees.pop()
    return None


# ---------------------------------------------------------------------------
# complex Hessian and derived objects
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolyMatrix2:
    """2x2 matrix of WirtingerPoly entries (row-major)."""

    entries: tuple[tuple[WirtingerPoly, WirtingerPoly],
                   tuple[WirtingerPoly, WirtingerPoly]]

    def det(self) -> WirtingerPoly:
        e = self.entries
        return e[0][0] * e[1][1] - e[0][1] * e[1][0]

    def eval_at(self, q) -> np.ndarray:
        e = self.entries
        return np.array(
            [[poly_eval(e[0][0], q), poly_eval(e[0][1], q)],
             [poly_eval(e[1][0], q), poly_eval(e[1][1], q)]],
            dtype=complex,
        )

    def matvec(self, vz: WirtingerPoly, vw: WirtingerPoly):
        e = self.entries
        return (e[0][0] * vz + e[0][1] * vw,
                e[1][0] * vz + e[1][1] * vw)


def complex_hessian(p: WirtingerPoly) -> PolyMatrix2:
    """Matrix of mixed second derivatives
    [[p_z_zbar, p_w_zbar], [p_z_wbar, p_w_wbar]] for real-valued p."""
    if not poly_is_real(p):
        raise ValueError("complex Hessian requires a real-valued polynomial")
    p_zbar = poly_diff(p, "zbar")
    p_wbar = poly_diff(p, "wbar")
    return PolyMatrix2((
        (poly_diff(p_zbar, "z"), poly_diff(p_zbar, "w")),
        (poly_diff(p_wbar, "z"), poly_diff(p_wbar, "w")),
    ))


def hessian_eval(p: WirtingerPoly, q) -> np.ndarray:
    """Numeric 2x2 complex Hessian of p at q."""
    return complex_hessian(p).eval_at(q)


def levi_determinant(p: WirtingerPoly) -> WirtingerPoly:
    """det of the complex Hessian, as an exact polynomial.  Identical
    vanishing is the exact test `levi_determinant(p).is_zero`."""
    return complex_hessian(p).det()


def _restrict_to_line(p: WirtingerPoly, dz: Coeff, dzc: Coeff,
                      dw: Coeff, dwc: Coeff) -> WirtingerPoly:
    # Substitute z -> s*dz, w -> s*dw.  Output lives in the same 4-variable
    # representation with exponents (j, k, 0, 0) meaning s^j sbar^k.
    out: dict[Exponent, Coeff] = {}
    for (a, b, c, d), cf in p._terms.items():
        factor = cf
        if a:
            factor = _cmul(factor, _cpow(dz, a))
        if b:
            factor = _cmul(factor, _cpow(dzc, b))
        if c:
            factor = _cmul(factor, _cpow(dw, c))
        if d:
            factor = _cmul(factor, _cpow(dwc, d))
        if _is_zero(factor):
            continue
        exp = (a + c, b + d, 0, 0)
        acc = _cadd(out.get(exp, (Fraction(0), Fraction(0))), factor)
        if _is_zero(acc):
            out.pop(exp, None)
        else:
            out[exp] = acc
    return _wrap(out)


def line_hessian_restriction(p: WirtingerPoly, direction):
    """Both components of hessian(s*direction) . direction as exact
    polynomials in (s, sbar).

    The float components of `direction` are lifted exactly to rationals, so
    the result is an exact polynomial and the "vanishes identically" test
    stays decidable.  Returned polynomials use exponents (j, k, 0, 0) for
    s^j sbar^k.
    """
    z, w = _zw(direction)
    if z == 0 and w == 0:
        raise ValueError("direction must be nonzero")
    dz = (Fraction(z.real), Fraction(z.imag))
    dw = (Fraction(w.real), Fraction(w.imag))
    dzc, dwc = _cconj(dz), _cconj(dw)
    H = complex_hessian(p)
    comps = []
    for row in (0, 1):
        acc = WirtingerPoly.zero()
        for col, dcol in ((0, dz), (1, dw)):
            restricted = _restrict_to_line(H.entries[row][col], dz, dzc, dw, dwc)
            acc = acc + restricted.scale(dcol[0], dcol[1])
        comps.append(acc)
    return comps[0], comps[1]


def is_on_harmonic_line(p: WirtingerPoly, x) -> bool:
    """True iff p is harmonic along the complex line through 0 and x, i.e.
    both components of the line-restricted Hessian action vanish exactly."""
    c0, c1 = line_hessian_restriction(p, x)
    return c0.is_zero and c1.is_zero


def psh_sample_check(p: WirtingerPoly, samples: Sequence, tol: float = 1e-9):
    """Sampling-based plurisubharmonicity sanity check.

    Evaluates the numeric Hessian at each sample and passes iff the
    smallest eigenvalue is >= -tol everywhere.  Returns (passed, worst)
    where worst is the most negative eigenvalue seen.
    """
    H = complex_hessian(p)
    worst = np.inf
    for q in samples:
        M = H.eval_at(q)
        M = 0.5 * (M + M.conj().T)
        eig = np.linalg.eigvalsh(M)
        worst = min(worst, float(eig[0]))
    return (worst >= -tol), worst


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def poly_to_records(p: WirtingerPoly) -> list[dict]:
    """Term records with exact rational coefficients rendered as strings."""
    return [
        {"dz": a, "dzbar": b, "dw": c, "dwbar": d,
         "re": str(re), "im": str(im)}
        for (a, b, c, d), (re, im) in p.items()
    ]


def poly_from_records(records: Iterable[Mapping]) -> WirtingerPoly:
    """Inverse of poly_to_records; coefficient strings are parsed as exact
    rationals (decimal strings like "0.25" and ratios like "1/3" both work)."""
    terms = []
    for rec in records:
        exp = (rec["dz"], rec["dzbar"], rec["dw"], rec["dwbar"])
        terms.append((exp, (Fraction(str(rec["re"])), Fraction(str(rec.get("im", "0"))))))
    return WirtingerPoly(terms)
