"""Truncated infinite-order differential operators in two variables.

An operator P is stored through its right slices: for each multi-index i the
constant-coefficient polynomial P_(i)(d) representing d^i o P modulo the
left ideal generated by x1, x2.  Equivalently, P_(i) is the functional
g -> (d^i (P g))(0) written in the basis of derivatives at the origin, so

    P g = sum_i x^i / i! * [P_(i)(d) g](0).

Slices are known for |i| <= validity; every operation narrows the validity
by the rule documented on it.  Products need no normal ordering at all:
d^i o P o Q reduces to sum_k c_k d^k o Q once d^i o P is replaced by its
class sum_k c_k d^k.
"""

from __future__ import annotations

import json
import warnings
from fractions import Fraction
from math import comb, factorial
from typing import TYPE_CHECKING, Mapping, Sequence

from .kernel import Expander, Poly, Q, mono_key, monomials_of_degree, monomials_upto, rref
from .quasiinv import GradedSubspace, mono_index

if TYPE_CHECKING:
    from .cmpic import GammaParam

__all__ = [
    "deformed_gamma",
    "displayed_w",
    "deformed_example",
    "D_NAMES",
    "TruncSeries",
    "SliceOperator",
    "ValidityError",
    "constant_op",
    "coefficient_op",
    "from_coefficients",
    "from_diffop",
    "delta_op",
    "integration_op",
    "shift_op",
    "multiply",
    "right_action",
    "left_action",
    "order",
    "symbol",
    "homogeneous_component",
    "order_part",
    "is_regular",
    "faithfulness_witness",
    "commutator",
    "grassmannian_check",
    "sato_operator",
    "sato_from_basis",
    "check_sato",
    "sato_unit_between",
    "conjugate",
]

D_NAMES = ("d1", "d2")
X_NAMES = ("x1", "x2")


class ValidityError(ValueError):
    """A slice beyond the validity degree was requested."""


def _mono_factorial(e) -> int:
    return factorial(e[0]) * factorial(e[1])


def _dmono(e) -> Poly:
    return Poly.mono(tuple(e))


class TruncSeries:
    """A power series in x1, x2 known through total degree D (None: exact)."""

    __slots__ = ("poly", "D")

    def __init__(self, poly: Poly, D: int | None = None):
        self.poly = poly if D is None else poly.truncate(D)
        self.D = D

    @classmethod
    def parse(cls, text: str, D: int | None = None) -> "TruncSeries":
        return cls(Poly.parse(text, X_NAMES), D)

    def _meet(self, other: "TruncSeries") -> int | None:
        if self.D is None:
            return other.D
        if other.D is None:
            return self.D
        return min(self.D, other.D)

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        return TruncSeries(self.poly + other.poly, self._meet(other))

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return TruncSeries(self.poly - other.poly, self._meet(other))

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        D = self._meet(other)
        p = self.poly * other.poly if D is None else self.poly.mul_trunc(other.poly, D)
        return TruncSeries(p, D)

    def constant_term(self) -> Fraction:
        return self.poly.coeff((0, 0))

    def agrees(self, other: "TruncSeries", D: int | None = None) -> bool:
        D = self._meet(other) if D is None else D
        if D is None:
            return self.poly == other.poly
        return self.poly.truncate(D) == other.poly.truncate(D)

    def __eq__(self, other):
        return isinstance(other, TruncSeries) and self.D == other.D and self.poly == other.poly

    def __str__(self):
        body = self.poly.to_str(X_NAMES)
        return body if self.D is None else f"{body} + O(x^{self.D + 1})"


class SliceOperator:
    """Right slices P_(i), |i| <= validity, with an order bound."""

    __slots__ = ("slices", "d", "D")

    def __init__(self, slices: Mapping[tuple[int, int], Poly], d: int, D: int):
        if D < 0:
            raise ValueError("validity degree must be nonnegative")
        self.slices = {
            tuple(i): p for i, p in slices.items() if p and i[0] + i[1] <= D
        }
        self.d = d
        self.D = D

    def slice(self, i) -> Poly:
        i = tuple(i)
        if i[0] + i[1] > self.D:
            raise ValidityError(f"slice {i} beyond validity degree {self.D}")
        return self.slices.get(i, Poly())

    def indices(self) -> list[tuple[int, int]]:
        return monomials_upto(self.D)

    def truncate(self, D: int) -> "SliceOperator":
        if D > self.D:
            raise ValidityError(f"cannot extend validity {self.D} to {D}")
        return SliceOperator(self.slices, self.d, D)

    def is_zero(self) -> bool:
        return not self.slices

    def __add__(self, other: "SliceOperator") -> "SliceOperator":
        D = min(self.D, other.D)
        out = {i: self.slice(i) + other.slice(i) for i in monomials_upto(D)}
        return SliceOperator(out, max(self.d, other.d), D)

    def __neg__(self):
        return SliceOperator({i: -p for i, p in self.slices.items()}, self.d, self.D)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SliceOperator":
        c = Q(c)
        return SliceOperator({i: p * c for i, p in self.slices.items()}, self.d, self.D)

    def __mul__(self, other):
        if isinstance(other, SliceOperator):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def agrees(self, other: "SliceOperator", D: int | None = None) -> bool:
        D = min(self.D, other.D) if D is None else D
        if D > self.D or D > other.D:
            raise ValidityError(f"comparison at degree {D} exceeds validity {min(self.D, other.D)}")
        return all(self.slice(i) == other.slice(i) for i in monomials_upto(D))

    def first_disagreement(self, other: "SliceOperator", D: int | None = None):
        D = min(self.D, other.D) if D is None else D
        for i in monomials_upto(D):
            if self.slice(i) != other.slice(i):
                return i
        return None

    def to_dict(self) -> dict:
        return {
            "order": self.d,
            "validity": self.D,
            "slices": {
                f"{i[0]},{i[1]}": self.slices[i].to_str(D_NAMES)
                for i in sorted(self.slices, key=mono_key)
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> "SliceOperator":
        slices = {}
        for key, text in data["slices"].items():
            a, b = (int(s) for s in key.split(","))
            slices[(a, b)] = Poly.parse(text, D_NAMES)
        return cls(slices, int(data["order"]), int(data["validity"]))

    @classmethod
    def from_json(cls, text: str) -> "SliceOperator":
        return cls.from_dict(json.loads(text))

    def __repr__(self):
        return f"<SliceOperator order<={self.d} validity={self.D} nonzero={len(self.slices)}>"


# ---------------------------------------------------------------------------
# constructors


def constant_op(p: Poly, D: int) -> SliceOperator:
    """A constant-coefficient operator p(d): slices d^i * p."""
    return SliceOperator({i: _dmono(i) * p for i in monomials_upto(D)}, p.degree() if p else 0, D)


def from_coefficients(coeffs: Mapping[tuple[int, int], object], D: int) -> SliceOperator:
    """sum_k a_k(x) d^k with a_k power series (Poly or TruncSeries).

    The slice at i is sum_l binom(i, l) (d^l a_k)(0) d^(i - l + k); it only
    uses Taylor coefficients of total degree <= |i|, hence validity
    min(D, series validity).
    """
    series = {}
    for k, a in coeffs.items():
        if isinstance(a, TruncSeries):
            if a.D is not None:
                D = min(D, a.D)
            a = a.poly
        series[tuple(k)] = Poly.coerce(a)
    order_bound = max((k[0] + k[1] for k, a in series.items() if a), default=0)
    slices: dict = {}
    for k, a in series.items():
        for l, c in a.terms.items():
            if l[0] + l[1] > D:
                continue
            dl = c * _mono_factorial(l)
            for i in monomials_upto(D):
                if i[0] < l[0] or i[1] < l[1]:
                    continue
                e = (i[0] - l[0] + k[0], i[1] - l[1] + k[1])
                v = dl * comb(i[0], l[0]) * comb(i[1], l[1])
                slices.setdefault(i, {})
                slices[i][e] = slices[i].get(e, 0) + v
    return SliceOperator({i: Poly(t) for i, t in slices.items()}, order_bound, D)


def coefficient_op(a, D: int) -> SliceOperator:
    """Multiplication by a power series a(x)."""
    op = from_coefficients({(0, 0): a}, D)
    op.d = 0
    return op


def from_diffop(P, D: int) -> SliceOperator:
    """A differential operator with x-rational coefficients regular at 0."""
    return from_coefficients({k: a.taylor(D) for k, a in P.terms.items()}, D)


def delta_op(axis: int, D: int) -> SliceOperator:
    """E_i = exp(-x_i * d_i), restriction to x_i = 0."""
    idx = axis - 1
    return SliceOperator({j: _dmono(j) for j in monomials_upto(D) if j[idx] == 0}, 0, D)


def integration_op(axis: int, D: int) -> SliceOperator:
    """G_i, integration in x_i from 0; d_i G_i = 1 and G_i d_i = 1 - E_i."""
    idx = axis - 1
    slices = {}
    for j in monomials_upto(D):
        if j[idx]:
            k = list(j)
            k[idx] -= 1
            slices[j] = _dmono(k)
    return SliceOperator(slices, -1, D)


def shift_op(u: TruncSeries, axis: int, D: int | None = None) -> SliceOperator:
    """exp(u * d_i): g(x) -> g(x + u(x) e_i) for u in the maximal ideal."""
    if u.constant_term():
        raise ValueError("shift series must have zero constant term")
    if D is None:
        if u.D is None:
            raise ValueError("exact shift series needs an explicit validity degree")
        D = u.D
    elif u.D is not None:
        D = min(D, u.D)
    idx = axis - 1
    xi = Poly.var(axis) + u.poly.truncate(D)
    other = Poly.var(3 - axis)
    slices: dict = {}
    for k in monomials_upto(D):
        ki, ko = (k[0], k[1]) if idx == 0 else (k[1], k[0])
        p = (xi ** ki).truncate(D).mul_trunc(other ** ko, D) / _mono_factorial(k)
        for j, c in p.terms.items():
            slices.setdefault(j, {})
            slices[j][k] = slices[j].get(k, 0) + c * _mono_factorial(j)
    return SliceOperator({j: Poly(t) for j, t in slices.items()}, 0, D)


# ---------------------------------------------------------------------------
# arithmetic and actions


def multiply(P: SliceOperator, Q: SliceOperator) -> SliceOperator:
    """P o Q; validity min(D_P, D_Q - max(d_P, 0)), order bound d_P + d_Q."""
    D = min(P.D, Q.D - max(P.d, 0))
    if D < 0:
        warnings.warn("product of under-truncated operators has no valid slices")
        return SliceOperator({}, P.d + Q.d, 0)
    out = {}
    for i in monomials_upto(D):
        acc = Poly()
        for k, c in P.slice(i).terms.items():
            acc = acc + Q.slice(k) * c
        out[i] = acc
    return SliceOperator(out, P.d + Q.d, D)


def commutator(P: SliceOperator, Q: SliceOperator) -> SliceOperator:
    return multiply(P, Q) - multiply(Q, P)


def right_action(f: Poly, P: SliceOperator) -> Poly:
    """The class of f(d) o P modulo the ideal generated by x1, x2."""
    out = Poly()
    for k, c in f.terms.items():
        out = out + P.slice(k) * c
    return out


def left_action(P: SliceOperator, g: TruncSeries) -> TruncSeries:
    """P acting on a power series; valid to min(D_P, D_g - max(d_P, 0))."""
    D = P.D if g.D is None else min(P.D, g.D - max(P.d, 0))
    if D < 0:
        return TruncSeries(Poly(), -1)
    derivs = {e: c * _mono_factorial(e) for e, c in g.poly.terms.items()}
    out = {}
    for i in monomials_upto(D):
        v = sum((c * derivs[k] for k, c in P.slice(i).terms.items() if k in derivs), Fraction(0))
        if v:
            out[i] = v / _mono_factorial(i)
    return TruncSeries(Poly(out), D)


def order(P: SliceOperator) -> int:
    """max over stored slices of deg P_(i) - |i|."""
    if P.is_zero():
        raise ValueError("the zero operator has no order")
    return max(p.degree() - i[0] - i[1] for i, p in P.slices.items())


def homogeneous_component(P: SliceOperator, m: int) -> SliceOperator:
    """The part of order exactly m: degree |i| + m pieces of each slice."""
    out = {i: p.homogeneous_part(i[0] + i[1] + m) for i, p in P.slices.items()}
    return SliceOperator(out, m, P.D)


def order_part(P: SliceOperator, lo: int) -> SliceOperator:
    """Sum of the homogeneous components of order >= lo."""
    out = {}
    for i, p in P.slices.items():
        n = i[0] + i[1] + lo
        out[i] = Poly({e: c for e, c in p.terms.items() if e[0] + e[1] >= n})
    return SliceOperator(out, P.d, P.D)


def symbol(P: SliceOperator) -> SliceOperator:
    return homogeneous_component(P, order(P))


def _independent(polys: Sequence[Poly]) -> bool:
    rows = [{mono_index(e): c for e, c in p.terms.items()} for p in polys]
    if any(not r for r in rows):
        return False
    _, pivots = rref(rows)
    return len(pivots) == len(rows)


def is_regular(P: SliceOperator, m: int) -> bool:
    """For j <= m the symbol slices of size j are linearly independent."""
    if m > P.D:
        raise ValidityError(f"regularity to degree {m} exceeds validity {P.D}")
    s = symbol(P)
    return all(_independent([s.slice(k) for k in monomials_of_degree(j)]) for j in range(m + 1))


def faithfulness_witness(P: SliceOperator) -> tuple[int, int] | None:
    """A monomial x^l with P x^l != 0, read off the lowest nonzero slice."""
    if P.is_zero():
        return None
    i = min(P.slices, key=mono_key)
    l = P.slices[i].leading_monomial()
    res = left_action(P, TruncSeries(Poly.mono(l)))
    assert res.poly.coeff(i), "witness construction failed"
    return l


# ---------------------------------------------------------------------------
# Sato operators


def grassmannian_check(W: GradedSubspace, mu: int) -> bool:
    """H_W vanishes below mu and H_W(mu + k) = (k+1)(k+2)/2 up to W.D."""
    if mu > W.D:
        return False
    table = W.hilbert_table()
    return all(table[j] == 0 for j in range(mu)) and all(
        table[mu + k] == (k + 1) * (k + 2) // 2 for k in range(W.D - mu + 1)
    )


def _grassmann_mu(W: GradedSubspace) -> int:
    if not W.basis:
        raise ValueError("empty space is not a point of the Grassmannian")
    return min(p.degree() for p in W.basis)


def sato_operator(W: GradedSubspace, D: int | None = None) -> SliceOperator:
    """Canonical Sato operator of W, valid through slices of size D.

    The canonical basis elements of degree mu + m, ordered by decreasing
    leading monomial, become the slices (m, 0), (m-1, 1), ..., (0, m).
    """
    mu = _grassmann_mu(W)
    D = W.D - mu if D is None else D
    if mu + D > W.D:
        raise ValidityError(f"W known to degree {W.D}, need {mu + D}")
    if not grassmannian_check(W.truncate(mu + D), mu):
        raise ValueError("W fails the Grassmannian Hilbert-function condition")
    slices = {}
    for m in range(D + 1):
        elems = sorted(
            (p for p in W.basis if p.degree() == mu + m),
            key=lambda p: mono_key(p.leading_monomial()),
            reverse=True,
        )
        for k, p in zip(monomials_of_degree(m)[::-1], elems):
            slices[k] = p
    return SliceOperator(slices, mu, D)


def sato_from_basis(basis: Mapping[tuple[int, int], Poly], mu: int, D: int) -> SliceOperator:
    """Sato operator whose slice at k is the given w_k."""
    return SliceOperator({k: basis[k] for k in monomials_upto(D)}, mu, D)


def check_sato(S: SliceOperator, W: GradedSubspace) -> dict:
    """Order, regularity, slices in W, and slices spanning W degreewise."""
    mu = S.d
    D = min(S.D, W.D - mu)
    slices = [S.slice(k) for k in monomials_upto(D)]
    inside = all(p.degree() <= W.D and W.contains(p) for p in slices)
    spans = GradedSubspace.span(slices, mu + D).same_as(W, mu + D)
    rep = {
        "order": order(S),
        "regular": is_regular(S, D),
        "inside": inside,
        "spans": spans,
    }
    rep["ok"] = rep["order"] == mu and rep["regular"] and inside and spans
    return rep


def _expander(S: SliceOperator, D: int):
    keys = monomials_upto(D)
    ex = Expander([{mono_index(e): c for e, c in S.slice(k).terms.items()} for k in keys])
    return keys, ex


def _expand_in(keys, ex, p: Poly) -> Poly | None:
    coeffs = ex.expand({mono_index(e): c for e, c in p.terms.items()})
    if coeffs is None:
        return None
    return Poly({keys[j]: c for j, c in coeffs.items()})


def sato_unit_between(S: SliceOperator, T: SliceOperator) -> SliceOperator:
    """The unit U with U o T = S, slice by slice."""
    D = min(S.D, T.D)
    keys, ex = _expander(T, D)
    out = {}
    for i in monomials_upto(D):
        u = _expand_in(keys, ex, S.slice(i))
        if u is None:
            raise ValueError(f"slice {i} of S is not in the span of the slices of T")
        out[i] = u
    U = SliceOperator(out, 0, D)
    if not U.slice((0, 0)).coeff((0, 0)):
        raise ValueError("S and T are not related by a unit")
    return U


def conjugate(S: SliceOperator, f: Poly) -> SliceOperator:
    """L with L o S = S o f(d); validity D_S - deg f."""
    n = max(f.degree(), 0)
    D = S.D - n
    if D < 0:
        raise ValidityError("Sato operator too short for this conjugation")
    keys, ex = _expander(S, S.D)
    out = {}
    for i in monomials_upto(D):
        v = _expand_in(keys, ex, S.slice(i) * f)
        if v is None:
            raise ValueError(f"W * f is not contained in W (slice {i})")
        out[i] = v
    return SliceOperator(out, n, D)


# ---------------------------------------------------------------------------
# the deformed planar example


def deformed_gamma(beta, xi) -> "GammaParam":
    """gamma at the two coordinate lines: (xi2^2 t/(xi2 + beta t), -xi1^2 t/(xi1 + beta t))."""
    from .cmpic import GammaParam
    from .kernel import RatFunc, UPoly

    b, (x1, x2) = Q(beta), (Q(xi[0]), Q(xi[1]))
    return GammaParam(
        [
            [RatFunc(UPoly([0, x2 * x2]), UPoly([x2, b]))],
            [RatFunc(UPoly([0, -x1 * x1]), UPoly([x1, b]))],
        ]
    )


def displayed_w(beta, xi) -> Poly:
    """The degree-two generator exactly as displayed for the deformed pair."""
    b, (x1, x2) = Q(beta), (Q(xi[0]), Q(xi[1]))
    z1, z2 = Poly.var(1), Poly.var(2)
    quad = z1 * z2 + z1 * z1 / (x2 * x2) + z2 * z2 / (x1 * x1)
    return Poly.const(1) + z1 * x1 + z2 * x2 + quad * (x1 * x2 - b)


def _displayed_operators(beta, xi, N: int) -> dict:
    """S_0, T and (at xi = (1,1)) Z, built from their displayed formulas."""
    from .bakhiezer import DiffOpX, XFrac

    b, (p1, p2) = Q(beta), (Q(xi[0]), Q(xi[1]))
    x1, x2 = Poly.var(1), Poly.var(2)
    a1, a2 = Poly.const(p1) - x1, Poly.const(p2) - x2
    i1, i2 = XFrac.inv_form(a1), XFrac.inv_form(a2)

    def coef(f):
        return coefficient_op(XFrac.coerce(f).taylor(N), N)

    d1, d2 = constant_op(Poly.var(1), N), constant_op(Poly.var(2), N)
    E1, E2 = delta_op(1, N), delta_op(2, N)
    one = constant_op(Poly.const(1), N)
    S0 = from_diffop(DiffOpX({(1, 1): 1, (1, 0): i2, (0, 1): i1, (0, 0): i1 * i2}), N)
    c12 = coef(i1 * i2)
    T = c12 * (
        (E2 * d1 + coef(a1) * E2 * d1 * d1).scale(1 / p2)
        + (E1 * d2 + coef(a2) * E1 * d2 * d2).scale(1 / p1)
    ) + (c12 * E1 * E2 * (one + (d1.scale(1 / p2) + d2.scale(1 / p1)).scale(b))).scale(
        1 / (p1 * p2 - b)
    )
    out = {"S0": S0, "T": T, "Z": None}
    if (p1, p2) == (1, 1) and b != 1:
        G1, G2 = integration_op(1, N), integration_op(2, N)
        c1, c2 = coef(XFrac.inv_form(1 - x1)), coef(XFrac.inv_form(1 - x2))
        out["Z"] = (
            (c1 * E1 + c2 * E2) * d1 * d2
            + (c1 * c2 * E1 * E2 * (d1 + d2)).scale(b / (1 - b))
            - c1 * E1 * d2
            - c2 * E2 * d1
            + (E1 * E2).scale(2 * b / (b - 1))
            - (G2 * E1 * d1 + G1 * E2 * d2)
        )
    return out


def _proportional(p: Poly, q: Poly) -> bool:
    if not p or not q:
        return not p and not q
    e = q.leading_monomial()
    c = p.coeff(e) / q.coeff(e)
    return bool(c) and p == q * c


def deformed_example(beta, xi=(1, 1), D: int = 6) -> dict:
    """Run the deformed Schur pair through the Sato pipeline.

    H_beta is computed from the canonical Sato operator of W_beta, aligned at
    beta = 0 with the Berest operator by the unit U_0 (so H_0 is exactly the
    Calogero-Moser operator).  The displayed operators S_0 + beta T and Z
    are rebuilt and compared rather than trusted.
    """
    from .arrangement import omega, preset
    from .bakhiezer import berest_psi, cm_hamiltonian, spectral_basis_all
    from .cmpic import graded_basis_B

    b, xi = Q(beta), (Q(xi[0]), Q(xi[1]))
    if xi[0] * xi[1] == 0:
        raise ValueError("xi1 * xi2 must be nonzero")
    if b == xi[0] * xi[1]:
        raise ValueError("beta must differ from xi1 * xi2")
    arr = preset("lambda2")
    mu, DS = 2, D + 2
    W = graded_basis_B(arr, deformed_gamma(b, xi), mu + DS)
    W0 = graded_basis_B(arr, deformed_gamma(0, xi), mu + DS)
    rep: dict = {"beta": b, "xi": xi, "validity": D}

    rep["grassmannian"] = grassmannian_check(W, mu)
    S = sato_operator(W, DS)
    rep["regular"] = is_regular(S, DS)
    sym00 = symbol(S).slice((0, 0))
    target = Poly({(1, 1): 1, (2, 0): b / xi[1] ** 2, (0, 2): b / xi[0] ** 2})
    rep["symbol00"] = sym00
    rep["symbol_ok"] = _proportional(sym00, target)

    psi = berest_psi(arr, xi)
    SB = sato_from_basis(spectral_basis_all(psi, DS), mu, DS)
    U0 = sato_unit_between(SB, sato_operator(W0, DS))
    S_al = multiply(U0, S)
    H = conjugate(S_al, omega())
    H0 = conjugate(SB, omega())
    rep["H0_is_CM"] = H0.agrees(from_diffop(cm_hamiltonian(arr, xi), D), D)
    diff = H - H0
    rep["H_beta"] = H
    if b == 0:
        rep["Z_derived"] = None
        rep["residual_ok"] = diff.is_zero()
        rep["diff_order"] = None
    else:
        Z = order_part(diff.scale(1 / b), 0)
        residual = diff - Z.scale(b)
        rep["Z_derived"] = Z
        rep["diff_order"] = order(diff) if not diff.is_zero() else None
        rep["residual_ok"] = residual.is_zero() or order(residual) <= -1

    # comparison with the displayed formulas
    disp = _displayed_operators(b, xi, DS + 3)
    Sp = (disp["S0"] + disp["T"].scale(b)).truncate(DS)
    bad = [k for k in monomials_upto(DS) if not W.contains(Sp.slice(k))]
    rep["displayed_S_in_W"] = not bad
    rep["displayed_S_bad_slices"] = bad[:5]
    rep["displayed_Z_match"] = None
    rep["aligned_Z_match"] = None
    if not bad and b != 0 and disp["Z"] is not None:
        Hp = conjugate(Sp, omega())
        Zp = order_part((Hp - H0.truncate(Hp.D)).scale(1 / b), 0)
        Zdisp = order_part(disp["Z"], 0)
        n = min(Zp.D, Zdisp.D)
        rep["displayed_Z_match"] = Zp.agrees(Zdisp, n)
        rep["displayed_Z_first_diff"] = Zp.first_disagreement(Zdisp, n)
        rep["aligned_Z_match"] = rep["Z_derived"].agrees(Zdisp, min(n, D))

    w_disp = displayed_w(b, xi)
    w_der = next(p for p in W.basis if p.degree() == mu)
    rep["displayed_w"] = w_disp
    rep["derived_w"] = w_der * (1 / w_der.coeff((0, 0))) if w_der.coeff((0, 0)) else w_der
    rep["displayed_w_in_W"] = W.contains(w_disp)
    w0_berest = spectral_basis_all(psi, 0)[(0, 0)]
    w0_disp = displayed_w(0, xi)
    rep["displayed_w_beta0_matches_berest"] = _proportional(w0_disp, w0_berest)
    rep["ok"] = bool(
        rep["grassmannian"]
        and rep["regular"]
        and rep["symbol_ok"]
        and rep["residual_ok"]
        and rep["H0_is_CM"]
    )
    return rep
