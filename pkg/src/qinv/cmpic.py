"""Rank-one Cohen-Macaulay and projective modules over the quasi-invariants.

Covers the modules B(gamma) and M(nu, gamma), the group law on truncated
sigma-polynomials, the exponential jet map behind the Picard group, the
dualizing module of the rational dihedral arrangements, and the modules
over the cuspidal curve Q[t^2, t^(2m+1)].
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import factorial
from typing import Sequence

from .arrangement import (
    PRESETS,
    Jet,
    LineDirection,
    WeightedArrangement,
    angular_derivative,
    jet,
    jet_split,
    line_form,
    monomial_jet,
    preset,
)
from .kernel import (
    Poly,
    Q,
    RatFunc,
    UPoly,
    canonical_basis,
    lcm_upoly,
    parse_upoly,
    top_nullspace,
)
from .quasiinv import GradedSubspace, solve_filtered, solve_graded

__all__ = [
    "ser_mul",
    "ser_inv",
    "group_op",
    "GammaParam",
    "graded_basis_B",
    "graded_basis_M",
    "gamma_of_unit",
    "taylor_hat",
    "upsilon",
    "is_projective_param",
    "graded_basis_P",
    "dualizing_basis",
    "mixedweight_basis",
    "mixed_arrangement",
    "boxtensor_check",
    "products_report",
    "CuspSpace",
    "cusp_module_basis",
    "cusp_picard_check",
]


# ---------------------------------------------------------------------------
# truncated sigma-series over any coefficient ring


def ser_mul(a: Sequence, b: Sequence, m: int) -> list:
    out = [a[0] * 0 if a else 0] * m
    for i, x in enumerate(a[:m]):
        if not x:
            continue
        for j in range(min(len(b), m - i)):
            if b[j]:
                out[i + j] = out[i + j] + x * b[j]
    return out


def ser_inv(a: Sequence, m: int) -> list:
    if not a or not a[0]:
        raise ZeroDivisionError("series with vanishing constant term is not a unit")
    inv0 = 1 / a[0]
    out = [inv0]
    for n in range(1, m):
        s = 0
        for j in range(1, min(n, len(a) - 1) + 1):
            if a[j]:
                s = s + a[j] * out[n - j]
        out.append(-s * inv0)
    return out[:m]


def group_op(g1: Sequence, g2: Sequence) -> list:
    """(g1 + g2) * (1 + sigma*g1*g2)^(-1) modulo sigma^m."""
    if len(g1) != len(g2):
        raise ValueError("group law needs equal truncation lengths")
    m = len(g1)
    if m == 0:
        return []
    s = [x + y for x, y in zip(g1, g2)]
    p = ser_mul(g1, g2, m)
    unit = [p[0] * 0 + 1] + p[: m - 1]
    return ser_mul(s, ser_inv(unit, m), m)


# ---------------------------------------------------------------------------
# parameters gamma


class GammaParam:
    """Per line of an arrangement, a sigma-list of rational functions in t."""

    __slots__ = ("entries",)

    def __init__(self, entries: Sequence[Sequence]):
        self.entries = tuple(tuple(RatFunc.coerce(_coerce_ratfunc(c)) for c in line) for line in entries)

    @classmethod
    def zero(cls, lengths: Sequence[int]) -> "GammaParam":
        return cls([[RatFunc(0)] * n for n in lengths])

    @classmethod
    def zero_for(cls, arr: WeightedArrangement) -> "GammaParam":
        return cls.zero(arr.mults())

    @classmethod
    def from_json(cls, text: str) -> "GammaParam":
        data = json.loads(text)
        if isinstance(data, dict):
            data = data.get("lines", data)
        if not isinstance(data, list):
            raise ValueError("gamma JSON must be a list of per-line lists")
        return cls([[_coerce_ratfunc(c) for c in line] for line in data])

    def to_json(self) -> str:
        return json.dumps(
            [[{"num": str(c.num), "den": str(c.den)} for c in line] for line in self.entries]
        )

    def lengths(self) -> list[int]:
        return [len(line) for line in self.entries]

    def check_shape(self, arr: WeightedArrangement, nu: Sequence[int] | None = None) -> None:
        nu = [0] * len(arr) if nu is None else list(nu)
        want = [m - n for m, n in zip(arr.mults(), nu)]
        if self.lengths() != want:
            raise ValueError(f"gamma lengths {self.lengths()} do not match mu - nu = {want}")

    def __mul__(self, other: "GammaParam") -> "GammaParam":
        """The group law, applied line by line."""
        if self.lengths() != other.lengths():
            raise ValueError("parameters of different shapes")
        return GammaParam([group_op(a, b) for a, b in zip(self.entries, other.entries)])

    compose = __mul__

    def inverse(self) -> "GammaParam":
        return GammaParam([[-c for c in line] for line in self.entries])

    def is_polynomial(self) -> bool:
        return all(c.is_polynomial() for line in self.entries for c in line)

    def is_zero(self) -> bool:
        return not any(c for line in self.entries for c in line)

    def __eq__(self, other):
        return isinstance(other, GammaParam) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __str__(self):
        return "(" + "; ".join("[" + ", ".join(str(c) for c in line) + "]" for line in self.entries) + ")"

    __repr__ = __str__


def _coerce_ratfunc(c):
    if isinstance(c, RatFunc):
        return c
    if isinstance(c, UPoly):
        return RatFunc(c)
    if isinstance(c, dict):
        num = parse_upoly(str(c.get("num", "0")))
        den = parse_upoly(str(c.get("den", "1")))
        return RatFunc(num, den)
    if isinstance(c, str):
        if "/(" in c.replace(" ", ""):
            n, d = c.replace(" ", "").split("/(", 1)
            return RatFunc(parse_upoly(n.strip("()")), parse_upoly(d.rstrip(")")))
        return RatFunc(parse_upoly(c))
    return RatFunc(Q(c))


# ---------------------------------------------------------------------------
# B(gamma) and M(nu, gamma)


class _GammaImage:
    """Cleared conditions L*T- = (L*gamma)*T+ per line, per sigma power."""

    def __init__(self, arr: WeightedArrangement, gamma: GammaParam):
        gamma.check_shape(arr)
        self.lines = []
        for i, ((d, m), g) in enumerate(zip(arr.lines, gamma.entries)):
            if m == 0:
                continue
            L = lcm_upoly(c.den for c in g)
            cleared = [(c.num * L.divmod(c.den)[0]).c for c in g]
            self.lines.append((i, d.a, d.b, m, L.c, cleared))

    def __call__(self, e):
        n = e[0] + e[1]
        out: dict = {}
        for i, a, b, m, L, cleared in self.lines:
            J = monomial_jet(e, a, b, 2 * m)
            for p in range(m):
                odd = J[2 * p + 1]
                if odd:
                    for s, c in enumerate(L):
                        if c:
                            key = (i, p, n + s)
                            out[key] = out.get(key, 0) + c * odd
                for j in range(p + 1):
                    even = J[2 * (p - j)]
                    if not even:
                        continue
                    for s, c in enumerate(cleared[j]):
                        if c:
                            key = (i, p, n + s)
                            out[key] = out.get(key, 0) - c * even
        return out


def graded_basis_B(arr: WeightedArrangement, gamma: GammaParam, D: int) -> GradedSubspace:
    """f with T-(f) = gamma * T+(f) at every line, through degree D."""
    return solve_filtered(_GammaImage(arr, gamma), D, label="B")


def graded_basis_M(
    arr: WeightedArrangement, nu: Sequence[int], gamma: GammaParam, D: int
) -> GradedSubspace:
    """The module M(nu, gamma): B(gamma) for the multiplicities mu - nu."""
    if len(nu) != len(arr) or any(not 0 <= n <= m for n, m in zip(nu, arr.mults())):
        raise ValueError(f"nu = {list(nu)} must satisfy 0 <= nu <= mu = {arr.mults()}")
    reduced = arr.with_mults([m - n for m, n in zip(arr.mults(), nu)])
    space = graded_basis_B(reduced, gamma, D)
    space.label = "M"
    return space


# ---------------------------------------------------------------------------
# exponential jets and the Picard group


def gamma_of_unit(g: Jet) -> list[RatFunc]:
    """The unique gamma with g * (1 + eps*gamma) in Q(t)[sigma]."""
    plus, minus = jet_split(g)
    m = len(plus)
    plus = [RatFunc.coerce(_as_rf(c)) for c in plus]
    minus = [RatFunc.coerce(_as_rf(c)) for c in minus]
    if not plus[0]:
        raise ZeroDivisionError("even part of the jet is not invertible")
    gamma = [-c for c in ser_mul(minus, ser_inv(plus, m), m)]
    # odd part of (T+ + eps T-)(1 + eps gamma) is T- + T+ gamma
    check = ser_mul(plus, gamma, m)
    assert all(not (x + y) for x, y in zip(minus, check)), "gamma_of_unit self-check failed"
    return gamma


def _as_rf(c):
    return c if isinstance(c, RatFunc) else RatFunc(c)


def taylor_hat(h: Poly, d: LineDirection, k: int) -> Jet:
    """exp of the jet of h with its constant eps-term removed."""
    j = jet(h, d, k)
    nil = Jet([UPoly()] + list(j.c[1:]), k)
    out = Jet.one(k)
    power = Jet.one(k)
    for r in range(1, k):
        power = power * nil
        if power.is_zero():
            break
        out = out + power * Fraction(1, factorial(r))
    return out


def upsilon(h: Poly, arr: WeightedArrangement) -> GammaParam:
    entries = []
    for d, m in arr.lines:
        entries.append(gamma_of_unit(taylor_hat(h, d, 2 * m)) if m else [])
    return GammaParam(entries)


def is_projective_param(h: Poly, arr: WeightedArrangement) -> bool:
    return upsilon(h, arr).is_polynomial()


class _ExpImage:
    """Odd part of T^(h) * jet(f) at each line."""

    def __init__(self, h: Poly, arr: WeightedArrangement):
        self.lines = []
        for i, (d, m) in enumerate(arr.lines):
            if m:
                g = taylor_hat(h, d, 2 * m)
                self.lines.append((i, d.a, d.b, m, [c.c for c in g.c]))

    def __call__(self, e):
        n = e[0] + e[1]
        out: dict = {}
        for i, a, b, m, g in self.lines:
            J = monomial_jet(e, a, b, 2 * m)
            for r in range(1, 2 * m, 2):
                for j in range(r + 1):
                    v = J[r - j]
                    if not v:
                        continue
                    for s, c in enumerate(g[j]):
                        if c:
                            key = (i, r, n + s)
                            out[key] = out.get(key, 0) + c * v
        return out


def graded_basis_P(h: Poly, arr: WeightedArrangement, D: int) -> GradedSubspace:
    """f with exp(h)*f quasi-invariant, via the exponential jets."""
    return solve_filtered(_ExpImage(h, arr), D, label="P")


# ---------------------------------------------------------------------------
# dualizing module of the dihedral arrangements


def _dihedral_name(arr: WeightedArrangement) -> str:
    dirs = set(arr.directions())
    for name, spec in PRESETS.items():
        if dirs == {LineDirection(*d) for d in spec} and len(arr) == len(spec):
            return name
    raise ValueError("dualizing module is implemented for the rational dihedral presets only")


class _DualImage:
    def __init__(self, arr: WeightedArrangement):
        m = arr.max_mult
        self.m = m
        self.lines = [(i, d.a, d.b, m - mu) for i, (d, mu) in enumerate(arr.lines)]

    def __call__(self, e):
        out = {}
        m = self.m
        for i, a, b, nu in self.lines:
            J = monomial_jet(e, a, b, max(2 * m, 1))
            for r in range(1, 2 * m, 2):
                if J[r]:
                    out[(i, r)] = J[r]
            for j in range(nu):
                if J[2 * j]:
                    out[(i, 2 * j)] = J[2 * j]
        return out


def dualizing_basis(arr: WeightedArrangement, D: int) -> GradedSubspace:
    """f in A(arr, m) (m = max weight) with even jets f, f'', ... of order
    below 2*(m - mu_alpha) vanishing on each line."""
    _dihedral_name(arr)
    return solve_graded(_DualImage(arr), D, label="Omega")


class _MixedImage:
    def __init__(self, arr: WeightedArrangement, k: int):
        (d0, m0), *rest = arr.lines
        self.d0 = d0
        self.m0 = m0
        self.rest = [(i + 1, d.a, d.b) for i, (d, _) in enumerate(rest)]
        self.l0 = line_form(d0)
        self.el0 = angular_derivative(self.l0)
        self.k = k

    def __call__(self, e):
        out = {}
        J = monomial_jet(e, self.d0.a, self.d0.b, 2 * self.m0)
        for r in range(1, 2 * self.m0, 2):
            if J[r]:
                out[(0, r)] = J[r]
        if self.rest:
            g = Poly.mono(e)
            # numerator of the angular derivative of g / l0^(2k)
            q = angular_derivative(g) * self.l0 - g * self.el0 * (2 * self.k)
            for i, a, b in self.rest:
                v = q.subs(a, b)
                if v:
                    out[(i, 1)] = v
        return out


def mixedweight_basis(n: int, k: int, D: int) -> GradedSubspace:
    """delta_o * {g : conditions}, for weight k+1 on the first line, 1 elsewhere.

    delta_o is the product of l_alpha^(2k) over the other lines; g has
    vanishing odd jets through order 2k+1 on the first line and
    (g / l0^(2k))' vanishing on the others.
    """
    if n not in (1, 2, 4):
        raise ValueError("n must be 1, 2 or 4")
    arr = mixed_arrangement(n, k)
    delta_o = Poly.const(1)
    for d, _ in arr.lines[1:]:
        delta_o = delta_o * line_form(d) ** (2 * k)
    shift = delta_o.degree()
    if D < shift:
        return GradedSubspace([], D, "Omega'")
    g_space = solve_graded(_MixedImage(arr, k), D - shift)
    return GradedSubspace([delta_o * g for g in g_space.basis], D, "Omega'")


def mixed_arrangement(n: int, k: int) -> WeightedArrangement:
    base = preset(f"lambda{n}")
    return base.with_mults([k + 1] + [1] * (len(base) - 1))


# ---------------------------------------------------------------------------
# multiplication checks


def products_report(
    s1: GradedSubspace, s2: GradedSubspace, target: GradedSubspace, D: int, min_span: int
) -> dict:
    """Products s1 * s2 of degree <= D against the target space.

    ``span_degree`` is the largest k such that the products span the
    degree <= k piece of the target.  Spanning needs cancellation among
    products of higher degree, so it trails D; the verdict asks only for
    membership and ``span_degree >= min_span``.
    """
    prods = []
    outside = []
    for f in s1.piece(D):
        for g in s2.piece(D - max(f.degree(), 0)):
            p = f * g
            if p.degree() > D:
                continue
            if not target.contains(p):
                outside.append((f, g))
            prods.append(p)
    spanned = GradedSubspace.span(prods, D)
    span_degree = D
    while span_degree >= 0 and not spanned.contains_space(target, span_degree):
        span_degree -= 1
    return {
        "membership": not outside,
        "outside": outside[:5],
        "span_degree": span_degree,
        "min_span": min_span,
        "ok": not outside and span_degree >= min_span,
    }


def boxtensor_check(
    arr: WeightedArrangement, g1: GammaParam, g2: GammaParam, D: int
) -> dict:
    """B(g1) * B(g2) lands in B(g1 o g2) and spans it in low degrees."""
    b1 = graded_basis_B(arr, g1, D)
    b2 = graded_basis_B(arr, g2, D)
    b12 = graded_basis_B(arr, g1 * g2, D)
    rep = products_report(b1, b2, b12, D, D - 2 * arr.mu)
    rep["target"] = g1 * g2
    return rep


# ---------------------------------------------------------------------------
# the cuspidal curve


class CuspSpace:
    """A subspace of Q[t] through degree D, canonical top-reduced basis."""

    def __init__(self, basis: Sequence[UPoly], D: int):
        vecs = canonical_basis({i: c for i, c in enumerate(p.c) if c} for p in basis if p)
        self.basis = tuple(UPoly(v.get(i, 0) for i in range(max(v) + 1)) for v in vecs)
        self.D = D

    def piece(self, k: int) -> list[UPoly]:
        return [p for p in self.basis if p.degree() <= k]

    def hilbert(self, k: int) -> int:
        return len(self.piece(k))

    def degree_dims(self) -> list[int]:
        dims = [0] * (self.D + 1)
        for p in self.basis:
            dims[p.degree()] += 1
        return dims

    def contains(self, f: UPoly) -> bool:
        if f.degree() > self.D:
            raise ValueError("degree beyond the computed bound")
        lead = {p.degree(): p for p in self.basis}
        rem = list(f.c)
        for i in range(len(rem) - 1, -1, -1):
            if not rem[i]:
                continue
            b = lead.get(i)
            if b is None:
                return False
            c = rem[i]
            for j, v in enumerate(b.c):
                rem[j] -= c * v
        return True

    def __eq__(self, other):
        return isinstance(other, CuspSpace) and (self.D, self.basis) == (other.D, other.basis)


def cusp_module_basis(m: int, gamma: Sequence, D: int) -> CuspSpace:
    """P_gamma: odd Taylor coefficients at 0 equal gamma times the even ones."""
    if m < 1 or len(gamma) != m:
        raise ValueError("cusp parameter needs m >= 1 and exactly m coefficients")
    gamma = [Q(g) for g in gamma]
    rows = []
    for p in range(m):
        row = {}
        if 2 * p + 1 <= D:
            row[2 * p + 1] = Fraction(1)
        for j in range(p + 1):
            if gamma[j] and 2 * (p - j) <= D:
                row[2 * (p - j)] = row.get(2 * (p - j), 0) - gamma[j]
        rows.append(row)
    basis = [UPoly(v.get(i, 0) for i in range(max(v) + 1)) for v in top_nullspace(rows, D + 1)]
    return CuspSpace(basis, D)


def cusp_picard_check(m: int, g1: Sequence, g2: Sequence, D: int) -> dict:
    """P_g1 * P_g2 lies in and spans P_(g1 o g2) through degree D."""
    p1 = cusp_module_basis(m, g1, D)
    p2 = cusp_module_basis(m, g2, D)
    g12 = group_op([Q(x) for x in g1], [Q(x) for x in g2])
    p12 = cusp_module_basis(m, g12, D)
    prods = []
    outside = []
    for f in p1.basis:
        for g in p2.piece(D - f.degree()):
            p = f * g
            if not p12.contains(p):
                outside.append((f, g))
            prods.append(p)
    spanned = CuspSpace(prods, D)
    span_degree = D
    while span_degree >= 0 and not all(spanned.contains(b) for b in p12.piece(span_degree)):
        span_degree -= 1
    return {
        "membership": not outside,
        "span_degree": span_degree,
        "target": g12,
        "ok": not outside and span_degree >= D - 2 * m,
    }
