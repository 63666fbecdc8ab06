"""Differential operators with rational coefficients in x and Berest's formula.

Coefficients are quotients N(x) / prod L_j(x)^e_j with each L_j affine
linear.  This is all the Calogero-Moser potentials ever produce, it keeps
the representation canonical (the L_j are irreducible), and it makes exact
cancellation a matter of linear-form divisibility.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Mapping, Sequence

from .arrangement import (
    WeightedArrangement,
    delta_poly,
    is_baker_akhiezer,
    line_form,
    omega,
)
from .kernel import Poly, Q
from .quasiinv import GradedSubspace

__all__ = [
    "XFrac",
    "ExpElement",
    "DiffOpX",
    "apply_diffop",
    "cm_hamiltonian",
    "check_admissible",
    "berest_psi",
    "spectral_basis",
    "spectral_basis_all",
    "spectral_space",
    "eigen_check",
    "specialize",
    "shifted_form",
]

X_NAMES = ("x1", "x2")


def _form_key(L: Poly) -> tuple[tuple[Fraction, Fraction, Fraction], Fraction]:
    """Normalize an affine form so its first nonzero linear coefficient is 1."""
    if L.degree() != 1:
        raise ValueError(f"{L.to_str(X_NAMES)} is not an affine linear form")
    c1, c2, c0 = L.coeff((1, 0)), L.coeff((0, 1)), L.coeff((0, 0))
    lead = c1 if c1 else c2
    return (c1 / lead, c2 / lead, c0 / lead), lead


def _form_poly(key) -> Poly:
    c1, c2, c0 = key
    return Poly({(1, 0): c1, (0, 1): c2, (0, 0): c0})


class XFrac:
    """A rational function of x whose denominator is a product of affine forms."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Mapping | None = None, _reduced: bool = False):
        self.num = num
        self.den = dict(den or {})
        if not _reduced:
            self._reduce()

    def _reduce(self):
        if not self.num:
            self.den = {}
            return
        for key in list(self.den):
            L = _form_poly(key)
            e = self.den[key]
            while e:
                ok, q = self.num.divmod_exact(L)
                if not ok:
                    break
                self.num, e = q, e - 1
            if e:
                self.den[key] = e
            else:
                del self.den[key]

    @classmethod
    def poly(cls, p: Poly) -> "XFrac":
        return cls(p, {}, _reduced=True)

    @classmethod
    def const(cls, c) -> "XFrac":
        return cls(Poly.const(c), {}, _reduced=True)

    @classmethod
    def inv_form(cls, L: Poly, e: int = 1, c=1) -> "XFrac":
        """c / L^e for an affine form L."""
        key, lead = _form_key(L)
        return cls(Poly.const(Q(c) / lead**e), {key: e}, _reduced=True)

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return not self.den

    def is_constant(self) -> bool:
        return not self.den and self.num.is_constant()

    def _common(self, other: "XFrac"):
        den = dict(self.den)
        for k, e in other.den.items():
            den[k] = max(den.get(k, 0), e)
        a, b = self.num, other.num
        for k, e in den.items():
            L = _form_poly(k)
            if e - self.den.get(k, 0):
                a = a * L ** (e - self.den.get(k, 0))
            if e - other.den.get(k, 0):
                b = b * L ** (e - other.den.get(k, 0))
        return a, b, den

    def __add__(self, other):
        other = XFrac.coerce(other)
        if not other.num:
            return self
        if not self.num:
            return other
        a, b, den = self._common(other)
        return XFrac(a + b, den)

    __radd__ = __add__

    def __neg__(self):
        return XFrac(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-XFrac.coerce(other))

    def __rsub__(self, other):
        return XFrac.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return XFrac(self.num * other, self.den, _reduced=True) if other else XFrac.const(0)
        other = XFrac.coerce(other)
        den = dict(self.den)
        for k, e in other.den.items():
            den[k] = den.get(k, 0) + e
        return XFrac(self.num * other.num, den)

    __rmul__ = __mul__

    @classmethod
    def coerce(cls, x) -> "XFrac":
        if isinstance(x, XFrac):
            return x
        if isinstance(x, Poly):
            return cls.poly(x)
        return cls.const(x)

    def diff(self, i: int) -> "XFrac":
        """Partial derivative in x_i by the quotient rule."""
        idx = 0 if i == 1 else 1
        moving = [k for k in self.den if k[idx]]
        if not moving:
            return XFrac(self.num.diff(i), self.den, _reduced=True) if self.den else XFrac.poly(self.num.diff(i))
        forms = {k: _form_poly(k) for k in moving}
        prod_all = Poly.const(1)
        for k in moving:
            prod_all = prod_all * forms[k]
        num = self.num.diff(i) * prod_all
        for k in moving:
            others = Poly.const(1)
            for k2 in moving:
                if k2 != k:
                    others = others * forms[k2]
            num = num - self.num * others * (self.den[k] * k[idx])
        den = dict(self.den)
        for k in moving:
            den[k] += 1
        return XFrac(num, den)

    def at(self, x1, x2) -> Fraction:
        val = self.num.subs(Q(x1), Q(x2))
        for k, e in self.den.items():
            v = _form_poly(k).subs(Q(x1), Q(x2))
            if v == 0:
                raise ZeroDivisionError("coefficient has a pole at the evaluation point")
            val = val / v**e
        return val

    def taylor(self, D: int) -> Poly:
        """Taylor polynomial at x = 0 through total degree D."""
        out = self.num.truncate(D)
        for k, e in self.den.items():
            c1, c2, c0 = k
            if c0 == 0:
                raise ZeroDivisionError("coefficient has a pole at the origin")
            # 1/L = (1/c0) * sum (-(c1 x1 + c2 x2)/c0)^n
            u = Poly({(1, 0): -c1 / c0, (0, 1): -c2 / c0})
            inv = Poly.const(1)
            term = Poly.const(1)
            for _ in range(D):
                term = term.mul_trunc(u, D)
                inv = inv + term
            inv = inv / c0
            for _ in range(e):
                out = out.mul_trunc(inv, D)
        return out

    def denominator_forms(self) -> list[Poly]:
        return [_form_poly(k) for k in self.den]

    def __eq__(self, other):
        if not isinstance(other, XFrac):
            try:
                other = XFrac.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, frozenset(self.den.items())))

    def __str__(self):
        num = self.num.to_str(X_NAMES)
        if not self.den:
            return num
        parts = []
        for k, e in sorted(self.den.items()):
            f = _form_poly(k).to_str(X_NAMES)
            parts.append(f"({f})" + (f"^{e}" if e > 1 else ""))
        return f"({num})/(" + "*".join(parts) + ")"

    __repr__ = __str__


class ExpElement:
    """Theta(x, z) * exp(x1 z1 + x2 z2), Theta polynomial in z."""

    __slots__ = ("theta",)

    def __init__(self, theta: Mapping[tuple[int, int], XFrac]):
        self.theta = {tuple(e): XFrac.coerce(c) for e, c in theta.items() if c}

    @classmethod
    def exp(cls) -> "ExpElement":
        return cls({(0, 0): XFrac.const(1)})

    def d(self, i: int) -> "ExpElement":
        """d/dx_i acting on Theta * exp(x z): Theta -> d_i Theta + z_i Theta."""
        out: dict = {}
        for e, c in self.theta.items():
            dc = c.diff(i)
            if dc:
                out[e] = out.get(e, XFrac.const(0)) + dc
            shifted = (e[0] + 1, e[1]) if i == 1 else (e[0], e[1] + 1)
            out[shifted] = out.get(shifted, XFrac.const(0)) + c
        return ExpElement(out)

    def __add__(self, other: "ExpElement") -> "ExpElement":
        out = dict(self.theta)
        for e, c in other.theta.items():
            out[e] = out.get(e, XFrac.const(0)) + c
        return ExpElement(out)

    def __neg__(self):
        return ExpElement({e: -c for e, c in self.theta.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ExpElement":
        """Multiply by a function of x (an XFrac or scalar)."""
        c = XFrac.coerce(c)
        return ExpElement({e: v * c for e, v in self.theta.items()})

    def times_z(self, f: Poly) -> "ExpElement":
        """Multiply by a polynomial in z."""
        out: dict = {}
        for e, c in self.theta.items():
            for g, v in f.terms.items():
                k = (e[0] + g[0], e[1] + g[1])
                out[k] = out.get(k, XFrac.const(0)) + c * v
        return ExpElement(out)

    def z_degree(self):
        return max((a + b for a, b in self.theta), default=-1)

    def top_form(self) -> dict:
        n = self.z_degree()
        return {e: c for e, c in self.theta.items() if e[0] + e[1] == n}

    def is_zero(self) -> bool:
        return not self.theta

    def denominator_forms(self) -> set:
        out = set()
        for c in self.theta.values():
            out.update(c.den)
        return out

    def __eq__(self, other):
        return isinstance(other, ExpElement) and self.theta == other.theta

    def __str__(self):
        if not self.theta:
            return "0"
        parts = []
        for e, c in sorted(self.theta.items(), key=lambda t: (t[0][0] + t[0][1], t[0][0]), reverse=True):
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(("z1", "z2"), e) if k)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return "(" + " + ".join(parts) + ")*exp(x.z)"


class DiffOpX:
    """Finite sum of a_k(x) d^k with XFrac coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object]):
        self.terms = {tuple(k): XFrac.coerce(v) for k, v in terms.items() if XFrac.coerce(v)}

    @classmethod
    def laplacian(cls) -> "DiffOpX":
        return cls({(2, 0): 1, (0, 2): 1})

    def __add__(self, other: "DiffOpX") -> "DiffOpX":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, XFrac.const(0)) + v
        return DiffOpX(out)

    def __neg__(self):
        return DiffOpX({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "DiffOpX") -> "DiffOpX":
        """Composition, by the Leibniz rule."""
        out: dict = {}
        for k, a in self.terms.items():
            for l, b in other.terms.items():
                for j1 in range(k[0] + 1):
                    for j2 in range(k[1] + 1):
                        db = b
                        for _ in range(j1):
                            db = db.diff(1)
                        for _ in range(j2):
                            db = db.diff(2)
                        if not db:
                            continue
                        c = a * db * (comb(k[0], j1) * comb(k[1], j2))
                        key = (k[0] - j1 + l[0], k[1] - j2 + l[1])
                        out[key] = out.get(key, XFrac.const(0)) + c
        return DiffOpX(out)

    def order(self) -> int:
        return max((a + b for a, b in self.terms), default=-1)

    def __eq__(self, other):
        return isinstance(other, DiffOpX) and self.terms == other.terms

    def __str__(self):
        parts = []
        for k, v in sorted(self.terms.items(), reverse=True):
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(("d1", "d2"), k) if e)
            parts.append(f"{v}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts) if parts else "0"


def apply_diffop(P: DiffOpX, e: ExpElement) -> ExpElement:
    cache: dict = {(0, 0): e}

    def deriv(k):
        if k not in cache:
            if k[0]:
                cache[k] = deriv((k[0] - 1, k[1])).d(1)
            else:
                cache[k] = deriv((k[0], k[1] - 1)).d(2)
        return cache[k]

    out = ExpElement({})
    for k, a in P.terms.items():
        out = out + deriv(k).scale(a)
    return out


def shifted_form(d, xi: Sequence) -> Poly:
    """l_alpha(x - xi) as a polynomial in x."""
    l = line_form(d)
    return l - Poly.const(l.subs(Q(xi[0]), Q(xi[1])))


def check_admissible(arr: WeightedArrangement, xi: Sequence, spectral: bool = False) -> None:
    xi = (Q(xi[0]), Q(xi[1]))
    if xi[0] ** 2 + xi[1] ** 2 == 0:
        raise ValueError("xi must not be isotropic")
    for d, m in arr.active():
        if line_form(d).subs(*xi) == 0:
            raise ValueError(f"xi = {xi} lies on the line {d}")
        if spectral and d.a * xi[0] + d.b * xi[1] == 0:
            raise ValueError(f"xi = {xi} is orthogonal to the line {d}")


def cm_hamiltonian(arr: WeightedArrangement, xi: Sequence) -> DiffOpX:
    """Laplacian minus sum mu(mu+1)/l_alpha(x - xi)^2, l_alpha of unit length.

    With the integer form l = -b x1 + a x2 this is mu(mu+1)(a^2+b^2)/l^2.
    """
    check_admissible(arr, xi)
    H = DiffOpX.laplacian()
    pot = XFrac.const(0)
    for d, m in arr.active():
        pot = pot + XFrac.inv_form(shifted_form(d, xi), 2, m * (m + 1) * d.norm2())
    return H - DiffOpX({(0, 0): pot})


def berest_psi(arr: WeightedArrangement, xi: Sequence) -> ExpElement:
    """(2^mu mu!)^(-1) (H - omega)^mu applied to delta(x - xi) exp(x z)."""
    if not is_baker_akhiezer(arr):
        raise ValueError(f"arrangement {arr} is not of Baker-Akhiezer type")
    H = cm_hamiltonian(arr, xi)
    w = omega()
    d0 = Poly.const(1)
    for d, m in arr.active():
        d0 = d0 * shifted_form(d, xi) ** m
    psi = ExpElement({(0, 0): XFrac.poly(d0)})
    for _ in range(arr.mu):
        psi = apply_diffop(H, psi) - psi.times_z(w)
    psi = psi.scale(Fraction(1, 2**arr.mu * factorial(arr.mu)))
    delta = delta_poly(arr)
    top = psi.top_form()
    assert top == {e: XFrac.const(c) for e, c in delta.terms.items()}, "leading z-form is not delta"
    assert eigen_check(H, psi, w), "Psi is not an eigenfunction of H"
    return psi


def eigen_check(P: DiffOpX, psi: ExpElement, f: Poly) -> bool:
    """P acting on psi equals f(z) * psi exactly."""
    return (apply_diffop(P, psi) - psi.times_z(f)).is_zero()


def _taylor_table(psi: ExpElement, D: int) -> dict:
    return {e: c.taylor(D) for e, c in psi.theta.items()}


def spectral_basis(psi: ExpElement, p1: int, p2: int, _table: dict | None = None) -> Poly:
    """d^p Psi / dx^p at x = 0, as a polynomial in z."""
    table = _table if _table is not None else _taylor_table(psi, p1 + p2)
    out: dict = {}
    for e, ser in table.items():
        for (q1, q2), c in ser.terms.items():
            if q1 > p1 or q2 > p2:
                continue
            # d^q c at 0 = q! * c_q
            v = c * factorial(q1) * factorial(q2) * comb(p1, q1) * comb(p2, q2)
            k = (e[0] + p1 - q1, e[1] + p2 - q2)
            out[k] = out.get(k, 0) + v
    return Poly(out)


def spectral_basis_all(psi: ExpElement, N: int) -> dict[tuple[int, int], Poly]:
    """w_p for all |p| <= N."""
    table = _taylor_table(psi, N)
    return {
        (p1, n - p1): spectral_basis(psi, p1, n - p1, table)
        for n in range(N + 1)
        for p1 in range(n, -1, -1)
    }


def spectral_space(arr: WeightedArrangement, xi: Sequence, D: int) -> GradedSubspace:
    """Span of the w_p through degree D (so |p| <= D - mu)."""
    check_admissible(arr, xi, spectral=True)
    psi = berest_psi(arr, xi)
    mu = arr.mu
    if D < mu:
        return GradedSubspace([], D, "W")
    basis = spectral_basis_all(psi, D - mu)
    delta = delta_poly(arr)
    for (p1, p2), w in basis.items():
        assert w.top_form() == delta * Poly.mono((p1, p2)), "unexpected leading form of w_p"
    return GradedSubspace(basis.values(), D, "W")


def specialize(psi: ExpElement, zeta: Sequence, D: int) -> Poly:
    """Theta(x, zeta) exp(x . zeta) as a power series in x through degree D."""
    z1, z2 = Q(zeta[0]), Q(zeta[1])
    theta = Poly()
    for (a, b), c in psi.theta.items():
        theta = theta + c.taylor(D) * (z1**a * z2**b)
    lin = Poly({(1, 0): z1, (0, 1): z2})
    ex = Poly.const(1)
    term = Poly.const(1)
    for n in range(1, D + 1):
        term = term.mul_trunc(lin, D) / n
        ex = ex + term
    return theta.mul_trunc(ex, D)
