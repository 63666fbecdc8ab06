"""Exact scalars, polynomials, rational functions and linear algebra over Q.

Everything is built on :class:`fractions.Fraction`.  Values are immutable
after construction; no operation mutates its inputs.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence

__all__ = [
    "NEG_INF",
    "Q",
    "Gaussian",
    "Poly",
    "UPoly",
    "RatFunc",
    "parse_rational",
    "parse_poly",
    "parse_upoly",
    "mono_key",
    "monomials_of_degree",
    "monomials_upto",
    "rref",
    "nullspace",
    "top_nullspace",
    "canonical_basis",
    "Expander",
    "binom",
    "lcm_upoly",
]

# Degree of the zero polynomial.  Compares below every integer.
NEG_INF = -math.inf


def Q(x) -> Fraction:
    """Coerce ints, Fractions and ``p/q`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return parse_rational(x)
    return Fraction(x)


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
        raise ValueError(f"not a rational literal: {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {text!r}") from None


def binom(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0


# ---------------------------------------------------------------------------
# Gaussian rationals


class Gaussian:
    """An element re + i*im of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Q(re)
        self.im = Q(im)

    @classmethod
    def _c(cls, x) -> "Gaussian":
        return x if isinstance(x, Gaussian) else cls(x)

    def __add__(self, other):
        o = Gaussian._c(other)
        return Gaussian(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-Gaussian._c(other))

    def __rsub__(self, other):
        return Gaussian._c(other) - self

    def __mul__(self, other):
        o = Gaussian._c(other)
        return Gaussian(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self) -> "Gaussian":
        return Gaussian(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        o = Gaussian._c(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("Gaussian division by zero")
        p = self * o.conj()
        return Gaussian(p.re / n, p.im / n)

    def __rtruediv__(self, other):
        return Gaussian._c(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return Gaussian(1) / (self ** (-e))
        out = Gaussian(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Gaussian)):
            o = Gaussian._c(other)
            return self.re == o.re and self.im == o.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re or self.im)

    def __repr__(self):
        if not self.im:
            return str(self.re)
        mag = abs(self.im)
        imag = "i" if mag == 1 else f"{mag}*i"
        if not self.re:
            return imag if self.im > 0 else f"-{imag}"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{imag}"


# ---------------------------------------------------------------------------
# Text grammar shared by the bivariate and univariate parsers


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot tokenize {text!r} at {pos}")
        num, name, sym = m.groups()
        if num is not None:
            out.append(("num", num))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("sym", sym))
        pos = m.end()
    return out


class _Parser:
    # expr   := ['+'|'-'] term (('+'|'-') term)*
    # term   := factor (['*'|'/'] factor)*      ('/' only by a constant)
    # factor := atom ['^' int]
    # atom   := int | name | '(' expr ')' | '-' factor

    def __init__(self, text: str, names: Sequence[str]):
        self.toks = _tokenize(text)
        self.i = 0
        self.names = list(names)
        self.n = len(names)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", "")

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, sym):
        tok = self.take()
        if tok != ("sym", sym):
            raise ValueError(f"expected {sym!r}, got {tok[1]!r}")

    def parse(self) -> dict:
        if not self.toks:
            raise ValueError("empty polynomial")
        val = self.expr()
        if self.peek()[0] != "end":
            raise ValueError(f"unexpected token {self.peek()[1]!r}")
        return val

    def expr(self) -> dict:
        sign = 1
        if self.peek() in (("sym", "+"), ("sym", "-")):
            sign = -1 if self.take()[1] == "-" else 1
        acc = _dscale(self.term(), sign)
        while self.peek() in (("sym", "+"), ("sym", "-")):
            s = -1 if self.take()[1] == "-" else 1
            acc = _dadd(acc, _dscale(self.term(), s))
        return acc

    def starts_atom(self):
        kind, val = self.peek()
        return kind in ("num", "name") or (kind == "sym" and val == "(")

    def term(self) -> dict:
        acc = self.factor()
        while True:
            tok = self.peek()
            if tok == ("sym", "*"):
                self.take()
                acc = _dmul(acc, self.factor(), self.n)
            elif tok == ("sym", "/"):
                self.take()
                div = self.factor()
                if set(div) - {(0,) * self.n} or not div:
                    raise ValueError("division only by nonzero constants")
                acc = _dscale(acc, 1 / div[(0,) * self.n])
            elif self.starts_atom():
                acc = _dmul(acc, self.factor(), self.n)
            else:
                return acc

    def factor(self) -> dict:
        base = self.atom()
        if self.peek() == ("sym", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ValueError("exponent must be a nonnegative integer")
            out = {(0,) * self.n: Fraction(1)}
            for _ in range(int(val)):
                out = _dmul(out, base, self.n)
            return out
        return base

    def atom(self) -> dict:
        kind, val = self.take()
        if kind == "num":
            return {(0,) * self.n: Fraction(int(val))}
        if kind == "name":
            if val not in self.names:
                raise ValueError(f"unknown variable {val!r}; expected one of {self.names}")
            e = [0] * self.n
            e[self.names.index(val)] = 1
            return {tuple(e): Fraction(1)}
        if val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if val == "-":
            return _dscale(self.factor(), -1)
        raise ValueError(f"unexpected symbol {val!r}")


def _dadd(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, 0) + v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _dscale(a: dict, c) -> dict:
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def _dmul(a: dict, b: dict, n: int) -> dict:
    out: dict = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(ka[j] + kb[j] for j in range(n))
            s = out.get(k, 0) + va * vb
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


# ---------------------------------------------------------------------------
# Bivariate polynomials


def mono_key(e: tuple[int, int]) -> tuple[int, int]:
    """Graded-lex sort key with z1 > z2: degree first, then the z1 exponent."""
    return (e[0] + e[1], e[0])


def monomials_of_degree(d: int) -> list[tuple[int, int]]:
    """Degree-d exponents in ascending graded-lex order (z2^d first)."""
    return [(a, d - a) for a in range(d + 1)]


def monomials_upto(D: int) -> list[tuple[int, int]]:
    out = []
    for d in range(D + 1):
        out.extend(monomials_of_degree(d))
    return out


class Poly:
    """Sparse polynomial in two variables with rational coefficients.

    The variables print as ``z1, z2`` by default; the same class is used for
    polynomials in ``x1, x2`` and in ``d1, d2`` (the symbols of partial
    derivatives), with names chosen at print time.
    """

    __slots__ = ("terms", "_hash")
    NAMES = ("z1", "z2")

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        clean = {}
        if terms:
            for e, c in terms.items():
                c = Q(c)
                if c:
                    clean[(int(e[0]), int(e[1]))] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Poly":
        p = object.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    # -- constructors -------------------------------------------------------
    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(0, 0): c})

    @classmethod
    def var(cls, i: int) -> "Poly":
        return cls({(1, 0) if i == 1 else (0, 1): 1})

    @classmethod
    def mono(cls, e: tuple[int, int], c=1) -> "Poly":
        return cls({tuple(e): c})

    @classmethod
    def parse(cls, text: str, names: Sequence[str] = NAMES) -> "Poly":
        return parse_poly(text, names)

    @classmethod
    def coerce(cls, x) -> "Poly":
        if isinstance(x, Poly):
            return x
        return cls.const(x)

    # -- structure ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self):
        """Total degree; ``NEG_INF`` for the zero polynomial."""
        if not self.terms:
            return NEG_INF
        return max(a + b for a, b in self.terms)

    def min_degree(self):
        if not self.terms:
            return math.inf
        return min(a + b for a, b in self.terms)

    def coeff(self, e: tuple[int, int]) -> Fraction:
        return self.terms.get(tuple(e), Fraction(0))

    def leading_monomial(self) -> tuple[int, int]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=mono_key)

    def leading_coeff(self) -> Fraction:
        return self.terms[self.leading_monomial()]

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly._raw({e: c for e, c in self.terms.items() if e[0] + e[1] == d})

    def top_form(self) -> "Poly":
        return self.homogeneous_part(self.degree()) if self.terms else self

    def is_homogeneous(self) -> bool:
        return len({a + b for a, b in self.terms}) <= 1

    def truncate(self, D) -> "Poly":
        """Drop all terms of total degree greater than D."""
        return Poly._raw({e: c for e, c in self.terms.items() if e[0] + e[1] <= D})

    def is_constant(self) -> bool:
        return all(e == (0, 0) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.coeff((0, 0))

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                other = Poly.const(other)
            else:
                return NotImplemented
        return Poly._raw(_dadd(self.terms, other.terms))

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                other = Poly.const(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Poly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, Poly):
            return Poly._raw(_dmul(self.terms, other.terms, 2))
        if isinstance(other, (int, Fraction)):
            return Poly._raw(_dscale(self.terms, other))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, (int, Fraction)):
            return Poly._raw(_dscale(self.terms, Fraction(1) / Fraction(c)))
        return NotImplemented

    def mul_trunc(self, other: "Poly", D) -> "Poly":
        """Product with terms of degree > D discarded."""
        out: dict = {}
        for (a1, b1), c1 in self.terms.items():
            if a1 + b1 > D:
                continue
            for (a2, b2), c2 in other.terms.items():
                if a1 + b1 + a2 + b2 > D:
                    continue
                k = (a1 + a2, b1 + b2)
                s = out.get(k, 0) + c1 * c2
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return Poly._raw(out)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = Poly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def diff(self, i: int) -> "Poly":
        """Partial derivative in variable i (1 or 2)."""
        out = {}
        for (a, b), c in self.terms.items():
            if i == 1 and a:
                out[(a - 1, b)] = c * a
            elif i == 2 and b:
                out[(a, b - 1)] = c * b
        return Poly._raw(out)

    def diff_multi(self, k: tuple[int, int]) -> "Poly":
        out = {}
        for (a, b), c in self.terms.items():
            if a >= k[0] and b >= k[1]:
                f = math.perm(a, k[0]) * math.perm(b, k[1])
                out[(a - k[0], b - k[1])] = c * f
        return Poly._raw(out)

    def __call__(self, x, y):
        return self.subs(x, y)

    def subs(self, x, y):
        """Substitute z1 -> x, z2 -> y (scalars or polynomials of any ring)."""
        if isinstance(x, (int, Fraction)) and isinstance(y, (int, Fraction)):
            x, y = Q(x), Q(y)
            return sum((c * x**a * y**b for (a, b), c in self.terms.items()), Fraction(0))
        if isinstance(x, Poly) and isinstance(y, Poly):
            return self._subs_poly(x, y)
        total = 0
        for (a, b), c in self.terms.items():
            total = total + (x**a) * (y**b) * c
        return total

    def _subs_poly(self, x: "Poly", y: "Poly") -> "Poly":
        xp = [Poly.const(1)]
        yp = [Poly.const(1)]
        for (a, b) in self.terms:
            while len(xp) <= a:
                xp.append(xp[-1] * x)
            while len(yp) <= b:
                yp.append(yp[-1] * y)
        out = Poly()
        for (a, b), c in self.terms.items():
            out = out + xp[a] * yp[b] * c
        return out

    def divmod_exact(self, d: "Poly") -> tuple[bool, "Poly"]:
        """Exact division by d.

        Returns (True, q) with self = d*q, or (False, partial quotient).
        The lex leading term of d must divide the current leading term at
        every step; for a single divisor this decides divisibility.
        """
        if not d.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        lead = max(d.terms)
        lc = d.terms[lead]
        rem = dict(self.terms)
        quot: dict = {}
        while rem:
            m = max(rem)
            if m[0] < lead[0] or m[1] < lead[1]:
                return False, Poly._raw(quot)
            qe = (m[0] - lead[0], m[1] - lead[1])
            qc = rem[m] / lc
            quot[qe] = qc
            for e, c in d.terms.items():
                k = (e[0] + qe[0], e[1] + qe[1])
                s = rem.get(k, 0) - c * qc
                if s:
                    rem[k] = s
                else:
                    rem.pop(k, None)
        return True, Poly._raw(quot)

    def divides(self, f: "Poly") -> bool:
        return f.divmod_exact(self)[0]

    def rename(self, names) -> "NamedPoly":
        return NamedPoly(self, names)

    # -- comparison / printing -----------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Poly.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def sorted_terms(self) -> list[tuple[tuple[int, int], Fraction]]:
        return sorted(self.terms.items(), key=lambda t: mono_key(t[0]), reverse=True)

    def to_str(self, names: Sequence[str] = NAMES) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for s, body in parts[1:]:
            out += f" {s} {body}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Poly({self.to_str()!r})"


class NamedPoly:
    """Printing wrapper: a polynomial with explicit variable names."""

    __slots__ = ("poly", "names")

    def __init__(self, poly: Poly, names):
        self.poly = poly
        self.names = tuple(names)

    def __str__(self):
        return self.poly.to_str(self.names)


def parse_poly(text: str, names: Sequence[str] = Poly.NAMES) -> Poly:
    """Parse ``3/2*z1^2*z2 - z2^3 + 1`` style text."""
    if len(names) != 2:
        raise ValueError("bivariate parser needs exactly two names")
    return Poly(_Parser(text, names).parse())


# ---------------------------------------------------------------------------
# Univariate polynomials and rational functions


class UPoly:
    """Dense univariate polynomial over Q, coefficients low to high."""

    __slots__ = ("c",)
    NAME = "t"

    def __init__(self, coeffs: Iterable = ()):
        cs = [Q(x) for x in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.c = tuple(cs)

    @classmethod
    def const(cls, x) -> "UPoly":
        return cls([x])

    @classmethod
    def t(cls) -> "UPoly":
        return cls([0, 1])

    @classmethod
    def mono(cls, n: int, c=1) -> "UPoly":
        return cls([0] * n + [c])

    @classmethod
    def coerce(cls, x) -> "UPoly":
        return x if isinstance(x, UPoly) else cls.const(x)

    def degree(self):
        return len(self.c) - 1 if self.c else NEG_INF

    def __bool__(self):
        return bool(self.c)

    def is_zero(self):
        return not self.c

    def is_constant(self):
        return len(self.c) <= 1

    def lc(self) -> Fraction:
        return self.c[-1]

    def __getitem__(self, i: int) -> Fraction:
        return self.c[i] if 0 <= i < len(self.c) else Fraction(0)

    def __add__(self, other):
        if isinstance(other, RatFunc):
            return NotImplemented
        o = UPoly.coerce(other)
        n = max(len(self.c), len(o.c))
        return UPoly(self[i] + o[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return UPoly(-x for x in self.c)

    def __sub__(self, other):
        if isinstance(other, RatFunc):
            return NotImplemented
        return self + (-UPoly.coerce(other))

    def __rsub__(self, other):
        return UPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, RatFunc):
            return NotImplemented
        if isinstance(other, (int, Fraction)):
            return UPoly(x * other for x in self.c)
        o = UPoly.coerce(other)
        if not self.c or not o.c:
            return UPoly()
        out = [Fraction(0)] * (len(self.c) + len(o.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    out[i + j] += a * b
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = UPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return UPoly(x / other for x in self.c)
        return RatFunc(self, other)

    def __rtruediv__(self, other):
        return RatFunc(other, self)

    def divmod(self, d: "UPoly") -> tuple["UPoly", "UPoly"]:
        if not d.c:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        q = [Fraction(0)] * max(len(r) - len(d.c) + 1, 0)
        ld = d.c[-1]
        for i in range(len(r) - len(d.c), -1, -1):
            f = r[i + len(d.c) - 1] / ld
            q[i] = f
            if f:
                for j, b in enumerate(d.c):
                    r[i + j] -= f * b
        return UPoly(q), UPoly(r[: len(d.c) - 1])

    def monic(self) -> "UPoly":
        return self / self.lc() if self.c else self

    def gcd(self, other: "UPoly") -> "UPoly":
        a, b = self, UPoly.coerce(other)
        while b.c:
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def deriv(self) -> "UPoly":
        return UPoly(i * x for i, x in enumerate(self.c) if i)

    def __call__(self, x):
        out = Fraction(0) if isinstance(x, (int, Fraction)) else 0
        for a in reversed(self.c):
            out = out * x + a
        return out

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return other == self
        if isinstance(other, (UPoly, int, Fraction)):
            return self.c == UPoly.coerce(other).c
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def to_str(self, name: str = NAME) -> str:
        if not self.c:
            return "0"
        out = []
        for i in range(len(self.c) - 1, -1, -1):
            a = self.c[i]
            if not a:
                continue
            mono = "" if i == 0 else (name if i == 1 else f"{name}^{i}")
            mag = abs(a)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            out.append(("-" if a < 0 else "+", body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"UPoly({self.to_str()!r})"


def parse_upoly(text: str, name: str = UPoly.NAME) -> UPoly:
    d = _Parser(text, [name]).parse()
    if not d:
        return UPoly()
    n = max(e[0] for e in d)
    return UPoly(d.get((i,), 0) for i in range(n + 1))


class RatFunc:
    """Reduced quotient of univariate polynomials, monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = UPoly.coerce(num)
        den = UPoly.coerce(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            self.num, self.den = UPoly(), UPoly.const(1)
            return
        g = num.gcd(den)
        if g.degree() > 0:
            num = num.divmod(g)[0]
            den = den.divmod(g)[0]
        lc = den.lc()
        self.num = num / lc
        self.den = den / lc

    @classmethod
    def coerce(cls, x) -> "RatFunc":
        return x if isinstance(x, RatFunc) else cls(x)

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def as_upoly(self) -> UPoly:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.num

    def __bool__(self):
        return bool(self.num)

    def is_zero(self):
        return not self.num

    def __add__(self, other):
        o = RatFunc.coerce(other)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RatFunc.coerce(other))

    def __rsub__(self, other):
        return RatFunc.coerce(other) - self

    def __mul__(self, other):
        o = RatFunc.coerce(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RatFunc.coerce(other)
        if not o.num:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RatFunc(1) / (self ** (-n))
        return RatFunc(self.num**n, self.den**n)

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def __eq__(self, other):
        if isinstance(other, (RatFunc, UPoly, int, Fraction)):
            o = RatFunc.coerce(other)
            return self.num == o.num and self.den == o.den
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def to_str(self, name: str = UPoly.NAME) -> str:
        if self.is_polynomial():
            return self.num.to_str(name)
        return f"({self.num.to_str(name)})/({self.den.to_str(name)})"

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"RatFunc({self.to_str()!r})"


# ---------------------------------------------------------------------------
# Linear algebra over Q.  Vectors and rows are sparse dicts {column: value}.


def rref(rows: Iterable[Mapping[int, Fraction]]) -> tuple[list[dict], list[int]]:
    """Reduced row echelon form; pivots at the smallest column of each row.

    Returns (rows, pivots) with rows sorted by pivot, each normalized to
    leading coefficient 1 and zero in every other pivot column.
    """
    basis: dict[int, dict] = {}
    for row in rows:
        r = {k: Q(v) for k, v in row.items() if v}
        for p in [p for p in r if p in basis]:
            f = r.get(p)
            if f:
                _axpy(r, basis[p], -f)
        if not r:
            continue
        p = min(r)
        inv = 1 / r[p]
        r = {k: v * inv for k, v in r.items()}
        for other in basis.values():
            f = other.get(p)
            if f:
                _axpy(other, r, -f)
        basis[p] = r
    pivots = sorted(basis)
    return [basis[p] for p in pivots], pivots


def _axpy(y: dict, x: Mapping[int, Fraction], a) -> None:
    """In place: y += a*x, dropping zeros."""
    if not a:
        return
    for k, v in x.items():
        s = y.get(k, 0) + a * v
        if s:
            y[k] = s
        else:
            y.pop(k, None)


def top_nullspace(rows: Iterable[Mapping[int, Fraction]], ncols: int) -> list[dict]:
    """Nullspace basis indexed by free columns, in increasing order.

    The vector attached to free column j has coefficient 1 at j, zero at the
    other free columns and is supported on columns <= j.  With columns listed
    in ascending monomial order this is the canonical top-reduced basis of
    the solution space.
    """
    red, pivots = rref(rows)
    pivset = set(pivots)
    out = []
    by_col: dict[int, list[tuple[int, Fraction]]] = {}
    for r, p in zip(red, pivots):
        for k, v in r.items():
            if k != p:
                by_col.setdefault(k, []).append((p, v))
    for j in range(ncols):
        if j in pivset:
            continue
        vec = {j: Fraction(1)}
        for p, v in by_col.get(j, ()):
            vec[p] = -v
        out.append(vec)
    return out


def nullspace(matrix: Sequence[Sequence] | Sequence[Mapping[int, Fraction]], ncols: int | None = None) -> list[list[Fraction]]:
    """Reduced-echelon nullspace basis of a dense or sparse matrix.

    Pivots of the returned basis are the smallest nonzero columns, each
    vector normalized to leading coefficient 1.
    """
    rows, n = _as_sparse(matrix, ncols)
    kern = top_nullspace(rows, n)
    red, _ = rref(kern)
    return [[r.get(j, Fraction(0)) for j in range(n)] for r in red]


def _as_sparse(matrix, ncols):
    rows = []
    n = ncols
    for row in matrix:
        if isinstance(row, Mapping):
            rows.append(dict(row))
        else:
            row = list(row)
            n = len(row) if n is None else n
            rows.append({j: Q(v) for j, v in enumerate(row) if v})
    if n is None:
        n = 0
    return rows, n


def canonical_basis(vectors: Iterable[Mapping[int, Fraction]]) -> list[dict]:
    """Top-reduced basis of a span.

    Each returned vector has leading (largest) column with coefficient 1 and
    is zero at the leading columns of the others; sorted by leading column.
    This form is unique for a given subspace.
    """
    flipped = [{-k: v for k, v in vec.items()} for vec in vectors]
    red, _ = rref(flipped)
    out = [{-k: v for k, v in r.items()} for r in red]
    out.sort(key=lambda v: max(v))
    return out


class Expander:
    """Coordinates of vectors with respect to a fixed independent family."""

    def __init__(self, vectors: Sequence[Mapping[int, Fraction]]):
        self.n = len(vectors)
        # reduced[lead] = (vector, combination)
        self.reduced: dict[int, tuple[dict, dict]] = {}
        for idx, v in enumerate(vectors):
            vec = {k: Q(c) for k, c in v.items() if c}
            comb = {idx: Fraction(1)}
            while vec:
                lead = max(vec)
                if lead not in self.reduced:
                    inv = 1 / vec[lead]
                    vec = {k: c * inv for k, c in vec.items()}
                    comb = {k: c * inv for k, c in comb.items()}
                    self.reduced[lead] = (vec, comb)
                    break
                rv, rc = self.reduced[lead]
                f = -vec[lead]
                _axpy(vec, rv, f)
                _axpy(comb, rc, f)
            else:
                raise ValueError(f"vector {idx} is linearly dependent on earlier ones")

    def expand(self, v: Mapping[int, Fraction]) -> dict[int, Fraction] | None:
        """Coefficients c with v = sum c_i vectors[i], or None if not in span."""
        vec = {k: Q(c) for k, c in v.items() if c}
        out: dict[int, Fraction] = {}
        while vec:
            lead = max(vec)
            if lead not in self.reduced:
                return None
            rv, rc = self.reduced[lead]
            f = vec[lead]
            _axpy(vec, rv, -f)
            _axpy(out, rc, f)
        return out


def lcm_upoly(polys: Iterable[UPoly]) -> UPoly:
    return reduce(lambda a, b: (a * b).divmod(a.gcd(b))[0].monic(), polys, UPoly.const(1))

