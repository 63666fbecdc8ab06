"""Weighted line arrangements, reflections, angular jets and the BA test."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd
from typing import Iterable, Sequence

from .kernel import Gaussian, Poly, UPoly

__all__ = [
    "LineDirection",
    "WeightedArrangement",
    "Jet",
    "preset",
    "PRESETS",
    "line_form",
    "reflect",
    "angular_derivative",
    "jet",
    "jet_split",
    "monomial_jet",
    "e_value",
    "is_baker_akhiezer",
    "ba_residues",
    "delta_poly",
    "omega",
]


class LineDirection:
    """Primitive integer direction (a, b) of a line through the origin.

    Normalized so that a > 0, or a = 0 and b > 0.
    """

    __slots__ = ("a", "b")

    def __init__(self, a: int, b: int):
        a, b = int(a), int(b)
        if a == 0 and b == 0:
            raise ValueError("direction (0, 0) does not span a line")
        g = gcd(a, b)
        a, b = a // g, b // g
        if a < 0 or (a == 0 and b < 0):
            a, b = -a, -b
        self.a, self.b = a, b

    def __iter__(self):
        return iter((self.a, self.b))

    def __eq__(self, other):
        return isinstance(other, LineDirection) and (self.a, self.b) == (other.a, other.b)

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"({self.a},{self.b})"

    def norm2(self) -> int:
        return self.a * self.a + self.b * self.b


@dataclass(frozen=True)
class WeightedArrangement:
    """Ordered lines with nonnegative multiplicities."""

    lines: tuple[tuple[LineDirection, int], ...]

    def __post_init__(self):
        seen = set()
        for d, m in self.lines:
            if not isinstance(d, LineDirection):
                raise TypeError("lines must hold LineDirection values")
            if m < 0:
                raise ValueError(f"negative multiplicity {m} on line {d}")
            if d in seen:
                raise ValueError(f"line {d} listed twice")
            seen.add(d)

    @classmethod
    def of(cls, spec: Iterable[tuple[Sequence[int], int]]) -> "WeightedArrangement":
        return cls(tuple((LineDirection(*d), int(m)) for d, m in spec))

    @classmethod
    def from_json(cls, text: str) -> "WeightedArrangement":
        data = json.loads(text)
        try:
            return cls.of((item["dir"], item.get("mult", 1)) for item in data["lines"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed arrangement JSON: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps({"lines": [{"dir": [d.a, d.b], "mult": m} for d, m in self.lines]})

    @property
    def mu(self) -> int:
        return sum(m for _, m in self.lines)

    @property
    def max_mult(self) -> int:
        return max((m for _, m in self.lines), default=0)

    def active(self) -> list[tuple[LineDirection, int]]:
        """Lines with positive multiplicity, the only ones imposing conditions."""
        return [(d, m) for d, m in self.lines if m > 0]

    def directions(self) -> list[LineDirection]:
        return [d for d, _ in self.lines]

    def mults(self) -> list[int]:
        return [m for _, m in self.lines]

    def with_mults(self, mults: Sequence[int]) -> "WeightedArrangement":
        if len(mults) != len(self.lines):
            raise ValueError("multiplicity vector has the wrong length")
        return WeightedArrangement(tuple((d, int(m)) for (d, _), m in zip(self.lines, mults)))

    def __len__(self):
        return len(self.lines)

    def __iter__(self):
        return iter(self.lines)

    def __str__(self):
        return "{" + ", ".join(f"{d}:{m}" for d, m in self.lines) + "}"


PRESETS = {
    "lambda1": [(1, 0)],
    "lambda2": [(1, 0), (0, 1)],
    "lambda4": [(1, 0), (1, 1), (0, 1), (-1, 1)],
}


def preset(name: str, mult: int | Sequence[int] = 1) -> WeightedArrangement:
    """One of the rational dihedral arrangements, constant or given weights."""
    try:
        dirs = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    mults = [mult] * len(dirs) if isinstance(mult, int) else list(mult)
    return WeightedArrangement.of(zip(dirs, mults))


def line_form(d: LineDirection) -> Poly:
    """l = -b*z1 + a*z2, vanishing on the line spanned by (a, b)."""
    return Poly({(1, 0): -d.b, (0, 1): d.a})


def reflect(d: LineDirection, f: Poly) -> Poly:
    """f composed with the orthogonal reflection fixing the line d."""
    a, b, n = d.a, d.b, d.norm2()
    x = Poly({(1, 0): Fraction(a * a - b * b, n), (0, 1): Fraction(2 * a * b, n)})
    y = Poly({(1, 0): Fraction(2 * a * b, n), (0, 1): Fraction(b * b - a * a, n)})
    return f.subs(x, y)


def _euler_rotation(f: Poly) -> Poly:
    # E = -z2 d/dz1 + z1 d/dz2
    out: dict = {}
    for (p, q), c in f.terms.items():
        if p:
            k = (p - 1, q + 1)
            out[k] = out.get(k, 0) - c * p
        if q:
            k = (p + 1, q - 1)
            out[k] = out.get(k, 0) + c * q
    return Poly(out)


def angular_derivative(f: Poly, k: int = 1) -> Poly:
    """E^k f for the rotation field E = -z2*d1 + z1*d2."""
    for _ in range(k):
        f = _euler_rotation(f)
    return f


@lru_cache(maxsize=None)
def monomial_jet(e: tuple[int, int], a: int, b: int, k: int) -> tuple[Fraction, ...]:
    """Coefficients (E^i z^e)(a, b)/i! for i < k.

    A monomial of degree n restricted to t -> (ta, tb) picks up t^n, so
    the jet of z^e is t^n times this vector.
    """
    p = Poly.mono(e)
    out = []
    for i in range(k):
        out.append(p.subs(a, b) / factorial(i))
        p = _euler_rotation(p)
    return tuple(out)


class Jet:
    """Element of Q(t)[eps]/(eps^k); c[i] is the eps^i coefficient."""

    __slots__ = ("c", "k")

    def __init__(self, coeffs: Sequence, k: int):
        cs = list(coeffs)[:k]
        cs += [UPoly()] * (k - len(cs))
        self.c = tuple(cs)
        self.k = k

    @classmethod
    def one(cls, k: int) -> "Jet":
        return cls([UPoly.const(1)], k)

    def __add__(self, other: "Jet") -> "Jet":
        self._check(other)
        return Jet([x + y for x, y in zip(self.c, other.c)], self.k)

    def __sub__(self, other: "Jet") -> "Jet":
        self._check(other)
        return Jet([x - y for x, y in zip(self.c, other.c)], self.k)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet([x * other for x in self.c], self.k)
        self._check(other)
        out = [UPoly()] * self.k
        for i, x in enumerate(self.c):
            if not x:
                continue
            for j in range(self.k - i):
                y = other.c[j]
                if y:
                    out[i + j] = out[i + j] + x * y
        return Jet(out, self.k)

    __rmul__ = __mul__

    def _check(self, other):
        if self.k != other.k:
            raise ValueError("jets of different truncation length")

    def is_zero(self) -> bool:
        return not any(self.c)

    def __eq__(self, other):
        return isinstance(other, Jet) and self.k == other.k and all(
            x == y for x, y in zip(self.c, other.c)
        )

    def __repr__(self):
        terms = [f"({x})*eps^{i}" for i, x in enumerate(self.c) if x]
        return " + ".join(terms) if terms else "0"


def jet(f: Poly, d: LineDirection, k: int) -> Jet:
    """Angular Taylor jet of f along the line d, truncated at eps^k."""
    if k < 1:
        raise ValueError("truncation length must be positive")
    acc = [dict() for _ in range(k)]
    for e, c in f.terms.items():
        n = e[0] + e[1]
        for i, v in enumerate(monomial_jet(e, d.a, d.b, k)):
            if v:
                acc[i][n] = acc[i].get(n, 0) + c * v
    coeffs = []
    for row in acc:
        top = max(row, default=-1)
        coeffs.append(UPoly(row.get(j, 0) for j in range(top + 1)))
    return Jet(coeffs, k)


def jet_split(j: Jet) -> tuple[list, list]:
    """(T+, T-) with j = T+(sigma) + eps*T-(sigma) and sigma = eps^2."""
    if j.k % 2:
        raise ValueError("even/odd split needs an even truncation length")
    return list(j.c[0::2]), list(j.c[1::2])


def e_value(d: LineDirection) -> Gaussian:
    """e(alpha) = (a + ib)^2 / (a^2 + b^2), a point of the unit circle."""
    z = Gaussian(d.a, d.b)
    return z * z / d.norm2()


def ba_residues(arr: WeightedArrangement) -> list[dict]:
    """Both residue sums for every line and every 1 <= k <= mu_alpha."""
    rows = []
    lines = arr.lines
    for ia, (da, ma) in enumerate(lines):
        ea = e_value(da)
        for k in range(1, ma + 1):
            s1 = Gaussian(0)
            s2 = Gaussian(0)
            for ib, (db, mb) in enumerate(lines):
                if ib == ia or mb == 0:
                    continue
                eb = e_value(db)
                num = (eb + ea) ** (2 * k - 1)
                den = eb - ea
                s1 = s1 + num * mb / den ** (2 * k - 1)
                s2 = s2 + num * eb * (mb * (mb + 1)) / den ** (2 * k + 1)
            rows.append({"line": da, "k": k, "first": s1, "second": s2})
    return rows


def is_baker_akhiezer(arr: WeightedArrangement) -> bool:
    return all(not r["first"] and not r["second"] for r in ba_residues(arr))


def delta_poly(arr: WeightedArrangement) -> Poly:
    """Product of l_alpha^mu_alpha."""
    out = Poly.const(1)
    for d, m in arr.lines:
        if m:
            out = out * line_form(d) ** m
    return out


def omega() -> Poly:
    return Poly({(2, 0): 1, (0, 2): 1})
