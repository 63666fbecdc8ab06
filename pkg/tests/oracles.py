"""Independent reference computations, written directly against sympy.

None of these reuse the package's linear algebra or operator code; they
implement each definition the slow, literal way.
"""

from __future__ import annotations

from fractions import Fraction

import sympy as sp

from qinv.kernel import Poly

z1, z2, x1, x2, t, s, u, v = sp.symbols("z1 z2 x1 x2 t s u v")


def to_sympy(p: Poly, names=(z1, z2)):
    return sum(
        (sp.Rational(c.numerator, c.denominator) * names[0] ** a * names[1] ** b for (a, b), c in p.terms.items()),
        sp.Integer(0),
    )


def from_sympy(expr, names=(z1, z2)) -> Poly:
    expr = sp.expand(expr)
    if expr == 0:
        return Poly()
    P = sp.Poly(expr, *names)
    return Poly({m: Fraction(int(sp.fraction(c)[0]), int(sp.fraction(c)[1])) for m, c in P.terms()})


def _line_coords(a, b):
    """z in terms of (u, v) with u = l = -b z1 + a z2 and v = a z1 + b z2."""
    n = a * a + b * b
    return {z1: (a * v - b * u) / sp.Integer(n), z2: (b * v + a * u) / sp.Integer(n)}


def reflect_sympy(expr, a, b):
    n = sp.Integer(a * a + b * b)
    m = sp.Matrix([[a * a - b * b, 2 * a * b], [2 * a * b, b * b - a * a]]) / n
    return expr.subs({z1: m[0, 0] * z1 + m[0, 1] * z2, z2: m[1, 0] * z1 + m[1, 1] * z2}, simultaneous=True)


def u_valuation(expr, a, b):
    """Order of vanishing along the line, via coordinates adapted to it."""
    e = sp.expand(expr.subs(_line_coords(a, b), simultaneous=True))
    if e == 0:
        return None
    return min(m[0] for m in sp.Poly(e, u, v).monoms())


def is_qi_oracle(expr, lines) -> bool:
    for (a, b), m in lines:
        if m == 0:
            continue
        val = u_valuation(expr - reflect_sympy(expr, a, b), a, b)
        if val is not None and val < 2 * m + 1:
            return False
    return True


def qi_hilbert_oracle(lines, D):
    """dim of quasi-invariants of each degree, from generic-coefficient solves."""
    dims = []
    for d in range(D + 1):
        cs = sp.symbols(f"c0:{d + 1}")
        f = sum(c * z1 ** i * z2 ** (d - i) for i, c in enumerate(cs))
        eqs = []
        for (a, b), m in lines:
            if m == 0:
                continue
            g = sp.expand((f - reflect_sympy(f, a, b)).subs(_line_coords(a, b), simultaneous=True))
            if g == 0:
                continue
            P = sp.Poly(g, u, v)
            eqs += [c for mono, c in P.terms() if mono[0] < 2 * m + 1]
        if eqs:
            M = sp.Matrix([[sp.diff(e, c) for c in cs] for e in eqs])
            dims.append(len(cs) - M.rank())
        else:
            dims.append(len(cs))
    return dims


def jet_oracle(expr, a, b, k):
    """[(E^i f)(ta, tb) / i!] for i < k with E = -z2 d1 + z1 d2."""
    out = []
    g = expr
    for i in range(k):
        out.append(sp.expand(g.subs({z1: a * t, z2: b * t}, simultaneous=True) / sp.factorial(i)))
        g = sp.expand(-z2 * sp.diff(g, z1) + z1 * sp.diff(g, z2))
    return out


def group_law_oracle(g1, g2, m):
    """(g1 + g2)/(1 + s g1 g2) as a series in s = sigma through s^(m-1)."""
    a = sum(sp.sympify(c) * s ** i for i, c in enumerate(g1))
    b = sum(sp.sympify(c) * s ** i for i, c in enumerate(g2))
    ser = sp.series((a + b) / (1 + s * a * b), s, 0, m).removeO()
    return [sp.simplify(ser.coeff(s, i)) for i in range(m)]


def berest_theta_oracle(lines, xi):
    """Theta = exp(-x.z) (2^mu mu!)^(-1) (H - omega)^mu (delta(x - xi) exp(x.z))."""
    mu = sum(m for _, m in lines)
    forms = [(-b * (x1 - xi[0]) + a * (x2 - xi[1]), m, a * a + b * b) for (a, b), m in lines if m]
    V = sum(sp.Integer(m * (m + 1) * n) / L ** 2 for L, m, n in forms)
    E = sp.exp(x1 * z1 + x2 * z2)
    f = sp.Integer(1)
    for L, m, _ in forms:
        f *= L ** m
    f = f * E
    for _ in range(mu):
        f = sp.diff(f, x1, 2) + sp.diff(f, x2, 2) - V * f - (z1 ** 2 + z2 ** 2) * f
    return sp.simplify(f / E / (2 ** mu * sp.factorial(mu)))


def series_coefficients(expr, D):
    """Taylor coefficients at x = 0 through degree D, via a scaling parameter."""
    ser = sp.series(expr.subs({x1: s * x1, x2: s * x2}, simultaneous=True), s, 0, D + 1).removeO()
    out = {}
    for n in range(D + 1):
        piece = sp.expand(ser.coeff(s, n))
        if piece != 0:
            for mono, c in sp.Poly(piece, x1, x2).terms():
                out[mono] = c
    return out


def slices_oracle(apply_op, order_bound, D):
    """Right slices from the definition: coefficient of d^k in slice i is
    d^i [P (x^k / k!)] at x = 0."""
    out = {}
    for n in range(D + 1):
        for i1 in range(n, -1, -1):
            i = (i1, n - i1)
            terms = {}
            for m in range(n + order_bound + 1):
                for k1 in range(m, -1, -1):
                    k = (k1, m - k1)
                    g = x1 ** k[0] * x2 ** k[1] / (sp.factorial(k[0]) * sp.factorial(k[1]))
                    val = sp.diff(apply_op(g), x1, i[0], x2, i[1]) if n else apply_op(g)
                    val = sp.simplify(val.subs({x1: 0, x2: 0}))
                    if val != 0:
                        terms[k] = Fraction(int(sp.fraction(val)[0]), int(sp.fraction(val)[1]))
            out[i] = Poly(terms)
    return out
