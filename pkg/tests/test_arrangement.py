import pytest
import sympy as sp
from hypothesis import given, strategies as st

from oracles import jet_oracle, reflect_sympy, to_sympy
from qinv.arrangement import (
    Jet,
    LineDirection,
    WeightedArrangement,
    angular_derivative,
    ba_residues,
    delta_poly,
    is_baker_akhiezer,
    jet,
    jet_split,
    line_form,
    preset,
    reflect,
)
from qinv.kernel import Gaussian, Poly, UPoly, parse_poly

P = parse_poly
small_polys = st.dictionaries(
    st.tuples(st.integers(0, 4), st.integers(0, 4)), st.integers(-4, 4), max_size=4
).map(Poly)
directions = st.tuples(st.integers(-3, 3), st.integers(-3, 3)).filter(lambda d: d != (0, 0))


def test_direction_normalization():
    assert LineDirection(-2, -4) == LineDirection(1, 2)
    assert LineDirection(0, -3) == LineDirection(0, 1)
    with pytest.raises(ValueError):
        LineDirection(0, 0)


def test_arrangement_validation_and_json():
    with pytest.raises(ValueError):
        WeightedArrangement.of([((1, 0), 1), ((2, 0), 1)])
    with pytest.raises(ValueError):
        WeightedArrangement.of([((1, 0), -1)])
    arr = preset("lambda4", 2)
    assert WeightedArrangement.from_json(arr.to_json()) == arr
    assert arr.mu == 8


def test_line_forms():
    assert line_form(LineDirection(1, 0)) == P("z2")
    assert line_form(LineDirection(0, 1)) == P("-z1")
    assert line_form(LineDirection(1, 1)) == P("z2 - z1")


def test_reflection_examples():
    assert reflect(LineDirection(1, 0), P("z2")) == P("-z2")
    assert reflect(LineDirection(1, 1), P("z1")) == P("z2")
    for d in [(1, 0), (2, 1), (-1, 3)]:
        assert reflect(LineDirection(*d), P("z1^2 + z2^2")) == P("z1^2 + z2^2")


@given(small_polys, directions)
def test_reflection_matches_oracle(f, d):
    dd = LineDirection(*d)
    assert to_sympy(reflect(dd, f)) == sp.expand(reflect_sympy(to_sympy(f), dd.a, dd.b))


@given(small_polys, directions)
def test_reflection_is_involution(f, d):
    dd = LineDirection(*d)
    assert reflect(dd, reflect(dd, f)) == f


def test_angular_derivative():
    assert angular_derivative(P("z1")) == P("-z2")
    assert angular_derivative(P("z2")) == P("z1")
    assert angular_derivative(P("z1^2 + z2^2")).is_zero()
    assert angular_derivative(P("z2"), 2) == P("-z2")


def test_jet_examples():
    d = LineDirection(1, 0)
    t = UPoly.t()
    assert jet(P("z2"), d, 2) == Jet([UPoly(), t], 2)
    assert jet(P("z2^2"), d, 2).is_zero()
    assert jet(P("z1"), d, 2) == Jet([t], 2)
    assert jet_split(jet(P("z1*z2"), d, 2)) == ([UPoly()], [t**2])
    assert jet_split(Jet([UPoly.const(1), t], 2)) == ([UPoly.const(1)], [t])


@given(small_polys, directions, st.integers(1, 5))
def test_jet_matches_oracle(f, d, k):
    dd = LineDirection(*d)
    got = jet(f, dd, k)
    want = jet_oracle(to_sympy(f), dd.a, dd.b, k)
    for c, w in zip(got.c, want):
        assert sum(sp.Rational(x.numerator, x.denominator) * sp.Symbol("t") ** i for i, x in enumerate(c.c)) == w


@given(small_polys, small_polys, directions, st.integers(1, 5))
def test_jet_is_multiplicative(f, g, d, k):
    dd = LineDirection(*d)
    assert jet(f * g, dd, k) == jet(f, dd, k) * jet(g, dd, k)


def test_ba_verdicts():
    assert is_baker_akhiezer(preset("lambda2"))
    assert is_baker_akhiezer(preset("lambda4"))
    assert is_baker_akhiezer(preset("lambda2", [1, 3]))
    bad = WeightedArrangement.of([((1, 0), 1), ((1, 1), 1)])
    assert not is_baker_akhiezer(bad)
    first = ba_residues(bad)[0]["first"]
    assert first == Gaussian(0, -1)


def test_ba_lambda4_first_sum_for_alpha_zero():
    row = ba_residues(preset("lambda4"))[0]
    assert row["first"] == 0 and row["second"] == 0


def test_delta():
    assert delta_poly(preset("lambda2")) == P("-z1*z2")
    assert delta_poly(preset("lambda1", 2)) == P("z2^2")
    assert delta_poly(preset("lambda4")) == P("-z1*z2*(z2 - z1)*(z2 + z1)")
