import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import gaussian, polys, sympy_coeff, to_sympy
from stratlab.algebra import ExactComplex, PolynomialSyntaxError, parse_polynomial
from stratlab.series import (
    AboveTrunc,
    Arc,
    EngineMismatch,
    Finite,
    NoProgress,
    NotTransverse,
    TruncSeries,
    compose,
    leading,
    parse_arc,
    refine_onto_hypersurface,
    series_add,
    series_mul,
    valuation,
    vector_valuation,
)

XYZT = ["x", "y", "z", "t"]
F364 = parse_polynomial("x^5 + t*x*y^6 + y^7*z + z^15", XYZT)
ARC7 = "x = s^8; y = s^5; z = 4*s^5; t = -5*s^2"


def same(a, b):
    n = min(a.trunc, b.trunc)
    return a.truncate(n) == b.truncate(n)


def ts(d, n):
    return TruncSeries({k: ExactComplex(v) for k, v in d.items()}, n)


# --- arithmetic ---------------------------------------------------------------


def test_cancellation_and_orders():
    assert series_add(ts({1: 1, 2: 1}, 10), ts({1: -1}, 10)) == ts({2: 1}, 10)
    # s^2 * O(s^10) is O(s^12), so the product is reliable below 12
    assert series_mul(ts({2: 1}, 10), ts({3: 1}, 10)) == ts({5: 1}, 12)
    assert series_mul(ts({0: 1, 1: -1}, 5), ts({0: 1, 1: 1}, 5)) == ts({0: 1, 2: -1}, 5)


def test_coefficients_above_trunc_are_dropped():
    f = ts({1: 1, 7: 2}, 5)
    assert f.terms == [(1, ExactComplex(1))]
    assert f.top_exponent() < 5


def test_engines_do_not_mix_silently():
    a = ts({1: 1}, 10)
    b = a.to_approx()
    with pytest.raises(EngineMismatch):
        a + b


@st.composite
def series(draw, lo=0):
    n = draw(st.integers(4, 14))
    d = {}
    for _ in range(draw(st.integers(0, 4))):
        d[draw(st.integers(lo, n + 2))] = draw(gaussian)
    return TruncSeries(d, n)


@given(series(), series(), series())
def test_ring_laws(f, g, h):
    assert same((f + g) * h, f * h + g * h)
    assert f * g == g * f
    assert same((f + g) - g, f)


@given(series(lo=1), series(lo=1))
def test_valuation_is_additive(f, g):
    vf, vg = f.valuation(), g.valuation()
    vp = (f * g).valuation()
    if vf.is_finite and vg.is_finite and vf.order + vg.order < (f * g).trunc:
        assert vp == Finite(vf.order + vg.order)
    else:
        assert not vp.is_finite


# --- composition ---------------------------------------------------------------


def test_family_composition():
    arc = parse_arc(ARC7, trunc=200)
    val = compose(F364, arc)
    assert val.terms == [(75, ExactComplex(4**15))]
    assert valuation(val) == Finite(75)
    fx = compose(F364.differentiate("x"), arc)
    assert not fx.valuation().is_finite and fx.trunc > 200
    x = compose(parse_polynomial("x", XYZT), arc)
    assert x.valuation() == Finite(8)


def test_family_composition_term_by_term():
    # independent expansion: each monomial of F separately, summed by hand
    s = sympy.Symbol("s")
    sub = {"x": s**8, "y": s**5, "z": 4 * s**5, "t": -5 * s**2}
    syms = {v: sympy.Symbol(v) for v in XYZT}
    total = sympy.expand(to_sympy(F364).subs({syms[v]: e for v, e in sub.items()}))
    assert total == 4**15 * s**75


def test_valuations():
    assert valuation(ts({75: 4**15}, 200)) == Finite(75)
    assert valuation(TruncSeries({}, 200)) == AboveTrunc(200)
    arc = parse_arc(ARC7)
    assert leading(arc["t"]) == (2, ExactComplex(-5))
    assert vector_valuation([arc[v] for v in "xyz"]) == Finite(5)
    assert vector_valuation([arc["t"]]) == Finite(2)
    assert vector_valuation([TruncSeries({}, 50), TruncSeries({}, 60)]) == AboveTrunc(50)


def _random_arc(rng, vars, trunc):
    comps = {}
    for v in vars:
        d = {rng.randint(1, 4): ExactComplex(rng.randint(-3, 3) or 1, rng.randint(-1, 1))}
        d[rng.randint(1, 6)] = ExactComplex(Fraction(rng.randint(-3, 3), rng.randint(1, 3)))
        comps[v] = TruncSeries(d, trunc)
    return Arc(comps)


@settings(max_examples=40)
@given(polys(), st.integers(0, 10**6))
def test_composition_against_sympy(p, seed):
    arc = _random_arc(random.Random(seed), p.vars, 12)
    got = compose(p, arc)
    s = sympy.Symbol("s")
    subs = {sympy.Symbol(v): to_sympy_series(arc[v], s) for v in p.vars}
    expected = sympy.Poly(sympy.expand(to_sympy(p).subs(subs)), s) if not p.is_zero() else None
    for e in range(got.trunc):
        want = expected.coeff_monomial(s**e) if expected is not None else 0
        assert got.coefficient(e) == sympy_coeff(want)


def to_sympy_series(f, s):
    return sum(
        (sympy.Rational(int(c.re.numerator), int(c.re.denominator)) + sympy.I * sympy.Rational(int(c.im.numerator), int(c.im.denominator))) * s**e
        for e, c in f.terms
    )


@settings(max_examples=30)
@given(polys(), polys(), st.integers(0, 10**6))
def test_composition_is_a_ring_homomorphism(p, q, seed):
    arc = _random_arc(random.Random(seed), p.vars, 14)
    assert same(compose(p * q, arc), compose(p, arc) * compose(q, arc))
    assert same(compose(p + q, arc), compose(p, arc) + compose(q, arc))


@settings(max_examples=30)
@given(polys(), st.integers(0, 10**6), st.integers(2, 4))
def test_reparametrisation_scales_valuations(p, seed, k):
    arc = _random_arc(random.Random(seed), p.vars, 14)
    direct = compose(p, arc.reparametrize(k))
    assert direct == compose(p, arc).substitute_power(k)
    v = compose(p, arc).valuation()
    assert direct.valuation().order == k * v.order


# --- parsing arcs ------------------------------------------------------------------


def test_parse_arc_with_constants():
    arc = parse_arc("x = s^2 + a*s^3; t = s", constants={"a": ExactComplex(0, 2)})
    assert arc["x"].terms == [(2, ExactComplex(1)), (3, ExactComplex(0, 2))]


@pytest.mark.parametrize("text", ["x = s^^2", "x s^2", "x = s +", "1x = s"])
def test_parse_arc_errors(text):
    with pytest.raises(PolynomialSyntaxError):
        parse_arc(text)


def test_arc_components_must_vanish_at_zero():
    with pytest.raises(ValueError):
        parse_arc("x = 1 + s")


# --- refinement ----------------------------------------------------------------------


def test_one_newton_step():
    F = parse_polynomial("x - y^2", ["x", "y"])
    arc = Arc({"x": TruncSeries({}, 40), "y": ts({1: 1}, 40)})
    out = refine_onto_hypersurface(F, arc, "x", 10)
    assert out["x"].terms == [(2, ExactComplex(1))]
    assert compose(F, out).coeffs == {}


def test_family_refinement_first_correction():
    arc = parse_arc(ARC7, trunc=200)
    out = refine_onto_hypersurface(F364, arc, "z", 100)
    step = out.history[0]
    assert (step.value_order, step.deriv_order, step.exponent) == (75, 35, 40)
    assert step.coeff == ExactComplex(-(4**15))
    assert out["z"].coefficient(40) == ExactComplex(-(4**15))
    assert compose(F364, out).valuation().order >= 100


def test_refinement_is_idempotent():
    F = parse_polynomial("x - y^2", ["x", "y"])
    arc = Arc({"x": ts({2: 1}, 40), "y": ts({1: 1}, 40)})
    assert refine_onto_hypersurface(F, arc, "x", 30) is arc


def test_refinement_errors():
    F = parse_polynomial("x^2 - y^3", ["x", "y"])
    arc = Arc({"x": TruncSeries({}, 40), "y": ts({1: 1}, 40)})
    with pytest.raises(NotTransverse):
        refine_onto_hypersurface(F, arc, "x", 10)
    arc = parse_arc("x = s^2; y = s^2; z = s^2; t = s")
    with pytest.raises(NoProgress):
        refine_onto_hypersurface(F364, arc, "x", 100)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(20, 40))
def test_refinement_reaches_target_and_corrections_rise(seed, target):
    # F = z*(1 + x) - x^2 - y^3 is transverse in z along any arc
    F = parse_polynomial("z + x*z - x^2 - y^3", ["x", "y", "z"])
    rng = random.Random(seed)
    arc = _random_arc(rng, ["x", "y"], 80)
    arc = Arc({**arc.components, "z": TruncSeries({}, 80)})
    out = refine_onto_hypersurface(F, arc, "z", target)
    assert compose(F, out).valuation().order >= target
    exps = [h.exponent for h in out.history]
    assert exps == sorted(set(exps))
    orders = [h.value_order for h in out.history]
    assert orders == sorted(set(orders))
