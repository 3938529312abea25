import dataclasses
from fractions import Fraction
from math import gcd

import pytest
import sympy
from hypothesis import given, strategies as st

from stratlab.algebra import ApproxComplex, ExactComplex, ctx, parse_polynomial
from stratlab.curvehunt import (
    BSFamilyShape,
    ExponentPattern,
    ShapeMismatch,
    enumerate_failure_curves,
    solve_coefficients,
    solve_exponent_pattern,
    validate_rule,
    verify_curve,
)
from stratlab.checks import bilinear_closed_form, verified_curves
from stratlab.regularity import Kind, Pairing

SHAPES = [BSFamilyShape(5, 6, 7, 15)] + [BSFamilyShape.alpha(a) for a in (3, 5, 7)]


def test_shapes():
    assert BSFamilyShape.alpha(3) == BSFamilyShape(3, 3, 4, 9)
    assert str(BSFamilyShape(5, 6, 7, 15).polynomial()) == str(parse_polynomial("x^5 + t*x*y^6 + y^7*z + z^15", list("xyzt")))


@pytest.mark.parametrize(
    "shape, bound, expect",
    [
        (BSFamilyShape(5, 6, 7, 15), 40, [(8, 5, 5, 2)]),
        (BSFamilyShape(3, 3, 4, 9), 40, [(5, 3, 3, 1)]),
        (BSFamilyShape(5, 6, 7, 15), 4, []),
    ],
)
def test_pattern_examples(shape, bound, expect):
    assert [p.as_tuple() for p in solve_exponent_pattern(shape, bound)] == expect


def _brute_force(shape, bound):
    # the three constraints written out directly, primitive solutions only
    p, q, r = shape.p, shape.q, shape.r
    out = []
    for ny in range(1, bound + 1):
        nz = ny
        for nt in range(1, ny):
            for nx in range(ny + 1, bound + 1):
                if nx + nt != (r - q) * ny + nz or (p - 1) * nx != nt + q * ny:
                    continue
                if gcd(gcd(nx, ny), gcd(nz, nt)) == 1:
                    out.append((nx, ny, nz, nt))
    return sorted(out)


@pytest.mark.parametrize("shape", SHAPES, ids=str)
def test_patterns_against_brute_force(shape):
    assert [p.as_tuple() for p in solve_exponent_pattern(shape, 24)] == _brute_force(shape, 24)


@given(st.sampled_from(SHAPES), st.integers(1, 7))
def test_pattern_multiples_still_satisfy(shape, k):
    pat = solve_exponent_pattern(shape)[0]
    assert pat.scaled(k).satisfies(shape)
    assert pat.scaled(k).primitive() == pat


def test_non_patterns_rejected():
    shape = BSFamilyShape(5, 6, 7, 15)
    assert not ExponentPattern(8, 5, 5, 3).satisfies(shape)
    assert not ExponentPattern(5, 5, 5, 2).satisfies(shape)


def test_coefficient_rules():
    rule = solve_coefficients(BSFamilyShape(5, 6, 7, 15))
    a = ExactComplex(2, 1)
    assert rule.c(a) == -5 / a**6 and rule.b(a) == 4 / a**7
    assert (rule.root_degree, rule.root_rhs) == (16, -8)
    for alpha in (3, 5, 7, 9):
        beta = (3 * alpha - 1) // 2
        rule = solve_coefficients(BSFamilyShape.alpha(alpha))
        assert rule.c(a) == -3 / a**alpha and rule.b(a) == 2 / a**beta
        assert (rule.root_degree, rule.root_rhs) == (2 * beta + 2, -2)


def _leading(expr, s):
    poly = sympy.Poly(sympy.expand(expr), s)
    low = min(m[0] for m in poly.monoms())
    return sympy.simplify(poly.coeff_monomial(s**low)), low


@pytest.mark.parametrize("shape", SHAPES, ids=str)
def test_closed_forms_against_symbolic_expansion(shape):
    a, b, c, s = sympy.symbols("a b c s")
    x, y, z, t = sympy.symbols("x y z t")
    p, q, r, k = shape.p, shape.q, shape.r, shape.k
    F = x**p + t * x * y**q + y**r * z + z**k
    nx, ny, nz, nt = solve_exponent_pattern(shape)[0].as_tuple()
    sub = {x: s**nx, y: a * s**ny, z: b * s**nz, t: c * s**nt}
    val = sympy.expand(F.subs(sub))
    fx = sympy.expand(sympy.diff(F, x).subs(sub))
    # leading coefficients at the pattern's common orders must vanish
    e_f = val.coeff(s, p * nx)
    e_x = fx.coeff(s, (p - 1) * nx)
    sol = sympy.solve([e_f, e_x], [b, c], dict=True)[0]
    rule = solve_coefficients(shape)
    av = ExactComplex(3, -1)
    a_num = sympy.Integer(3) - sympy.I
    for mine, theirs in ((rule.b(av), sol[b]), (rule.c(av), sol[c])):
        re, im = sympy.expand(theirs.subs(a, a_num)).as_real_imag()
        assert mine == ExactComplex(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))
    # secant (a, b) proportional to the normal (F_y, F_z) in the y, z slots
    fy, oy = _leading(sympy.diff(F, y).subs(sub).subs(sol), s)
    fz, oz = _leading(sympy.diff(F, z).subs(sub).subs(sol), s)
    assert oy == oz
    cond = sympy.Poly(sympy.numer(sympy.together(a * fz - sol[b] * fy)), a)
    (hi, chi), (lo, clo) = sorted(cond.terms(), reverse=True)
    assert hi[0] - lo[0] == 2 * r + 2
    assert -clo / chi == (p - 1) * (r * (p - 1) - p * q) == shape.root_rhs


def test_rule_validation_accepts_corpus_shapes():
    for shape in SHAPES:
        validate_rule(shape)


@pytest.mark.parametrize("shape, n, rhs", [(BSFamilyShape(5, 6, 7, 15), 16, -8), (BSFamilyShape(3, 3, 4, 9), 10, -2)])
def test_enumeration(shape, n, rhs):
    curves = enumerate_failure_curves(shape)
    assert len(curves) == n == 2 * shape.r + 2
    assert len({complex(c.a.value) for c in curves}) == n
    for c in curves:
        a = c.a.value
        assert abs(a**n - rhs) < 1e-25
        assert c.root_residual < 1e-10 and c.leading_residual < 1e-10
        assert abs(c.c.value + shape.p / a**shape.q) < 1e-25
        assert abs(c.b.value - (shape.p - 1) / a**shape.r) < 1e-25
    assert curves[0].initial_terms() == "(s^{}, a*s^{}, b*s^{}, c*s^{})".format(*solve_exponent_pattern(shape)[0].as_tuple())


@pytest.mark.parametrize("alpha", [5, 7, 9])
def test_curve_count_tracks_root_degree(alpha):
    shape = BSFamilyShape.alpha(alpha)
    assert len(enumerate_failure_curves(shape)) == 2 * shape.r + 2


def test_verified_curve_report():
    curve, rep = verified_curves("bs364")[0]
    a = curve.a.value
    assert rep.verdict_a.kind is Kind.ZERO
    assert abs(rep.verdict_bpi[Pairing.HERMITIAN].value - 1) < 1e-9
    bil = rep.verdict_bpi[Pairing.BILINEAR]
    assert abs(bil.value - ctx.mpf(1) / 3) < 1e-9
    assert abs(bil.value - abs(4 + a**16) / (4 + abs(a) ** 16)) < 1e-9
    assert rep.secant.matches([0, a**8, 4], 1e-9) and rep.normal.matches([0, -2, a**8], 1e-9)
    assert rep.label == "weak Whitney failure (hermitian)"
    # oracle: the literal quotients evaluated at small s
    for row in rep.rows:
        if row["s"] <= 1e-3:
            assert abs(row["ratio_delta_hermitian"] - 1) < 0.01
            assert abs(row["ratio_delta_bilinear"] - bil.value) < 0.01 * bil.value


def test_bilinear_closed_form_values():
    assert abs(bilinear_closed_form(BSFamilyShape(5, 6, 7, 15)) - ctx.mpf(1) / 3) < 1e-30
    for fid in ("bs364", "bs56"):
        curve, rep = verified_curves(fid)[1]
        assert abs(rep.verdict_bpi[Pairing.BILINEAR].value - bilinear_closed_form(curve.shape)) < 1e-9


def test_perturbed_root_stays_below_a_third():
    shape = BSFamilyShape(5, 6, 7, 15)
    curve = enumerate_failure_curves(shape)[0]
    fake = dataclasses.replace(
        curve, root=dataclasses.replace(curve.root, value=ApproxComplex(1)), b=ApproxComplex(4), c=ApproxComplex(-5)
    )
    rep = verify_curve(shape.polynomial(), fake)
    h = rep.verdict_bpi[Pairing.HERMITIAN]
    assert h.kind is Kind.FINITE
    assert abs(h.value - 2 / ctx.sqrt(85)) < 1e-9
    assert h.value <= ctx.mpf(1) / 3


def test_verify_curve_guards():
    shape = BSFamilyShape(5, 6, 7, 15)
    curve = enumerate_failure_curves(shape)[0]
    with pytest.raises(ShapeMismatch):
        verify_curve(BSFamilyShape(3, 3, 4, 9).polynomial(), curve)
    with pytest.raises(ValueError):
        verify_curve(shape.polynomial(), curve, target_order=50)
