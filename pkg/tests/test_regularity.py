import math
import random
from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st
from scipy.optimize import minimize_scalar

from stratlab.algebra import ExactComplex, ctx, parse_polynomial
from stratlab.checks import corpus, random_arcs, verified_curves
from stratlab.regularity import (
    DegenerateInput,
    DirectionClass,
    Kind,
    Pairing,
    PreconditionError,
    ProbeError,
    analyze_arc,
    circle,
    limit_direction,
    limit_ratio_a,
    limit_ratio_delta,
    lemma2_check,
    log_spiral,
    numeric_ratios,
    probe_ring_max,
    realified_secant_sine,
    root_spiral,
    sin_angle,
    sine_subspace_subspace,
    sine_vector_subspace,
    spiral_angle,
)
from stratlab.regularity.sampling import random_arc_on
from stratlab.series import Arc, TruncSeries, compose, parse_arc, refine_onto_hypersurface

XYZ = ["x", "y", "z"]
XYZT = XYZ + ["t"]
F364 = parse_polynomial("x^5 + t*x*y^6 + y^7*z + z^15", XYZT)


@pytest.fixture(scope="module")
def arc_a1():
    """Arc with a = 1, b = 4, c = -5 pushed onto F = 0 by correcting z."""
    arc = parse_arc("x = s^8; y = s^5; z = 4*s^5; t = -5*s^2", trunc=200)
    return refine_onto_hypersurface(F364, arc, "z", 130)


# --- limits -------------------------------------------------------------------


def test_condition_a_on_perturbed_arc(arc_a1):
    out = limit_ratio_a(F364, arc_a1, XYZ, "t")
    assert out.kind is Kind.ZERO
    # by hand: F_t = x y^6 has order 38, grad_x F has order 35
    assert compose(F364.differentiate("t"), arc_a1).valuation().order == 38
    assert out.num_order.order == 38 and out.den_order == 35


def test_delta_limit_on_perturbed_arc(arc_a1):
    # leading secant (0, 1, 4) and normal (0, -2, 1): |-2 + 4|^2 / (17 * 5)
    expect = Fraction(abs(-2 + 4) ** 2, 17 * 5)
    for p in Pairing:
        out = limit_ratio_delta(F364, arc_a1, XYZ, p, "t")
        assert out.kind is Kind.FINITE
        assert out.value_sq == expect
        assert abs(out.value - 2 / ctx.sqrt(85)) < 1e-30


def test_example_two_fails_condition_a():
    h = parse_polynomial("y^20 - t^4*x^6 - x^10", ["x", "y", "t"])
    arc = parse_arc("x = u^2; y = c*u; t = u^2", constants={"c": ctx.root(2, 20)}, param="u", trunc=80)
    out = limit_ratio_a(h, arc, ["x", "y"], "t")
    assert out.kind is Kind.FINITE and abs(out.value - 0.25) < 1e-20
    # oracle: direct evaluation of |h_t| / ||grad h|| at small u
    row = numeric_ratios(h, arc, ["x", "y"], "t", ctx.mpf("1e-4"))
    assert abs(row["ratio_a"] - 0.25) < 1e-3


def test_parameter_free_family_gives_zero():
    F = parse_polynomial("x^2 - y^3", ["x", "y", "t"])
    arc = parse_arc("x = s^3; y = s^2; t = s")
    assert limit_ratio_a(F, arc, ["x", "y"], "t").kind is Kind.ZERO


def _high_t_arcs(count):
    F = corpus()["bs364"].polynomial
    rng = random.Random(364)
    out = []
    while len(out) < count:
        arc = random_arc_on(F, rng, "t", exponent_range={"x": (1, 4), "y": (1, 3), "z": (1, 3)})
        vt = arc["t"].valuation().order
        if vt >= min(arc[v].valuation().order for v in XYZ):
            out.append(arc)
    return out


def test_high_parameter_order_gives_zero():
    for arc in _high_t_arcs(4):
        for p in Pairing:
            assert limit_ratio_delta(F364, arc, XYZ, p, "t").kind is Kind.ZERO


def _real_arc(rng, trunc=30):
    comps = {}
    for v in XYZT:
        d = {rng.randint(1, 6): ExactComplex(Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3)))}
        d[rng.randint(1, 8)] = ExactComplex(rng.randint(-2, 2))
        comps[v] = TruncSeries(d, trunc)
    return Arc(comps)


def _complex_arc(rng, trunc=30):
    comps = {}
    for v in XYZT:
        d = {rng.randint(1, 6): ExactComplex(rng.randint(-3, 3) or 1, rng.randint(-2, 2))}
        d[rng.randint(1, 8)] = ExactComplex(rng.randint(-2, 2), rng.randint(-2, 2))
        comps[v] = TruncSeries(d, trunc)
    return Arc(comps)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_pairings_agree_on_real_arcs(seed):
    arc = _real_arc(random.Random(seed))
    b = limit_ratio_delta(F364, arc, XYZ, Pairing.BILINEAR, "t")
    h = limit_ratio_delta(F364, arc, XYZ, Pairing.HERMITIAN, "t")
    assert b.kind is h.kind
    assert b.value_sq == h.value_sq


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_sine_limits_are_bounded_by_one(seed):
    arc = _complex_arc(random.Random(seed))
    for p in Pairing:
        out = limit_ratio_delta(F364, arc, XYZ, p, "t")
        assert out.kind is not Kind.DIVERGENT
        if out.kind is Kind.FINITE:
            assert out.value <= 1 + 1e-12


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3]))
def test_limits_survive_reparametrisation(seed, k):
    arc = _complex_arc(random.Random(seed))
    slow = arc.reparametrize(k)
    for a, b in (
        (limit_ratio_a(F364, arc, XYZ, "t"), limit_ratio_a(F364, slow, XYZ, "t")),
        *[(limit_ratio_delta(F364, arc, XYZ, p, "t"), limit_ratio_delta(F364, slow, XYZ, p, "t")) for p in Pairing],
    ):
        assert a.kind is b.kind
        assert a.value_sq == b.value_sq


# --- directions -------------------------------------------------------------------


def test_secant_and_normal_classes_for_generic_a():
    a = ExactComplex(1, 2)
    x = [TruncSeries({8: ExactComplex(1)}, 60), TruncSeries({5: a}, 60), TruncSeries({5: 4 / a**7}, 60)]
    assert limit_direction(x).matches([0, a**8, 4], 1e-12)
    grad = [TruncSeries({32: ExactComplex(0)}, 60), TruncSeries({35: -2 / a}, 60), TruncSeries({35: a**7}, 60)]
    assert limit_direction(grad).matches([0, -2, a**8], 1e-12)
    assert not limit_direction(grad).matches([0, a**8, 4], 1e-6)


def test_single_component_gives_axis():
    d = limit_direction([TruncSeries({}, 20), TruncSeries({3: ExactComplex(-7)}, 20), TruncSeries({9: ExactComplex(1)}, 20)])
    assert d.matches([0, 1, 0], 1e-15)


@given(st.lists(st.complex_numbers(min_magnitude=0.1, max_magnitude=10), min_size=2, max_size=4),
       st.complex_numbers(min_magnitude=0.1, max_magnitude=10))
def test_direction_matching_is_scale_invariant(coords, lam):
    d = DirectionClass(tuple(ctx.mpc(c) for c in coords), 0)
    assert d.matches([c * lam for c in coords], 1e-9)


# --- valuation inequalities ---------------------------------------------------------------


def test_lemma2_on_perturbed_arc(arc_a1):
    r = lemma2_check(F364, arc_a1, XYZ, "t", guard_order=120)
    assert (r.ineq1, r.ineq2, r.agree) == (False, False, True)
    assert r.table["nu_sum_xF"] == "Finite(40)"
    assert (r.table["nu_x"], r.table["nu_J"], r.table["nu_t"], r.table["nu_Ft"]) == (5, 35, "Finite(2)", "Finite(38)")


def test_lemma2_with_high_parameter_order():
    for arc in _high_t_arcs(3):
        r = lemma2_check(F364, arc, XYZ, "t", guard_order=120)
        assert r.ineq1 and r.ineq2 and r.agree


def test_lemma2_smooth_control():
    F = parse_polynomial("x + t", ["x", "t"])
    r = lemma2_check(F, parse_arc("x = -s; t = s"), ["x"], "t", guard_order=10)
    # both sides equal the right-hand side 0 + 1, so neither strict inequality holds
    assert (r.ineq1, r.ineq2, r.agree) == (False, False, True)


def test_lemma2_needs_an_arc_on_the_hypersurface():
    with pytest.raises(PreconditionError):
        lemma2_check(F364, parse_arc("x = s^2; y = s^2; z = s^2; t = s"), XYZ, "t")


@pytest.mark.parametrize("fid", ["bs364", "bs56", "bs_alpha5", "bs_alpha7"])
def test_lemma2_agrees_on_random_arcs(fid):
    rec = corpus()[fid]
    for arc in random_arcs(fid, 50):
        assert lemma2_check(rec.polynomial, arc, rec.vars, rec.param, guard_order=120).agree


# --- real sines ---------------------------------------------------------------------------


def test_sine_examples():
    assert sine_vector_subspace([1, 2, 0], [[1, 0, 0], [0, 1, 0]]) == pytest.approx(0, abs=1e-15)
    assert sine_vector_subspace([0, 0, 3], [[1, 0, 0], [0, 1, 0]]) == pytest.approx(1)
    assert sine_vector_subspace([1, 1, 0], [[1, 0, 0]]) == pytest.approx(1 / math.sqrt(2))
    assert sine_subspace_subspace([[1, 1, 0]], [[1, 0, 0], [0, 1, 0]]) == pytest.approx(0, abs=1e-15)
    assert sine_subspace_subspace([[1, 0]], [[0, 1]]) == pytest.approx(1)
    with pytest.raises(DegenerateInput):
        sine_vector_subspace([0, 0, 0], [[1, 0, 0]])
    with pytest.raises(DegenerateInput):
        sine_subspace_subspace([[1, 0, 0]], [[1, 0, 0], [2, 0, 0]])


@given(st.floats(0.01, math.pi / 2))
def test_dihedral_angle(phi):
    # planes through the z axis with normals at angle phi
    P = [[0, 0, 1], [1, 0, 0]]
    Q = [[0, 0, 1], [math.cos(phi), math.sin(phi), 0]]
    assert sine_subspace_subspace(P, Q) == pytest.approx(math.sin(phi), abs=1e-12)


vec = st.lists(st.floats(-10, 10), min_size=4, max_size=4).filter(lambda v: np.linalg.norm(v) > 1e-3)


@given(st.lists(vec, min_size=1, max_size=2), st.lists(vec, min_size=2, max_size=3))
def test_subspace_sine_against_scipy(S, T):
    try:
        got = sine_subspace_subspace(S, T)
    except DegenerateInput:
        return
    if np.linalg.matrix_rank(np.array(S), 1e-6) < len(S) or np.linalg.matrix_rank(np.array(T), 1e-6) < len(T):
        return
    want = math.sin(max(scipy.linalg.subspace_angles(np.array(S).T, np.array(T).T)))
    assert got == pytest.approx(want, abs=1e-8)


@given(vec, vec, vec)
def test_sine_triangle_inequality(a, b, c):
    assert sin_angle(a, c) <= sin_angle(a, b) + sin_angle(b, c) + 1e-12


cvec = st.lists(st.complex_numbers(min_magnitude=0.1, max_magnitude=10), min_size=3, max_size=3)


@given(cvec, cvec)
def test_realified_sine_is_the_bilinear_quotient(x, g):
    x, g = np.array(x), np.array(g)
    want = abs(np.dot(x, g)) / (np.linalg.norm(x) * np.linalg.norm(g))
    assert realified_secant_sine(x, g) == pytest.approx(want, abs=1e-9)


def test_bpi_instance_along_corpus_arcs():
    """With the paired point pi(x) = (0, t) the secant is (x, 0); its real sine
    against the tangent space of F = 0 equals the bilinear quotient formed with
    the full gradient."""
    F, G = corpus()["bs364"].polynomial, corpus()["bs56"].polynomial
    curve, _ = verified_curves("bs364")[3]
    cases = [(F, refine_onto_hypersurface(F, curve.arc(200), "z", 130))]
    cases += [(G, arc) for arc in random_arcs("bs56", 3)]
    for H, arc in cases:
        for s in ("1e-1", "1e-2"):
            pt = arc.point(ctx.mpf(s))
            x = [complex(pt[v].to_mpc()) for v in XYZ] + [0]
            grad = [complex(H.differentiate(v).evaluate(pt).to_mpc()) for v in XYZT]
            want = abs(np.dot(x, grad)) / (np.linalg.norm(x) * np.linalg.norm(grad))
            assert realified_secant_sine(x, grad) == pytest.approx(want, rel=1e-9)


# --- spirals ------------------------------------------------------------------------------


def test_log_spiral_angle_is_constant():
    r = log_spiral(ctx.pi / 4)
    for t in (-5, -1, 0, 0.5, 3, 10):
        assert abs(spiral_angle(r, t) - math.sin(math.pi / 4)) < 1e-12


def test_circle_is_orthogonal_to_radius():
    assert spiral_angle(circle(2), 0.7) == pytest.approx(1, abs=1e-14)


@pytest.mark.parametrize("t", [1e2, 1e3, 1e4])
def test_root_spiral_angle(t):
    # r'/r = -1/(2 sqrt t), so the sine is 1/sqrt(1 + 1/(4t))
    assert spiral_angle(root_spiral(), t) == pytest.approx(1 / math.sqrt(1 + 1 / (4 * t)), abs=1e-12)


@given(st.floats(0.1, 1.4), st.floats(-20, 20))
def test_log_spiral_any_beta(beta, t):
    assert spiral_angle(log_spiral(beta), t) == pytest.approx(math.sin(beta), abs=1e-10)


# --- probes -------------------------------------------------------------------------------


def _example_one_oracle():
    def ratio(c, t=1e-6):
        x = c * t**1.5
        y = (t**6 * x**2 + x**6) ** (1 / 6)
        hx, hy = -2 * t**6 * x - 6 * x**5, 6 * y**5
        return abs(x * hx + y * hy) / (math.hypot(x, y) * math.hypot(hx, hy))

    return -minimize_scalar(lambda c: -ratio(c), bounds=(0.01, 10), method="bounded").fun


def test_example_one_probe_matches_curve_family_maximum():
    rec = corpus()["example1"]
    res = probe_ring_max(rec.polynomial, rec.vars, rec.param, 1e-2)
    assert 0.4 <= res.max_bpi <= 0.55
    assert res.max_bpi == pytest.approx(_example_one_oracle(), abs=5e-3)


def test_example_two_probe_sees_the_quarter():
    rec = corpus()["example2"]
    res = probe_ring_max(rec.polynomial, rec.vars, rec.param, 1e-2)
    assert res.max_a >= 0.24


def test_probe_guards():
    with pytest.raises(ProbeError):
        probe_ring_max(parse_polynomial("x^2 + y^2 + t^2 + 1", ["x", "y", "t"]), ["x", "y"], "t", 0.1)
    with pytest.raises(ValueError):
        probe_ring_max(parse_polynomial("x - i*y", ["x", "y", "t"]), ["x", "y"], "t", 0.1)


# --- report -------------------------------------------------------------------------------


def test_report_labels(arc_a1):
    rep = analyze_arc(F364, arc_a1, XYZ, "t", s_samples=("1e-2",))
    assert rep.label.startswith("(delta^pi) with bound 0.2169")
    rep.check_consistency()
    arc = _high_t_arcs(1)[0]
    rep = analyze_arc(F364, arc, XYZ, "t", s_samples=("1e-2",))
    assert rep.label == "Whitney (b) consistent"
    assert rep.delta_bound(Pairing.BILINEAR) == 0
