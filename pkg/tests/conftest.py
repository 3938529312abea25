import sympy
from fractions import Fraction
from hypothesis import settings, strategies as st

from stratlab.algebra import ExactComplex, MultiPoly

# symbolic oracles are slow; wall-clock deadlines only produce flaky failures
settings.register_profile("stratlab", deadline=None)
settings.load_profile("stratlab")

VARS3 = ("x", "y", "t")


def to_sympy(p: MultiPoly):
    """Independent rendering of a polynomial as a sympy expression."""
    syms = sympy.symbols(p.vars)
    total = sympy.Integer(0)
    for e, c in p.terms.items():
        coeff = sympy.Rational(int(c.re.numerator), int(c.re.denominator)) + sympy.I * sympy.Rational(
            int(c.im.numerator), int(c.im.denominator)
        )
        mono = sympy.Integer(1)
        for s, k in zip(syms, e):
            mono *= s**k
        total += coeff * mono
    return sympy.expand(total)


def sympy_coeff(c) -> ExactComplex:
    re, im = sympy.nsimplify(c).as_real_imag()
    return ExactComplex(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))


small_fracs = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
gaussian = st.builds(ExactComplex, small_fracs, small_fracs)


@st.composite
def polys(draw, vars=VARS3, max_terms=5, max_deg=4):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(0, max_deg)) for _ in vars)
        terms[e] = draw(gaussian)
    return MultiPoly(vars, terms)
