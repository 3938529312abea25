"""Exact limits of the tangent/secant quotients along an arc.

All limits are one-sided, ``s -> 0+``.  A quotient ``|num| / prod ||vec_k||``
has limit Zero, Finite or Divergent according to how the valuation of the
numerator compares with the sum of the vector valuations; the finite value is
read off the leading coefficients.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..algebra import ExactComplex, MultiPoly, ctx
from ..series import Arc, Composer, Indeterminate, TruncSeries, Valuation, vector_leading, vector_valuation


class Pairing(enum.Enum):
    BILINEAR = "bilinear"  # sum x_i * dF/dx_i
    HERMITIAN = "hermitian"  # sum x_i * conj(dF/dx_i)


class Kind(enum.Enum):
    ZERO = "zero"
    FINITE = "finite"
    DIVERGENT = "divergent"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class LimitOutcome:
    kind: Kind
    value: object = None  # mpf for FINITE
    value_sq: Fraction | None = None  # exact when every leading coefficient is a Gaussian rational
    required_trunc: int | None = None
    num_order: Valuation | None = None
    den_order: int | None = None

    @classmethod
    def zero(cls, **kw):
        return cls(Kind.ZERO, value=ctx.mpf(0), value_sq=Fraction(0), **kw)

    @property
    def numeric(self) -> float:
        if self.kind is Kind.ZERO:
            return 0.0
        if self.kind is Kind.FINITE:
            return float(self.value)
        if self.kind is Kind.DIVERGENT:
            return float("inf")
        return float("nan")

    def __str__(self):
        if self.kind is Kind.FINITE:
            extra = f", value^2={self.value_sq}" if self.value_sq is not None else ""
            return f"Finite({ctx.nstr(self.value, 12)}{extra})"
        if self.kind is Kind.INDETERMINATE:
            return f"Indeterminate(trunc>={self.required_trunc})"
        return self.kind.name.capitalize()


def _abs2(c):
    if isinstance(c, ExactComplex):
        return Fraction(int(c.abs2().numerator), int(c.abs2().denominator))
    return c.abs2()


def ratio_limit(num: TruncSeries, vectors: Sequence[Sequence[TruncSeries]]) -> LimitOutcome:
    """Limit of ``|num(s)| / prod_k ||vectors[k](s)||`` as ``s -> 0+``."""
    try:
        leads = [vector_leading(list(vec)) for vec in vectors]
    except Indeterminate as exc:
        return LimitOutcome(Kind.INDETERMINATE, required_trunc=exc.required_trunc)
    den = sum(order for order, _ in leads)
    nv = num.valuation()
    if not nv.is_finite:
        if nv.order > den:
            return LimitOutcome.zero(num_order=nv, den_order=den)
        return LimitOutcome(Kind.INDETERMINATE, required_trunc=max(2 * num.trunc, den + 1), num_order=nv, den_order=den)
    if nv.order > den:
        return LimitOutcome.zero(num_order=nv, den_order=den)
    if nv.order < den:
        return LimitOutcome(Kind.DIVERGENT, num_order=nv, den_order=den)
    lead_num = num.coeffs[nv.order]
    exact = isinstance(lead_num, ExactComplex) and all(
        isinstance(c, ExactComplex) for _, vec in leads for c in vec
    )
    sq = _abs2(lead_num)
    for _, vec in leads:
        sq = sq / sum((_abs2(c) for c in vec), Fraction(0) if exact else ctx.mpf(0))
    if exact:
        value = ctx.sqrt(ctx.mpf(sq.numerator) / sq.denominator)
        return LimitOutcome(Kind.FINITE, value=value, value_sq=sq, num_order=nv, den_order=den)
    return LimitOutcome(Kind.FINITE, value=ctx.sqrt(sq), num_order=nv, den_order=den)


class ArcAnalysis:
    """Compositions of a family ``F(x, t)`` and its partials along one arc."""

    def __init__(self, F: MultiPoly, arc: Arc, x_vars: Sequence[str], t_var: str):
        self.F = F
        self.arc = arc
        self.x_vars = tuple(x_vars)
        self.t_var = t_var
        self._compose = Composer(arc)
        self._cache: dict = {}

    def _get(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def value(self) -> TruncSeries:
        return self._get("F", lambda: self._compose(self.F))

    @property
    def grad_x(self) -> list[TruncSeries]:
        return self._get("grad_x", lambda: [self._compose(self.F.differentiate(v)) for v in self.x_vars])

    @property
    def f_t(self) -> TruncSeries:
        return self._get("f_t", lambda: self._compose(self.F.differentiate(self.t_var)))

    @property
    def x_vec(self) -> list[TruncSeries]:
        return [self.arc[v] for v in self.x_vars]

    @property
    def t(self) -> TruncSeries:
        return self.arc[self.t_var]

    def pairing(self, pairing: Pairing) -> TruncSeries:
        def build():
            total = None
            for xs, gs in zip(self.x_vec, self.grad_x):
                term = xs * (gs.conjugate() if pairing is Pairing.HERMITIAN else gs)
                total = term if total is None else total + term
            return total

        return self._get(("pair", pairing), build)

    def euler_x(self) -> TruncSeries:
        return self.pairing(Pairing.BILINEAR)


def limit_ratio_a(F: MultiPoly, arc: Arc, x_vars, t_var: str, analysis: ArcAnalysis | None = None) -> LimitOutcome:
    """Limit of ``|dF/dt| / ||grad_x F||`` along the arc."""
    an = analysis or ArcAnalysis(F, arc, x_vars, t_var)
    return ratio_limit(an.f_t, [an.grad_x])


def limit_ratio_delta(
    F: MultiPoly, arc: Arc, x_vars, pairing: Pairing = Pairing.BILINEAR, t_var: str = "t", analysis: ArcAnalysis | None = None
) -> LimitOutcome:
    """Limit of ``|<x, grad_x F>| / (||x|| ||grad_x F||)`` under the chosen pairing."""
    an = analysis or ArcAnalysis(F, arc, x_vars, t_var)
    return ratio_limit(an.pairing(pairing), [an.x_vec, an.grad_x])


def with_escalation(compute, arc: Arc, start: int = 64) -> LimitOutcome:
    """Run ``compute(arc')`` on truncations of ``arc``, doubling the order while
    the outcome is Indeterminate.  Low orders are exact as far as they go, so
    this only saves work."""
    n = min(start, arc.trunc)
    while True:
        out = compute(arc.truncate(n) if n < arc.trunc else arc)
        if out.kind is not Kind.INDETERMINATE or n >= arc.trunc:
            return out
        n = min(arc.trunc, max(2 * n, out.required_trunc or 0))


@dataclass(frozen=True)
class DirectionClass:
    """Projective class of a leading-coefficient vector, max-modulus coordinate scaled to 1."""

    coords: tuple
    order: int

    def as_complex(self) -> list:
        return [complex(c) for c in self.coords]

    def matches(self, other: Sequence, tol: float = 1e-9) -> bool:
        """Scale-invariant equality: all 2x2 minors of (self, other) vanish."""
        u = [ctx.mpc(c.to_mpc() if hasattr(c, "to_mpc") else c) for c in self.coords]
        v = [ctx.mpc(c.to_mpc() if hasattr(c, "to_mpc") else c) for c in other]
        if len(u) != len(v):
            return False
        nu = ctx.sqrt(sum(abs(a) ** 2 for a in u))
        nv = ctx.sqrt(sum(abs(b) ** 2 for b in v))
        if nv == 0:
            return False
        worst = max(abs(u[i] * v[j] - u[j] * v[i]) for i in range(len(u)) for j in range(i + 1, len(u))) if len(u) > 1 else 0
        return worst <= tol * nu * nv

    def __str__(self):
        if all(isinstance(c, ExactComplex) for c in self.coords):
            return "(" + " : ".join(str(c) for c in self.coords) + ")"
        vals = [ctx.mpc(c.to_mpc()) for c in self.coords]
        floor = max(abs(v) for v in vals) * ctx.mpf(10) ** (-(ctx.dps - 6))
        return "(" + " : ".join(_show(v, floor) for v in vals) + ")"


def _show(v, floor) -> str:
    re = v.real if abs(v.real) > floor else 0
    im = v.imag if abs(v.imag) > floor else 0
    if not im:
        return ctx.nstr(re, 12)
    if not re:
        return ctx.nstr(im, 12) + "i"
    sign = "+" if im > 0 else "-"
    return f"({ctx.nstr(re, 12)}{sign}{ctx.nstr(abs(im), 12)}i)"


def limit_direction(components: Sequence[TruncSeries]) -> DirectionClass:
    order, vec = vector_leading(list(components))
    best = max(range(len(vec)), key=lambda i: (_abs2(vec[i]), -i))
    pivot = vec[best]
    coords = tuple(c / pivot if not c.is_zero() else c for c in vec)
    return DirectionClass(coords, order)


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class Lemma2Record:
    ineq1: bool
    ineq2: bool
    agree: bool
    table: dict


def _sum_lower(*vals: Valuation) -> tuple[int, bool]:
    """Lower bound of a sum of valuations and whether it is exact."""
    return sum(v.order for v in vals), all(v.is_finite for v in vals)


def lemma2_check(
    F: MultiPoly, arc: Arc, x_vars, t_var: str, guard_order: int = 120, analysis: ArcAnalysis | None = None
) -> Lemma2Record:
    """Compare ``val(sum x_i F_i) > val(x) + val(J_x F)`` with
    ``val(t) + val(F_t) > val(x) + val(J_x F)`` along an arc on ``F = 0``."""
    an = analysis or ArcAnalysis(F, arc, x_vars, t_var)
    fv = an.value.valuation()
    if fv.order < guard_order:
        raise PreconditionError(f"arc leaves F = 0 at order {fv.order} < guard {guard_order}")
    vx = vector_valuation(an.x_vec)
    vj = vector_valuation(an.grad_x)
    if not (vx.is_finite and vj.is_finite):
        raise Indeterminate("x or J_x F vanishes to the truncation order", 2 * arc.trunc)
    rhs = vx.order + vj.order
    ve = an.euler_x().valuation()
    if ve.is_finite:
        ineq1 = ve.order > rhs
    elif ve.order > rhs:
        ineq1 = True
    else:
        raise Indeterminate("sum x_i F_i unknown at the comparison order", 2 * ve.order)
    vt, vft = an.t.valuation(), an.f_t.valuation()
    lo, exact = _sum_lower(vt, vft)
    if exact or lo > rhs:
        ineq2 = lo > rhs
    else:
        raise Indeterminate("t or F_t unknown at the comparison order", 2 * lo + 2)
    table = {
        "nu_F": str(fv),
        "nu_x": vx.order,
        "nu_J": vj.order,
        "nu_sum_xF": str(ve),
        "nu_t": str(vt),
        "nu_Ft": str(vft),
        "rhs": rhs,
    }
    return Lemma2Record(ineq1, ineq2, ineq1 == ineq2, table)


def numeric_ratios(F: MultiPoly, arc: Arc, x_vars, t_var: str, s) -> dict:
    """Literal quotients evaluated at one parameter value in the approximate engine."""
    point = arc.point(s)
    grads = [F.differentiate(v).evaluate(point).to_mpc() for v in x_vars]
    ft = F.differentiate(t_var).evaluate(point).to_mpc()
    xs = [point[v].to_mpc() for v in x_vars]
    ng = ctx.sqrt(sum(abs(g) ** 2 for g in grads))
    nx = ctx.sqrt(sum(abs(x) ** 2 for x in xs))
    bil = abs(sum(x * g for x, g in zip(xs, grads)))
    her = abs(sum(x * ctx.conj(g) for x, g in zip(xs, grads)))
    return {
        "s": ctx.mpf(s),
        "ratio_a": abs(ft) / ng,
        "ratio_delta_bilinear": bil / (nx * ng),
        "ratio_delta_hermitian": her / (nx * ng),
    }
