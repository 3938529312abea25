"""Truncated power series in one real parameter, analytic arcs, and lifting
arcs onto a hypersurface.

A ``TruncSeries`` stores the coefficients it knows below ``trunc``; anything at
exponent ``>= trunc`` is unknown.  Sums keep the smaller truncation, products
use ``min(N_f + val g, N_g + val f)``, so composing a polynomial with an arc
reports exactly how far the result can be trusted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Mapping

from .algebra import ApproxComplex, ExactComplex, MultiPoly, UnknownVariable, ctx, parse_polynomial
from .algebra.numbers import as_scalar

DEFAULT_TRUNC = 200
MAX_TRUNC = 1600
EXACT_TRUNC = 10**9


class EngineMismatch(TypeError):
    pass


class Indeterminate(ArithmeticError):
    """A quantity depends on coefficients beyond the truncation order."""

    def __init__(self, message: str, required_trunc: int | None = None):
        super().__init__(message)
        self.required_trunc = required_trunc


class RefinementError(ArithmeticError):
    pass


class NotTransverse(RefinementError):
    pass


class NoProgress(RefinementError):
    pass


class TruncationExceeded(RefinementError):
    pass


@dataclass(frozen=True)
class Valuation:
    """``Finite(n)`` or ``AboveTrunc(N)`` (every known coefficient vanishes)."""

    order: int
    above: bool = False

    @property
    def is_finite(self) -> bool:
        return not self.above

    def at_least(self, n: int) -> bool:
        return self.order >= n

    def __str__(self):
        return f"AboveTrunc({self.order})" if self.above else f"Finite({self.order})"


def Finite(n: int) -> Valuation:
    return Valuation(n)


def AboveTrunc(n: int) -> Valuation:
    return Valuation(n, above=True)


def _engine_of(c) -> str:
    return "approx" if isinstance(c, ApproxComplex) else "exact"


class TruncSeries:
    __slots__ = ("coeffs", "trunc", "engine")

    def __init__(self, coeffs: Mapping[int, object] | Iterable = (), trunc: int = DEFAULT_TRUNC, engine: str | None = None):
        if trunc < 1:
            raise ValueError("trunc_order must be positive")
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        raw = {}
        for e, c in items:
            if e < 0:
                raise ValueError("negative exponent")
            if e >= trunc:
                continue
            c = as_scalar(c)
            raw[e] = raw[e] + c if e in raw else c
        if engine is None:
            engine = "approx" if any(isinstance(c, ApproxComplex) for c in raw.values()) else "exact"
        if engine == "approx":
            raw = {e: ApproxComplex.coerce(c) for e, c in raw.items()}
        elif any(isinstance(c, ApproxComplex) for c in raw.values()):
            raise EngineMismatch("approximate coefficient in an exact series")
        self.coeffs = {e: raw[e] for e in sorted(raw) if not raw[e].is_zero()}
        self.trunc = trunc
        self.engine = engine

    @classmethod
    def _build(cls, raw: dict, trunc: int, engine: str) -> "TruncSeries":
        # internal: coefficients are already scalars of the right engine
        out = object.__new__(cls)
        out.coeffs = {e: raw[e] for e in sorted(raw) if e < trunc and not raw[e].is_zero()}
        out.trunc = trunc
        out.engine = engine
        return out

    # construction -----------------------------------------------------------
    @classmethod
    def monomial(cls, coeff, exponent: int, trunc: int = DEFAULT_TRUNC) -> "TruncSeries":
        return cls({exponent: coeff}, trunc)

    @classmethod
    def zero(cls, trunc: int = DEFAULT_TRUNC, engine: str = "exact") -> "TruncSeries":
        return cls({}, trunc, engine)

    def _check(self, other: "TruncSeries"):
        if self.engine != other.engine and self.coeffs and other.coeffs:
            raise EngineMismatch(f"{self.engine} vs {other.engine} series")

    def _result_engine(self, other):
        return "approx" if "approx" in (self.engine, other.engine) else "exact"

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, TruncSeries):
            other = TruncSeries({0: other}, self.trunc, self.engine)
        self._check(other)
        engine = self._result_engine(other)
        if self.engine != other.engine:
            return TruncSeries(dict(self.coeffs), self.trunc, engine) + TruncSeries(dict(other.coeffs), other.trunc, engine)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out[e] + c if e in out else c
        return TruncSeries._build(out, min(self.trunc, other.trunc), engine)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries._build({e: -c for e, c in self.coeffs.items()}, self.trunc, self.engine)

    def __sub__(self, other):
        if not isinstance(other, TruncSeries):
            other = TruncSeries({0: other}, self.trunc, self.engine)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        self._check(other)
        trunc = min(self.trunc + other.valuation().order, other.trunc + self.valuation().order)
        acc: dict = {}
        g = list(other.coeffs.items())
        for i, a in self.coeffs.items():
            if i + (g[0][0] if g else 0) >= trunc:
                break
            for j, b in g:
                e = i + j
                if e >= trunc:
                    break
                p = a * b
                acc[e] = acc[e] + p if e in acc else p
        if self.engine != other.engine:
            return TruncSeries(acc, trunc, "approx")
        return TruncSeries._build(acc, trunc, self.engine)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "TruncSeries":
        c = as_scalar(c)
        if isinstance(c, ApproxComplex) or self.engine == "approx":
            return TruncSeries({e: v * c for e, v in self.coeffs.items()}, self.trunc, "approx")
        return TruncSeries._build({e: v * c for e, v in self.coeffs.items()}, self.trunc, self.engine)

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by ``s**k``."""
        return TruncSeries._build({e + k: c for e, c in self.coeffs.items()}, self.trunc + k, self.engine)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a series")
        if k == 0:
            return TruncSeries({0: 1}, self.trunc, self.engine)
        result = self
        for _ in range(k - 1):
            result = result * self
        return result

    def conjugate(self) -> "TruncSeries":
        """Coefficientwise conjugate; equals the pointwise conjugate for real s."""
        return TruncSeries({e: c.conjugate() for e, c in self.coeffs.items()}, self.trunc, self.engine)

    def substitute_power(self, k: int) -> "TruncSeries":
        """Reparametrize ``s -> s**k``."""
        if k < 1:
            raise ValueError("k must be positive")
        return TruncSeries({e * k: c for e, c in self.coeffs.items()}, self.trunc * k, self.engine)

    def truncate(self, n: int) -> "TruncSeries":
        return TruncSeries(self.coeffs, min(self.trunc, n), self.engine)

    def with_trunc(self, n: int) -> "TruncSeries":
        return TruncSeries(self.coeffs, n, self.engine)

    def to_approx(self) -> "TruncSeries":
        return TruncSeries(self.coeffs, self.trunc, "approx")

    # inspection -------------------------------------------------------------
    def valuation(self) -> Valuation:
        for e in self.coeffs:
            return Finite(e)
        return AboveTrunc(self.trunc)

    def leading(self):
        for e, c in self.coeffs.items():
            return e, c
        raise Indeterminate(
            f"no nonzero coefficient below order {self.trunc}; raise trunc_order", 2 * self.trunc
        )

    def coefficient(self, e: int):
        if e >= self.trunc:
            raise Indeterminate(f"coefficient of s^{e} is beyond trunc order {self.trunc}", e + 1)
        return self.coeffs.get(e, ExactComplex(0) if self.engine == "exact" else ApproxComplex(0))

    @property
    def terms(self) -> list:
        return list(self.coeffs.items())

    def top_exponent(self) -> int:
        return max(self.coeffs, default=-1)

    def evaluate(self, s):
        s = ctx.mpf(s) if not isinstance(s, (ExactComplex, ApproxComplex)) else s.to_mpc()
        return sum((c.to_mpc() * s ** e for e, c in self.coeffs.items()), ctx.mpc(0))

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.trunc == other.trunc and self.coeffs == other.coeffs

    def __repr__(self):
        body = " + ".join(f"({c})*s^{e}" for e, c in self.coeffs.items()) or "0"
        return f"TruncSeries({body}, N={self.trunc})"


def series_add(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    return f + g


def series_mul(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    return f * g


def valuation(ts: TruncSeries) -> Valuation:
    return ts.valuation()


def leading(ts: TruncSeries):
    return ts.leading()


def vector_valuation(items) -> Valuation:
    """Minimum of component valuations; ``AboveTrunc`` only if every component is."""
    if isinstance(items, Arc):
        items = list(items.components.values())
    items = list(items)
    if not items:
        raise ValueError("empty vector")
    vals = [s.valuation() for s in items]
    finite = [v.order for v in vals if v.is_finite]
    if finite:
        m = min(finite)
        if any(not v.is_finite and v.order <= m for v in vals):
            raise Indeterminate("a component is unknown below the minimal finite valuation", 2 * m)
        return Finite(m)
    return AboveTrunc(min(v.order for v in vals))


def vector_leading(items: list[TruncSeries]) -> tuple[int, list]:
    """Minimal valuation and the coefficient vector at that exponent (zeros elsewhere)."""
    v = vector_valuation(items)
    if not v.is_finite:
        raise Indeterminate("all components vanish to the truncation order", 2 * v.order)
    vec = []
    for s in items:
        c = s.coeffs.get(v.order)
        vec.append(c if c is not None else None)
    zero = ApproxComplex(0) if any(isinstance(c, ApproxComplex) for c in vec if c is not None) else ExactComplex(0)
    return v.order, [zero if c is None else c for c in vec]


@dataclass(frozen=True)
class RefinementStep:
    value_order: int  # valuation of F o arc before the step
    deriv_order: int  # valuation of dF/dv o arc
    exponent: int  # exponent of the appended term
    coeff: object


@dataclass
class Arc:
    """One series per ambient variable, all in the same real parameter."""

    components: dict
    param: str = "s"
    history: tuple = field(default=(), compare=False)

    def __post_init__(self):
        self.components = dict(self.components)
        engines = {s.engine for s in self.components.values() if s.coeffs}
        if len(engines) > 1:
            self.components = {k: s.to_approx() for k, s in self.components.items()}

    @property
    def engine(self) -> str:
        return "approx" if any(s.engine == "approx" for s in self.components.values()) else "exact"

    @property
    def vars(self) -> tuple:
        return tuple(self.components)

    @property
    def trunc(self) -> int:
        return min(s.trunc for s in self.components.values())

    def __getitem__(self, var) -> TruncSeries:
        return self.components[var]

    def __contains__(self, var):
        return var in self.components

    def with_component(self, var: str, series: TruncSeries) -> "Arc":
        comps = dict(self.components)
        comps[var] = series
        return Arc(comps, self.param)

    def reparametrize(self, k: int) -> "Arc":
        return Arc({v: s.substitute_power(k) for v, s in self.components.items()}, self.param)

    def with_trunc(self, n: int) -> "Arc":
        return Arc({v: s.with_trunc(n) for v, s in self.components.items()}, self.param)

    def truncate(self, n: int) -> "Arc":
        """Forget every component's coefficients from order ``n`` on."""
        return Arc({v: s.truncate(n) for v, s in self.components.items()}, self.param, self.history)

    def to_approx(self) -> "Arc":
        return Arc({v: s.to_approx() for v, s in self.components.items()}, self.param, self.history)

    def point(self, s) -> dict:
        return {v: ApproxComplex(c.evaluate(s)) for v, c in self.components.items()}

    def __str__(self):
        parts = []
        for v, ser in self.components.items():
            body = " + ".join(f"({c})*{self.param}^{e}" for e, c in ser.coeffs.items()) or "0"
            parts.append(f"{v} = {body}")
        return "; ".join(parts)


class Composer:
    """Substitutes an arc into polynomials, caching component powers."""

    def __init__(self, arc: Arc):
        self.arc = arc
        self._powers: dict = {}

    def power(self, var: str, k: int) -> TruncSeries:
        cache = self._powers.setdefault(var, [None, self.arc[var]])
        while len(cache) <= k:
            cache.append(cache[-1] * self.arc[var])
        return cache[k]

    def __call__(self, p: MultiPoly) -> TruncSeries:
        arc = self.arc
        for v in p.vars:
            if v not in arc and p.involves(v):
                raise UnknownVariable(f"arc does not bind {v!r}")
        engine = arc.engine
        total = None
        for e, c in p.terms.items():
            term = None
            for v, k in zip(p.vars, e):
                if k:
                    pw = self.power(v, k)
                    term = pw if term is None else term * pw
            if term is None:
                # constants are known to every order
                term = TruncSeries({0: c}, EXACT_TRUNC, engine)
            else:
                term = term.scale(c)
            total = term if total is None else total + term
        if total is None:
            total = TruncSeries.zero(max(s.trunc for s in arc.components.values()), engine)
        if engine == "approx" and total.engine != "approx":
            total = total.to_approx()
        return total


def compose(p: MultiPoly, arc: Arc) -> TruncSeries:
    return Composer(arc)(p)


def series_from_poly(p: MultiPoly, trunc: int = DEFAULT_TRUNC) -> TruncSeries:
    if len(p.vars) != 1:
        raise ValueError("expected a polynomial in the arc parameter only")
    return TruncSeries({e[0]: c for e, c in p.terms.items()}, trunc)


def parse_arc(text: str, constants: Mapping[str, object] | None = None, param: str = "s", trunc: int = DEFAULT_TRUNC) -> Arc:
    """Parse ``x = s^8; y = a*s^5; ...`` with named constants bound to numbers."""
    comps = {}
    offset = 0
    for piece in text.split(";"):
        if not piece.strip():
            offset += len(piece) + 1
            continue
        if "=" not in piece:
            from .algebra import PolynomialSyntaxError

            raise PolynomialSyntaxError("expected 'var = expression'", offset, text)
        name, expr = piece.split("=", 1)
        name = name.strip()
        if not name.isidentifier():
            from .algebra import PolynomialSyntaxError

            raise PolynomialSyntaxError(f"bad component name {name!r}", offset, text)
        try:
            poly = parse_polynomial(expr, [param], constants)
        except Exception as exc:
            pos = getattr(exc, "position", None)
            if pos is not None:
                from .algebra import PolynomialSyntaxError

                raise PolynomialSyntaxError(str(exc).rsplit(" at position", 1)[0], offset + len(name) + 2 + pos, text) from None
            raise
        ser = series_from_poly(poly, trunc)
        if 0 in ser.coeffs:
            raise ValueError(f"component {name} does not vanish at {param}=0")
        comps[name] = ser
        offset += len(piece) + 1
    if not comps:
        raise ValueError("empty arc")
    return Arc(comps, param)


def _taylor_polys(F: MultiPoly, var: str) -> list[MultiPoly]:
    """``(1/k!) d^k F / d var^k`` for k = 0..deg."""
    out = [F]
    cur = F
    for k in range(1, F.degree_in(var) + 1):
        cur = cur.differentiate(var)
        out.append(cur.scale(ExactComplex(1) / _fact(k)))
    return out


def _fact(k):
    r = 1
    for i in range(2, k + 1):
        r *= i
    return r


def refine_onto_hypersurface(
    F: MultiPoly, arc: Arc, solve_var: str, target_order: int, max_steps: int = 5000
) -> Arc:
    """Push ``arc`` onto ``F = 0`` by appending terms to ``solve_var``.

    Each step appends ``-lead(F o arc)/leadcoeff(dF/dv o arc) * s^(V - w)``.
    The Taylor coefficients ``D_k = (1/k!) d^kF/dv^k o arc`` are updated in
    place after each step (exact polynomial identity), so no recomposition
    is needed.  Returns an arc with ``val(F o arc) >= target_order``; the
    solved component is marked reliable up to ``V_final - w``.
    """
    if solve_var not in arc:
        raise UnknownVariable(solve_var)
    comp = Composer(arc)
    D = [comp(q) for q in _taylor_polys(F, solve_var)]
    if len(D) < 2:
        raise NotTransverse(f"F does not depend on {solve_var}")
    if D[0].trunc < target_order:
        raise TruncationExceeded(
            f"F o arc is only known below order {D[0].trunc} < target {target_order}"
        )
    if len(D) == 2:
        return _refine_linear(arc, solve_var, D[0], D[1], target_order, max_steps)
    series = arc[solve_var]
    history = list(arc.history)
    last_exp = None
    w = None
    for _ in range(max_steps):
        V = D[0].valuation()
        if V.order >= target_order:
            break
        if not V.is_finite:
            raise TruncationExceeded(f"F o arc unknown beyond order {V.order} < target {target_order}")
        dv = D[1].valuation()
        if not dv.is_finite:
            raise NotTransverse(f"dF/d{solve_var} o arc vanishes to the truncation order")
        w = dv.order
        E = V.order - w
        if E <= 0:
            raise NotTransverse(f"val(F o arc) = {V.order} does not exceed val(dF/d{solve_var} o arc) = {w}")
        if last_exp is not None and E <= last_exp:
            raise NoProgress(f"correction exponent {E} did not increase (previous {last_exp})")
        lc = D[1].coeffs[w]
        c = -(D[0].coeffs[V.order] / lc)
        if E >= series.trunc:
            raise TruncationExceeded(f"correction at s^{E} lies beyond the {solve_var} component's order {series.trunc}")
        history.append(RefinementStep(V.order, w, E, c))
        last_exp = E
        series = series + TruncSeries({E: c}, series.trunc, series.engine)
        deg = len(D) - 1
        powers = [None, TruncSeries({E: c}, EXACT_TRUNC, D[0].engine)]
        for j in range(2, deg + 1):
            powers.append(powers[-1] * powers[1])
        newD = []
        for k in range(deg + 1):
            acc = D[k]
            for j in range(1, deg - k + 1):
                if D[k + j].coeffs:
                    term = D[k + j] * powers[j]
                    b = comb(k + j, j)
                    acc = acc + (term if b == 1 else term.scale(b))
            newD.append(acc)
        D = newD
    else:
        raise NoProgress(f"no convergence after {max_steps} steps")
    if w is None:
        return arc
    final = D[0].valuation().order
    series = series.with_trunc(min(series.trunc, final - w))
    out = arc.with_component(solve_var, series)
    out.history = tuple(history)
    return out


def _refine_linear(arc: Arc, solve_var: str, D0: TruncSeries, D1: TruncSeries, target_order: int, max_steps: int) -> Arc:
    """Same iteration as above when ``F`` is affine in the solved variable:
    ``D1`` never changes and ``D0`` is updated in place."""
    series = arc[solve_var]
    history = list(arc.history)
    dv = D1.valuation()
    resid = dict(D0.coeffs)
    n0 = D0.trunc
    added: dict = {}
    last_exp = None
    w = None
    v = 0
    for _ in range(max_steps):
        while v < n0 and (v not in resid or resid[v].is_zero()):
            resid.pop(v, None)
            v += 1
        if v >= target_order:
            break
        if v >= n0:
            raise TruncationExceeded(f"F o arc unknown beyond order {n0} < target {target_order}")
        if not dv.is_finite:
            raise NotTransverse(f"dF/d{solve_var} o arc vanishes to the truncation order")
        w = dv.order
        E = v - w
        if E <= 0:
            raise NotTransverse(f"val(F o arc) = {v} does not exceed val(dF/d{solve_var} o arc) = {w}")
        if last_exp is not None and E <= last_exp:
            raise NoProgress(f"correction exponent {E} did not increase (previous {last_exp})")
        if E >= series.trunc:
            raise TruncationExceeded(f"correction at s^{E} lies beyond the {solve_var} component's order {series.trunc}")
        c = -(resid[v] / D1.coeffs[w])
        history.append(RefinementStep(v, w, E, c))
        last_exp = E
        added[E] = c
        n0 = min(n0, D1.trunc + E)
        for e, d in D1.coeffs.items():
            k = e + E
            if k >= n0:
                break
            resid[k] = resid[k] + c * d if k in resid else c * d
    else:
        raise NoProgress(f"no convergence after {max_steps} steps")
    if w is None:
        return arc
    merged = dict(series.coeffs)
    for e, c in added.items():
        merged[e] = merged[e] + c if e in merged else c
    out_series = TruncSeries(merged, min(series.trunc, v - w), series.engine)
    out = arc.with_component(solve_var, out_series)
    out.history = tuple(history)
    return out
