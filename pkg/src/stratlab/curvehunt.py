"""Weak-Whitney failure curves of families ``x^p + t*x*y^q + y^r*z + z^k``.

A failure arc starts as ``(s^nx, a*s^m, b*s^m, c*s^nt)``.  Three valuation
constraints fix the exponents; the vanishing of the leading terms of ``F_x``
and of ``F`` fixes ``c`` and ``b`` in terms of ``a``; and asking the secant and
normal leading directions to be complex-proportional (so that the Hermitian
quotient tends to 1) leaves ``a^(2r+2) = (p-1)(r(p-1) - pq)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .algebra import ApproxComplex, ExactComplex, MultiPoly, PolarRoot, nth_roots, parse_polynomial
from .regularity import ArcAnalysis, RegularityReport, analyze_arc
from .series import Arc, Indeterminate, MAX_TRUNC, TruncSeries, refine_onto_hypersurface


@dataclass(frozen=True)
class BSFamilyShape:
    p: int
    q: int
    r: int
    k: int

    def __post_init__(self):
        if min(self.p, self.q, self.r, self.k) < 1:
            raise ValueError("shape exponents must be positive")

    @classmethod
    def alpha(cls, alpha: int) -> "BSFamilyShape":
        """The ``(3, alpha, beta, 3 alpha)`` member with ``3 alpha = 2 beta + 1``."""
        if alpha < 3 or alpha % 2 == 0:
            raise ValueError("alpha must be odd and at least 3")
        return cls(3, alpha, (3 * alpha - 1) // 2, 3 * alpha)

    def polynomial(self, vars=("x", "y", "z", "t")) -> MultiPoly:
        x, y, z, t = vars
        return parse_polynomial(f"{x}^{self.p} + {t}*{x}*{y}^{self.q} + {y}^{self.r}*{z} + {z}^{self.k}", list(vars))

    @property
    def root_rhs(self) -> int:
        return (self.p - 1) * (self.r * (self.p - 1) - self.p * self.q)

    @property
    def root_degree(self) -> int:
        return 2 * self.r + 2

    def __str__(self):
        return f"({self.p},{self.q},{self.r},{self.k})"


@dataclass(frozen=True, order=True)
class ExponentPattern:
    nx: int
    ny: int
    nz: int
    nt: int

    def satisfies(self, shape: BSFamilyShape) -> bool:
        return (
            self.nx > self.ny == self.nz > self.nt > 0
            and self.nx + self.nt == (shape.r - shape.q) * self.ny + self.nz
            and (shape.p - 1) * self.nx == self.nt + shape.q * self.ny
        )

    def scaled(self, k: int) -> "ExponentPattern":
        return ExponentPattern(k * self.nx, k * self.ny, k * self.nz, k * self.nt)

    def primitive(self) -> "ExponentPattern":
        g = gcd(self.nx, self.ny, self.nz, self.nt)
        return ExponentPattern(self.nx // g, self.ny // g, self.nz // g, self.nt // g)

    def as_tuple(self):
        return (self.nx, self.ny, self.nz, self.nt)

    def __str__(self):
        return "(" + ",".join(map(str, self.as_tuple())) + ")"


def solve_exponent_pattern(shape: BSFamilyShape, bound: int = 60) -> list[ExponentPattern]:
    """Primitive exponent 4-tuples with entries <= bound meeting the three constraints.

    ``nt`` and ``nx`` are determined by ``(ny, nz)`` through the two linear
    constraints, so the scan over the bounded box is exhaustive.
    """
    if bound < 4:
        return []
    found = set()
    for ny in range(1, bound + 1):
        nz = ny
        # nx + nt = (r - q) ny + nz and (p - 1) nx - nt = q ny
        total = (shape.r - shape.q) * ny + nz
        num = total + shape.q * ny
        if num % shape.p:
            continue
        nx = num // shape.p
        nt = total - nx
        pat = ExponentPattern(nx, ny, nz, nt)
        if nx <= bound and nt >= 1 and pat.satisfies(shape):
            found.add(pat.primitive())
    return sorted(found)


@dataclass(frozen=True)
class CoefficientRule:
    """Closed forms ``c = -p/a^q``, ``b = (p-1)/a^r``, ``a^(2r+2) = rhs``."""

    shape: BSFamilyShape

    def c(self, a):
        return -ExactComplex(self.shape.p) / a**self.shape.q if isinstance(a, ExactComplex) else ApproxComplex(-self.shape.p) / a**self.shape.q

    def b(self, a):
        return ExactComplex(self.shape.p - 1) / a**self.shape.r if isinstance(a, ExactComplex) else ApproxComplex(self.shape.p - 1) / a**self.shape.r

    @property
    def root_degree(self) -> int:
        return self.shape.root_degree

    @property
    def root_rhs(self) -> int:
        return self.shape.root_rhs

    def describe(self) -> str:
        s = self.shape
        return f"c = -{s.p}/a^{s.q}, b = {s.p - 1}/a^{s.r}, a^{s.root_degree} = {s.root_rhs}"


class ShapeMismatch(ValueError):
    pass


def _initial_arc(shape: BSFamilyShape, pattern: ExponentPattern, a, b, c, trunc: int) -> Arc:
    one = ApproxComplex(1) if isinstance(a, ApproxComplex) else ExactComplex(1)
    return Arc(
        {
            "x": TruncSeries({pattern.nx: one}, trunc),
            "y": TruncSeries({pattern.ny: a}, trunc),
            "z": TruncSeries({pattern.nz: b}, trunc),
            "t": TruncSeries({pattern.nt: c}, trunc),
        }
    )


def validate_rule(shape: BSFamilyShape, samples: Sequence = (2, Fraction(-1, 3), ExactComplex(1, 2))) -> None:
    """Check the closed forms against exact leading-term expansion at a few rational ``a``.

    For each sample ``a`` the initial arc must kill the leading terms of ``F``
    and ``F_x``; the leading secant direction must be ``(0 : a^(r+1) : p-1)``
    and the leading normal ``(0 : D : a^(r+1))`` with ``D = r(p-1) - pq``, so
    that their proportionality is exactly ``a^(2r+2) = (p-1) D``.
    """
    pats = solve_exponent_pattern(shape)
    if not pats:
        raise ShapeMismatch(f"shape {shape} admits no exponent pattern")
    pat = pats[0]
    F = shape.polynomial()
    rule = CoefficientRule(shape)
    for a in samples:
        a = a if isinstance(a, ExactComplex) else ExactComplex(a)
        arc = _initial_arc(shape, pat, a, rule.b(a), rule.c(a), 4 * shape.p * pat.nx)
        an = ArcAnalysis(F, arc, "xyz", "t")
        m = pat.ny
        if an.value.valuation().order <= shape.p * pat.nx:
            raise ShapeMismatch("b(a) does not cancel the leading term of F")
        fx = an.grad_x[0].valuation().order
        if fx <= (shape.p - 1) * pat.nx:
            raise ShapeMismatch("c(a) does not cancel the leading term of F_x")
        A = a ** (shape.r + 1)
        D = ExactComplex(shape.r * (shape.p - 1) - shape.p * shape.q)
        sec = [an.x_vec[i].coefficient(m) for i in range(3)]
        if sec != [ExactComplex(0), a, rule.b(a)] or sec[2] * A != sec[1] * (shape.p - 1):
            raise ShapeMismatch("secant direction differs from (0 : a^(r+1) : p-1)")
        nrm_order = shape.r * m
        nrm = [g.coefficient(nrm_order) for g in an.grad_x]
        if any(g.valuation().order < nrm_order for g in an.grad_x) or nrm[0] != ExactComplex(0):
            raise ShapeMismatch("normal leading order differs from r*m")
        if nrm[1] * A != nrm[2] * D:
            raise ShapeMismatch("normal direction differs from (0 : D : a^(r+1))")


def solve_coefficients(shape: BSFamilyShape) -> CoefficientRule:
    validate_rule(shape)
    return CoefficientRule(shape)


@dataclass(frozen=True)
class FailureCurve:
    shape: BSFamilyShape
    pattern: ExponentPattern
    root: PolarRoot
    b: ApproxComplex
    c: ApproxComplex
    root_residual: float
    leading_residual: float

    @property
    def a(self) -> ApproxComplex:
        return self.root.value

    @property
    def index(self) -> int:
        return self.root.index

    def arc(self, trunc: int = 200) -> Arc:
        return _initial_arc(self.shape, self.pattern, self.a, self.b, self.c, trunc)

    def initial_terms(self) -> str:
        p = self.pattern
        return f"(s^{p.nx}, a*s^{p.ny}, b*s^{p.nz}, c*s^{p.nt})"


def enumerate_failure_curves(shape: BSFamilyShape) -> list[FailureCurve]:
    rule = solve_coefficients(shape)
    pattern = solve_exponent_pattern(shape)[0]
    rhs = ExactComplex(shape.root_rhs)
    out = []
    for root in nth_roots(rhs, shape.root_degree):
        a = root.value
        b, c = rule.b(a), rule.c(a)
        resid = float(abs(a.value**shape.root_degree - rhs.to_mpc()) / abs(rhs.to_mpc()))
        lead = float(abs(1 + c.value * a.value**shape.q + b.value * a.value**shape.r))
        out.append(FailureCurve(shape, pattern, root, b, c, resid, lead))
    return out


def verify_curve(
    F: MultiPoly,
    curve: FailureCurve,
    target_order: int = 130,
    s_samples: Sequence = ("1e-1", "1e-2", "1e-3", "1e-4", "1e-5", "1e-6"),
    trunc: int | None = None,
) -> RegularityReport:
    """Refine the curve onto ``F = 0`` (solving for z) and analyse it.

    On an ``Indeterminate`` outcome the truncation order is doubled up to
    the global cap before giving up.
    """
    if target_order < 100:
        raise ValueError("target_order must be at least 100")
    if F != curve.shape.polynomial(F.vars):
        raise ShapeMismatch("F does not match the curve's family shape")
    n = trunc or max(200, target_order + 40)
    while True:
        try:
            arc = refine_onto_hypersurface(F, curve.arc(n), "z", target_order)
            report = analyze_arc(F, arc, ("x", "y", "z"), "t", s_samples=s_samples, guard_order=min(120, target_order))
            if report.indeterminate:
                raise Indeterminate("limit needs more terms", report.required_trunc)
            report.check_consistency()
            return report
        except Indeterminate as exc:
            if n >= MAX_TRUNC:
                raise
            n = min(MAX_TRUNC, max(2 * n, exc.required_trunc or 0))
            target_order = max(target_order, n - 40)
