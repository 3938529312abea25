from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..algebra import MultiPoly, ctx
from ..series import Arc, Indeterminate
from .limits import (
    ArcAnalysis,
    DirectionClass,
    Kind,
    Lemma2Record,
    LimitOutcome,
    Pairing,
    PreconditionError,
    lemma2_check,
    limit_direction,
    limit_ratio_a,
    limit_ratio_delta,
    numeric_ratios,
)

DEFAULT_SAMPLES = ("1e-1", "1e-2", "1e-3", "1e-4", "1e-5", "1e-6")
SINE_SLACK = 1e-12
ONE_TOL = 1e-9


class ConsistencyError(AssertionError):
    pass


@dataclass
class RegularityReport:
    verdict_a: LimitOutcome
    verdict_bpi: dict  # Pairing -> LimitOutcome
    secant: DirectionClass | None
    normal: DirectionClass | None
    lemma2: Lemma2Record | None
    rows: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def outcomes(self) -> list[LimitOutcome]:
        return [self.verdict_a, *self.verdict_bpi.values()]

    @property
    def indeterminate(self) -> bool:
        return any(o.kind is Kind.INDETERMINATE for o in self.outcomes)

    @property
    def required_trunc(self) -> int | None:
        need = [o.required_trunc for o in self.outcomes if o.kind is Kind.INDETERMINATE and o.required_trunc]
        return max(need) if need else None

    def delta_bound(self, pairing: Pairing) -> float:
        """Contribution of this arc to the bound estimate: 0 when (b^pi) holds."""
        o = self.verdict_bpi[pairing]
        return 0.0 if o.kind is Kind.ZERO else o.numeric

    @property
    def label(self) -> str:
        if self.indeterminate:
            return "indeterminate"
        if self.verdict_a.kind is not Kind.ZERO:
            return "(a) fails"
        if all(o.kind is Kind.ZERO for o in self.verdict_bpi.values()):
            return "Whitney (b) consistent"
        failing = [p.value for p, o in self.verdict_bpi.items() if o.kind is Kind.FINITE and o.numeric >= 1 - ONE_TOL]
        if failing:
            return "weak Whitney failure (" + ", ".join(failing) + ")"
        bound = max(self.delta_bound(p) for p in self.verdict_bpi)
        return f"(delta^pi) with bound {bound:.12g}"

    def check_consistency(self) -> None:
        for p, o in self.verdict_bpi.items():
            if o.kind is Kind.DIVERGENT:
                raise ConsistencyError(f"{p.value} sine quotient diverges")
            if o.kind is Kind.FINITE and o.numeric > 1 + SINE_SLACK:
                raise ConsistencyError(f"{p.value} sine quotient {o.numeric} exceeds 1")
            if o.kind is Kind.ZERO and self.delta_bound(p) != 0:
                raise ConsistencyError("(b^pi) holds but the bound contribution is nonzero")
        if self.lemma2 is not None and not self.lemma2.agree:
            raise ConsistencyError(f"valuation inequalities disagree: {self.lemma2.table}")

    def summary(self) -> dict:
        out = {
            "verdict_a": str(self.verdict_a),
            "label": self.label,
        }
        for p, o in self.verdict_bpi.items():
            out[f"verdict_bpi_{p.value}"] = str(o)
        out["secant"] = str(self.secant) if self.secant else "-"
        out["normal"] = str(self.normal) if self.normal else "-"
        if self.lemma2 is not None:
            out["lemma2"] = f"ineq1={self.lemma2.ineq1} ineq2={self.lemma2.ineq2} agree={self.lemma2.agree}"
            out.update({f"val_{k}": v for k, v in self.lemma2.table.items()})
        return out


def format_row(row: dict) -> list[str]:
    return [ctx.nstr(row[k], 15) for k in ("s", "ratio_a", "ratio_delta_bilinear", "ratio_delta_hermitian")]


def analyze_arc(
    F: MultiPoly,
    arc: Arc,
    x_vars: Sequence[str],
    t_var: str,
    s_samples: Sequence = DEFAULT_SAMPLES,
    guard_order: int = 120,
) -> RegularityReport:
    an = ArcAnalysis(F, arc, x_vars, t_var)
    va = limit_ratio_a(F, arc, x_vars, t_var, an)
    vb = {p: limit_ratio_delta(F, arc, x_vars, p, t_var, an) for p in Pairing}
    notes = []
    try:
        secant = limit_direction(an.x_vec)
    except Indeterminate:
        secant = None
        notes.append("secant direction unknown to the truncation order")
    try:
        normal = limit_direction(an.grad_x)
    except Indeterminate:
        normal = None
        notes.append("normal direction unknown to the truncation order")
    try:
        l2 = lemma2_check(F, arc, x_vars, t_var, guard_order, an)
    except PreconditionError as exc:
        l2 = None
        notes.append(f"valuation test skipped: {exc}")
    except Indeterminate as exc:
        l2 = None
        notes.append(f"valuation test indeterminate: {exc}")
    rows = [numeric_ratios(F, arc, x_vars, t_var, ctx.mpf(s)) for s in s_samples]
    return RegularityReport(va, vb, secant, normal, l2, rows, notes)
