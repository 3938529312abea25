"""Check suites behind ``strat-lab verify-paper``.

Each check returns a ``CheckResult``; a suite is a list of them.  Random arcs
come from a ``random.Random`` seeded by the family id, so every run sees the
same arcs.
"""

from __future__ import annotations

import random
import zlib
from dataclasses import dataclass, field
from functools import lru_cache

from .algebra import WeightSystem, ctx, is_quasihomogeneous, milnor_orlik
from .corpus import FamilyRecord, load_corpus, spiral_beta
from .curvehunt import (
    BSFamilyShape,
    enumerate_failure_curves,
    solve_exponent_pattern,
    verify_curve,
)
from .regularity import (
    Kind,
    Pairing,
    lemma2_check,
    limit_ratio_a,
    limit_ratio_delta,
    log_spiral,
    probe_ring_max,
    root_spiral,
    spiral_angle,
)
from .regularity.limits import with_escalation
from .regularity.sampling import random_arc_on

SUITES = ("milnor", "curves", "limits", "lemma2", "real-examples")
BS_FAMILIES = ("bs364", "bs56", "bs_alpha5", "bs_alpha7")
CURVE_FAMILIES = ("bs364", "bs56")


@dataclass
class CheckResult:
    criterion: int
    name: str
    passed: bool
    detail: str = ""
    traces: dict = field(default_factory=dict, repr=False)  # file name -> list of CSV rows

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] AC{self.criterion} {self.name}: {self.detail}"


@lru_cache(maxsize=None)
def corpus() -> dict[str, FamilyRecord]:
    return load_corpus()


def _seed(name: str, salt: int = 0) -> int:
    return zlib.crc32(name.encode()) ^ salt


# --- Milnor numbers ---------------------------------------------------------------


def check_milnor() -> list[CheckResult]:
    out = []
    cases = [((3, 2, 1), 15, 364), ((3, 2, 1), 9, 56)]
    for alpha in (3, 5, 7, 9):
        cases.append(((alpha, 2, 1), 3 * alpha, (3 * alpha - 1) * (3 * alpha - 2)))
    bad = []
    for ws, d, mu in cases:
        got = milnor_orlik(WeightSystem(("x", "y", "z"), ws, d))
        if got != mu:
            bad.append(f"{ws};{d} -> {got} != {mu}")
    for rec in corpus().values():
        if rec.weights is None:
            continue
        found = is_quasihomogeneous(rec.polynomial, rec.param)
        if found != rec.weights:
            bad.append(f"{rec.id}: weights {found} != {rec.weights}")
    if is_quasihomogeneous(corpus()["artal166"].polynomial, "t") is not None:
        bad.append("artal166 reported quasihomogeneous")
    detail = "; ".join(bad) if bad else "364, 56 and (3a-1)(3a-2) for a = 3,5,7,9 exact; corpus weights recovered"
    out.append(CheckResult(1, "Milnor numbers", not bad, detail))
    return out


# --- failure curves -----------------------------------------------------------------


def _shape(fid: str) -> BSFamilyShape:
    return corpus()[fid].shape


def bilinear_closed_form(shape: BSFamilyShape):
    """Leading-term bilinear quotient on a failure curve: secant (A, p-1), normal (D, A)
    with ``|A|^2 = |(p-1) D|``."""
    D = shape.r * (shape.p - 1) - shape.p * shape.q
    P = shape.p - 1
    M = abs(P * D)
    return ctx.sqrt(M) * abs(D + P) / (ctx.sqrt(M + P * P) * ctx.sqrt(D * D + M))


@lru_cache(maxsize=None)
def verified_curves(fid: str):
    shape = _shape(fid)
    F = corpus()[fid].polynomial
    return tuple((c, verify_curve(F, c)) for c in enumerate_failure_curves(shape))


def check_patterns() -> CheckResult:
    expect = {(5, 6, 7, 15): [(8, 5, 5, 2)], (3, 3, 4, 9): [(5, 3, 3, 1)]}
    bad = []
    for shape, pats in expect.items():
        got = [p.as_tuple() for p in solve_exponent_pattern(BSFamilyShape(*shape), 60)]
        if got != pats:
            bad.append(f"{shape}: {got}")
    return CheckResult(2, "exponent patterns", not bad, "; ".join(bad) or "(8,5,5,2) and (5,3,3,1) only, bound 60")


def check_enumeration() -> CheckResult:
    bad = []
    worst = 0.0
    for fid, n, rhs in (("bs364", 16, -8), ("bs56", 10, -2)):
        curves = enumerate_failure_curves(_shape(fid))
        if len(curves) != n or _shape(fid).root_rhs != rhs:
            bad.append(f"{fid}: {len(curves)} curves, rhs {_shape(fid).root_rhs}")
        roots = {complex(c.a.value) for c in curves}
        if len(roots) != n:
            bad.append(f"{fid}: repeated roots")
        for c in curves:
            worst = max(worst, c.root_residual)
            if c.root_residual >= 1e-10 or c.leading_residual >= 1e-10:
                bad.append(f"{fid} curve {c.index}: residual {c.root_residual:.3g}")
    return CheckResult(3, "curve enumeration", not bad, "; ".join(bad) or f"16 curves a^16=-8, 10 curves a^10=-2, max residual {worst:.2g}")


def _trace(report) -> list[list[str]]:
    from .regularity import format_row

    return [format_row(r) for r in report.rows]


def _row_at(report, s: str):
    target = ctx.mpf(s)
    for r in report.rows:
        if abs(r["s"] - target) <= target * 1e-12:
            return r
    raise KeyError(s)


def check_hermitian() -> CheckResult:
    bad, traces, n = [], {}, 0
    for fid in CURVE_FAMILIES:
        for c, rep in verified_curves(fid):
            n += 1
            traces[f"trace_{fid}_curve{c.index:02d}.csv"] = _trace(rep)
            h = rep.verdict_bpi[Pairing.HERMITIAN]
            if h.kind is not Kind.FINITE or abs(h.value - 1) > 1e-9:
                bad.append(f"{fid}#{c.index}: exact {h}")
                continue
            num = _row_at(rep, "1e-3")["ratio_delta_hermitian"]
            if abs(num - 1) > 0.01:
                bad.append(f"{fid}#{c.index}: numeric {ctx.nstr(num, 8)}")
    return CheckResult(4, "Hermitian failure limits", not bad, "; ".join(bad) or f"{n} curves: exact limit 1 within 1e-9, s=1e-3 within 1%", traces)


def check_bilinear() -> CheckResult:
    bad, vals = [], {}
    for fid in CURVE_FAMILIES:
        expect = bilinear_closed_form(_shape(fid))
        vals[fid] = expect
        for c, rep in verified_curves(fid):
            b = rep.verdict_bpi[Pairing.BILINEAR]
            if fid == "bs364":
                a16 = c.a.value**16
                alt = abs(4 + a16) / (4 + abs(c.a.value) ** 16)
                if abs(alt - expect) > 1e-9:
                    bad.append(f"bs364#{c.index}: |4+a^16|/(4+|a|^16) = {ctx.nstr(alt, 8)}")
            if b.kind is not Kind.FINITE or abs(b.value - expect) > 1e-9:
                bad.append(f"{fid}#{c.index}: exact {b}")
                continue
            num = _row_at(rep, "1e-3")["ratio_delta_bilinear"]
            if abs(num - expect) > 0.01 * expect:
                bad.append(f"{fid}#{c.index}: numeric {ctx.nstr(num, 8)}")
    shown = ", ".join(f"{k} {ctx.nstr(v, 10)}" for k, v in vals.items())
    return CheckResult(5, "bilinear cross-check", not bad, "; ".join(bad) or f"exact and s=1e-3 agree: {shown}")


def check_directions() -> CheckResult:
    bad = []
    curves = verified_curves("bs364")
    for c, rep in curves:
        a8 = c.a.value**8
        if rep.secant is None or not rep.secant.matches([0, a8, 4], 1e-9):
            bad.append(f"#{c.index}: secant {rep.secant}")
        if rep.normal is None or not rep.normal.matches([0, -2, a8], 1e-9):
            bad.append(f"#{c.index}: normal {rep.normal}")
    return CheckResult(9, "secant/normal directions", not bad, "; ".join(bad) or f"{len(curves)} curves: (0:a^8:4) and (0:-2:a^8) within 1e-9")


# --- random arcs --------------------------------------------------------------------


_ARC_STREAMS: dict = {}


def random_arcs(fid: str, count: int) -> tuple:
    """First ``count`` arcs of the family's seeded stream of arcs on ``F = 0``
    (t solved, so F is affine in it).  The stream is cached and only grows."""
    rec = corpus()[fid]
    rng, arcs = _ARC_STREAMS.setdefault(fid, (random.Random(_seed(fid)), []))
    while len(arcs) < count:
        arcs.append(random_arc_on(rec.polynomial, rng, rec.param))
    return tuple(arcs[:count])


def resume_violated(shape: BSFamilyShape, arc) -> bool:
    from .curvehunt import ExponentPattern

    v = {k: arc[k].valuation().order for k in "xyzt"}
    return not ExponentPattern(v["x"], v["y"], v["z"], v["t"]).satisfies(shape)


def check_condition_a(per_family: int = 50) -> CheckResult:
    bad, n = [], 0
    for fid in CURVE_FAMILIES:
        for c, rep in verified_curves(fid):
            n += 1
            if rep.verdict_a.kind is not Kind.ZERO:
                bad.append(f"{fid} curve {c.index}: {rep.verdict_a}")
    for fid in BS_FAMILIES:
        rec = corpus()[fid]
        for i, arc in enumerate(random_arcs(fid, per_family)):
            n += 1
            out = with_escalation(lambda g: limit_ratio_a(rec.polynomial, g, rec.vars, rec.param), arc)
            if out.kind is not Kind.ZERO:
                bad.append(f"{fid} arc {i}: {out}")
    return CheckResult(6, "condition (a)", not bad, "; ".join(bad[:5]) or f"{n} arcs, all Zero")


def check_lemma2(per_family: int = 30) -> CheckResult:
    bad, n = [], 0
    for fid in BS_FAMILIES:
        rec = corpus()[fid]
        for i, arc in enumerate(random_arcs(fid, per_family)):
            n += 1
            r = lemma2_check(rec.polynomial, arc, rec.vars, rec.param, guard_order=120)
            if not r.agree:
                bad.append(f"{fid} arc {i}: {r.table}")
    return CheckResult(7, "valuation-inequality equivalence", not bad and n >= 100, "; ".join(bad[:5]) or f"{n} arcs, ineq1 = ineq2 in all")


def check_b_elsewhere(per_family: int = 200, pool: int = 400) -> CheckResult:
    bad, counts, high_t = [], {}, 0
    for fid in BS_FAMILIES:
        rec = corpus()[fid]
        F = rec.polynomial
        kept = 0
        i = -1
        while kept < per_family and i + 1 < pool:
            i += 1
            arc = random_arcs(fid, i + 1)[i]
            if not resume_violated(rec.shape, arc):
                continue
            kept += 1
            vt = arc["t"].valuation().order
            vX = min(arc[v].valuation().order for v in rec.vars)
            high_t += vt >= vX
            out = with_escalation(lambda g: limit_ratio_delta(F, g, rec.vars, Pairing.BILINEAR, rec.param), arc)
            if out.kind is not Kind.ZERO:
                bad.append(f"{fid} arc {i}: {out} vals {[arc[v].valuation().order for v in 'xyzt']}")
        counts[fid] = kept
        if kept < per_family:
            bad.append(f"{fid}: only {kept} violating arcs in the pool")
    detail = "; ".join(bad[:5]) or f"{sum(counts.values())} violating arcs ({high_t} with nu(t) >= nu(X)), all Zero"
    return CheckResult(8, "(b) off the failure pattern", not bad, detail)


# --- real examples ------------------------------------------------------------------


def check_real_examples(resolution: int = 64) -> CheckResult:
    bad, traces, notes = [], {}, []
    ex1 = corpus()["example1"]
    radii = ex1.floats("radii")
    lo, hi = ex1.floats("band_bpi")
    res1 = [probe_ring_max(ex1.polynomial, ex1.vars, ex1.param, r, resolution) for r in radii]
    traces["probe_example1.csv"] = [[f"{p.radius:.0e}", f"{p.max_a:.12g}", f"{p.max_bpi:.12g}"] for p in res1]
    if not res1[-1].max_a < ex1.floats("decay_a")[0] * res1[0].max_a:
        bad.append(f"example1 max_a {res1[0].max_a:.4g} -> {res1[-1].max_a:.4g} does not decay")
    for p in res1:
        if not lo <= p.max_bpi <= hi:
            bad.append(f"example1 max_bpi {p.max_bpi:.4g} at r={p.radius:g}")
    notes.append("ex1 bpi " + "/".join(f"{p.max_bpi:.3f}" for p in res1))
    ex2 = corpus()["example2"]
    res2 = [probe_ring_max(ex2.polynomial, ex2.vars, ex2.param, r, resolution) for r in ex2.floats("radii")]
    traces["probe_example2.csv"] = [[f"{p.radius:.0e}", f"{p.max_a:.12g}", f"{p.max_bpi:.12g}"] for p in res2]
    floor, below = ex2.floats("min_a")[0], ex2.floats("min_a_below")[0]
    for p in res2:
        if p.radius <= below and p.max_a < floor:
            bad.append(f"example2 max_a {p.max_a:.4g} at r={p.radius:g}")
    notes.append("ex2 a " + "/".join(f"{p.max_a:.3f}" for p in res2))
    ls = corpus()["logspiral"]
    beta = spiral_beta(ls)
    target = float(ctx.sin(beta))
    r = log_spiral(beta)
    sines = [spiral_angle(r, t) for t in ls.floats("samples")]
    traces["spiral_log.csv"] = [[f"{t:g}", f"{v:.15g}"] for t, v in zip(ls.floats("samples"), sines)]
    if len(sines) < 10 or any(abs(v - target) > 1e-9 for v in sines):
        bad.append(f"log spiral sines {sines}")
    rs = corpus()["sqrtspiral"]
    ts = rs.floats("samples")
    sq = [spiral_angle(root_spiral(), t) for t in ts]
    traces["spiral_sqrt.csv"] = [[f"{t:g}", f"{v:.15g}"] for t, v in zip(ts, sq)]
    if sq[ts.index(1e4)] < rs.floats("min_sine")[0]:
        bad.append(f"sqrt spiral sine {sq[-1]:.6g} at t=1e4")
    notes.append(f"log spiral sin {target:.6f}, sqrt spiral {sq[-1]:.5f}")
    return CheckResult(10, "real examples", not bad, "; ".join(bad) or ", ".join(notes), traces)


def run_suite(name: str) -> list[CheckResult]:
    if name == "milnor":
        return check_milnor()
    if name == "curves":
        return [check_patterns(), check_enumeration(), check_hermitian(), check_bilinear(), check_directions()]
    if name == "limits":
        return [check_condition_a(), check_b_elsewhere()]
    if name == "lemma2":
        return [check_lemma2()]
    if name == "real-examples":
        return [check_real_examples()]
    if name == "all":
        out = []
        for s in SUITES:
            out.extend(run_suite(s))
        return sorted(out, key=lambda r: r.criterion)
    raise KeyError(name)
