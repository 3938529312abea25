"""Seeded random arcs lying on a hypersurface.

All components but one are drawn at random; the remaining one starts at a
root read off a simple edge of the Newton polygon of ``F`` viewed as a
polynomial in that variable, and is then lifted with the Newton step of
``refine_onto_hypersurface``.  Only edges of horizontal length one are used,
so the starting root is a Gaussian rational and the lift is transverse.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from ..algebra import ExactComplex, MultiPoly
from ..series import Arc, Composer, RefinementError, TruncSeries


class SamplingFailed(RuntimeError):
    pass


def _coeff(rng: random.Random) -> ExactComplex:
    while True:
        re = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
        im = Fraction(rng.randint(-2, 2), rng.randint(1, 3)) if rng.random() < 0.5 else Fraction(0)
        if re or im:
            return ExactComplex(re, im)


def random_component(rng: random.Random, lo: int, hi: int, trunc: int) -> TruncSeries:
    e = rng.randint(lo, hi)
    terms = {e: _coeff(rng)}
    for _ in range(rng.randint(0, 2)):
        terms[e + rng.randint(1, 4)] = _coeff(rng)
    return TruncSeries(terms, trunc)


def simple_edges(points: dict[int, int]) -> list[tuple[int, int]]:
    """Lower-hull edges ``(j, j+1)`` with every other point strictly above the
    edge's line and a positive slope exponent ``v_j - v_{j+1}``."""
    out = []
    for j in sorted(points):
        if j + 1 not in points:
            continue
        vj, vk = points[j], points[j + 1]
        e = vj - vk
        if e <= 0:
            continue
        # line through (j, vj) and (j+1, vk): v(i) = vj - e*(i - j)
        if all(v > vj - e * (i - j) for i, v in points.items() if i not in (j, j + 1)):
            out.append((j, j + 1))
    return out


def _order_bound(p: MultiPoly, orders: dict) -> tuple[int, bool]:
    """Least monomial order of ``p`` along an arc with the given component
    valuations, and whether that least order is attained by a single term
    (in which case it is the exact valuation)."""
    degs = sorted(sum(k * orders[v] for v, k in zip(p.vars, e) if k) for e in p.terms)
    return degs[0], len(degs) == 1 or degs[1] > degs[0]


def _may_have_edge(coeff_polys: dict, orders: dict) -> bool:
    bounds = {j: _order_bound(q, orders) for j, q in coeff_polys.items() if not q.is_zero()}
    if not all(exact for _, exact in bounds.values()):
        return True  # cancellation possible; decide after composing
    return bool(simple_edges({j: b for j, (b, _) in bounds.items()}))


def cheapest_variable(F: MultiPoly, candidates: Sequence[str]) -> str:
    return min(candidates, key=lambda v: (F.degree_in(v), v))


def random_arc_on(
    F: MultiPoly,
    rng: random.Random,
    solve_var: str,
    trunc: int = 160,
    target_order: int = 130,
    exponent_range: dict | None = None,
    attempts: int = 400,
) -> Arc:
    """A random arc with ``val(F o arc) >= target_order``.

    ``exponent_range`` maps variables to ``(lo, hi)`` bounds for the leading
    exponent of their random component (default ``(1, 12)``).
    """
    ranges = exponent_range or {}
    others = [v for v in F.vars if v != solve_var]
    coeff_polys = {j: F.coefficient_in(solve_var, j) for j in range(F.degree_in(solve_var) + 1)}
    for _ in range(attempts):
        comps = {v: random_component(rng, *ranges.get(v, (1, 12)), trunc) for v in others}
        comps[solve_var] = TruncSeries({}, trunc)
        orders = {v: comps[v].valuation().order for v in others}
        orders[solve_var] = 0
        if not _may_have_edge(coeff_polys, orders):
            continue
        arc = Arc({v: comps[v] for v in F.vars})
        comp = Composer(arc)
        series = {j: comp(p) for j, p in coeff_polys.items() if not p.is_zero()}
        points = {j: s.valuation().order for j, s in series.items() if s.valuation().is_finite}
        edges = simple_edges(points)
        if not edges:
            continue
        j, k = edges[rng.randrange(len(edges))]
        e = points[j] - points[k]
        if e >= trunc:
            continue
        root = -(series[j].coeffs[points[j]] / series[k].coeffs[points[k]])
        start = arc.with_component(solve_var, TruncSeries({e: root}, trunc))
        try:
            from ..series import refine_onto_hypersurface

            return refine_onto_hypersurface(F, start, solve_var, target_order)
        except RefinementError:
            continue
    raise SamplingFailed(f"no arc on F = 0 found after {attempts} attempts")


def arc_valuations(arc: Arc, vars: Sequence[str]) -> dict[str, int]:
    return {v: arc[v].valuation().order for v in vars}
