"""Quasihomogeneous weights and the Milnor number of weighted-homogeneous germs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm, prod

from .poly import MultiPoly, euler_defect


@dataclass(frozen=True)
class WeightSystem:
    vars: tuple[str, ...]
    weights: tuple[int, ...]
    degree: int
    param: str | None = None
    param_weight: int = 0

    def as_dict(self) -> dict[str, int]:
        d = dict(zip(self.vars, self.weights))
        if self.param is not None:
            d[self.param] = self.param_weight
        return d

    def certifies(self, p: MultiPoly) -> bool:
        """Euler identity ``sum w_i x_i dp/dx_i == d p`` holds exactly."""
        return euler_defect(p, self.as_dict(), self.degree).is_zero()

    def __str__(self):
        return "(" + ",".join(map(str, self.weights)) + f";{self.degree})"


class InvalidWeights(ValueError):
    pass


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    m = [r[:] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][f]
        basis.append(v)
    return basis


def _primitive(v: list[Fraction]) -> list[int]:
    den = lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints] if g else ints


def is_quasihomogeneous(p: MultiPoly, param_var: str | None = None, search_bound: int = 32) -> WeightSystem | None:
    """Find weights ``w`` (parameter weight 0) and degree ``d`` with every term of
    weighted degree ``d``, or ``None``.

    The exact linear system over the exponent vectors is solved first; a
    one-dimensional solution space gives the primitive weight vector.  When the
    system leaves freedom (e.g. a variable absent from ``p``) a bounded search
    returns the positive solution of least degree.
    """
    if p.is_zero():
        return None
    vars = tuple(v for v in p.vars if v != param_var)
    idx = [p.vars.index(v) for v in vars]
    exps = [[e[i] for i in idx] for e in p.terms]
    n = len(vars)
    rows = [[Fraction(k) for k in e] + [Fraction(-1)] for e in exps]
    basis = _nullspace(rows, n + 1)
    if not basis:
        return None
    if len(basis) == 1:
        v = _primitive(basis[0])
        if v[-1] < 0:
            v = [-x for x in v]
        if v[-1] <= 0 or any(x <= 0 for x in v[:-1]):
            return None
        return WeightSystem(vars, tuple(v[:-1]), v[-1], param_var)
    best = None
    for w in itertools.product(range(1, search_bound + 1), repeat=n):
        degs = {sum(a * b for a, b in zip(e, w)) for e in exps}
        if len(degs) == 1:
            d = degs.pop()
            g = gcd(d, *w)
            cand = (d // g, tuple(x // g for x in w))
            if best is None or cand < best:
                best = cand
    if best is None:
        return None
    return WeightSystem(vars, best[1], best[0], param_var)


def milnor_orlik(w: WeightSystem) -> int:
    """``prod (d - w_i) / w_i`` for an isolated weighted-homogeneous singularity."""
    if any(wi <= 0 for wi in w.weights):
        raise InvalidWeights(f"weights must be positive: {w}")
    if any(w.degree <= wi for wi in w.weights):
        raise InvalidWeights(f"degree must exceed every weight: {w}")
    mu = prod(Fraction(w.degree - wi, wi) for wi in w.weights)
    if mu.denominator != 1:
        raise InvalidWeights(f"Milnor-Orlik product {mu} is not an integer for {w}")
    return int(mu)
