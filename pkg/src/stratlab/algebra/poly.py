"""Sparse multivariate polynomials over Gaussian rationals."""

from __future__ import annotations

from typing import Iterable, Mapping

from .numbers import ApproxComplex, ExactComplex, as_scalar, ctx, settings


class UnknownVariable(KeyError):
    pass


def _is_zero(c) -> bool:
    return c.is_zero()


class MultiPoly:
    """Immutable polynomial: ``vars`` plus a map exponent-tuple -> nonzero coefficient."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Iterable[str], terms: Mapping[tuple, object] | None = None):
        self.vars = tuple(vars)
        if len(set(self.vars)) != len(self.vars):
            raise ValueError(f"repeated variable in {self.vars}")
        clean = {}
        n = len(self.vars)
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for variables {self.vars}")
            c = as_scalar(c)
            if exps in clean:
                c = clean[exps] + c
            clean[exps] = c
        self.terms = {e: c for e, c in clean.items() if not _is_zero(c)}
        self._hash = None

    # construction -----------------------------------------------------------
    @classmethod
    def constant(cls, vars, value) -> "MultiPoly":
        return cls(vars, {(0,) * len(tuple(vars)): value})

    @classmethod
    def variable(cls, vars, name: str) -> "MultiPoly":
        vars = tuple(vars)
        if name not in vars:
            raise UnknownVariable(name)
        exps = tuple(1 if v == name else 0 for v in vars)
        return cls(vars, {exps: 1})

    def _other(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.vars != self.vars:
                raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")
            return other
        return MultiPoly.constant(self.vars, other)

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        o = self._other(other)
        terms = dict(self.terms)
        for e, c in o.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return MultiPoly(self.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        o = self._other(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                terms[e] = terms[e] + prod if e in terms else prod
        return MultiPoly(self.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers need a nonnegative integer")
        result = MultiPoly.constant(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "MultiPoly":
        return MultiPoly(self.vars, {e: c * v for e, v in self.terms.items()})

    # structure --------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree_in(self, var: str) -> int:
        i = self._index(var)
        return max((e[i] for e in self.terms), default=0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def involves(self, var: str) -> bool:
        i = self._index(var)
        return any(e[i] for e in self.terms)

    def _index(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise UnknownVariable(var) from None

    def coefficient_in(self, var: str, k: int) -> "MultiPoly":
        """Coefficient of ``var**k``, still expressed over the full variable list."""
        i = self._index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i] == k:
                terms[e[:i] + (0,) + e[i + 1:]] = c
        return MultiPoly(self.vars, terms)

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.terms.values())

    def is_exact(self) -> bool:
        return all(isinstance(c, ExactComplex) for c in self.terms.values())

    def differentiate(self, var: str) -> "MultiPoly":
        i = self._index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                terms[ne] = c * e[i]
        return MultiPoly(self.vars, terms)

    def gradient(self, vars: Iterable[str] | None = None) -> list["MultiPoly"]:
        return [self.differentiate(v) for v in (vars or self.vars)]

    def evaluate(self, point: Mapping[str, object], digits: int | None = None):
        """Evaluate at a point.

        Exact inputs give an exact result.  Otherwise the sum is formed in the
        approximate engine and the returned value carries the budget
        ``sum |term|``; ``digits`` raises the working precision for the call.
        """
        missing = [v for v in self.vars if v not in point and self.involves(v)]
        if missing:
            raise UnknownVariable(f"unbound variable(s): {', '.join(missing)}")
        values = [as_scalar(point[v]) if v in point else ExactComplex(0) for v in self.vars]
        if all(isinstance(v, ExactComplex) for v in values) and self.is_exact():
            total = ExactComplex(0)
            for e, c in self.terms.items():
                term = c
                for v, k in zip(values, e):
                    if k:
                        term = term * v ** k
                total = total + term
            return total
        extra = 0 if digits is None else max(0, digits - ctx.dps)
        with ctx.extradps(extra):
            mvals = [v.to_mpc() for v in values]
            total = ctx.mpc(0)
            mag = ctx.mpf(0)
            for e, c in self.terms.items():
                term = c.to_mpc()
                for v, k in zip(mvals, e):
                    if k:
                        term *= v ** k
                total += term
                mag += abs(term)
            return ApproxComplex(+total, +mag)

    def conjugate(self) -> "MultiPoly":
        return MultiPoly(self.vars, {e: c.conjugate() for e, c in self.terms.items()})

    def with_vars(self, vars: Iterable[str]) -> "MultiPoly":
        """Re-express over a superset (or reordering) of the variables."""
        vars = tuple(vars)
        idx = []
        for v in self.vars:
            if v not in vars:
                if self.involves(v):
                    raise UnknownVariable(v)
                idx.append(None)
            else:
                idx.append(vars.index(v))
        terms = {}
        for e, c in self.terms.items():
            ne = [0] * len(vars)
            for k, j in zip(e, idx):
                if j is not None:
                    ne[j] = k
            terms[tuple(ne)] = c
        return MultiPoly(vars, terms)

    # comparison / display ---------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-k for k in kv[0])))

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k
            )
            ctext = str(c) if isinstance(c, ExactComplex) else f"({c})"
            if not mono:
                body = ctext
            elif ctext == "1":
                body = mono
            elif ctext == "-1":
                body = "-" + mono
            else:
                body = f"{ctext}*{mono}"
            if pieces:
                pieces.append(f"- {body[1:]}" if body.startswith("-") else f"+ {body}")
            else:
                pieces.append(body)
        return " ".join(pieces)

    def __repr__(self):
        return f"MultiPoly({self.vars!r}, {str(self)!r})"


def euler_defect(p: MultiPoly, weights: Mapping[str, int], degree: int) -> MultiPoly:
    """``sum w_i x_i dp/dx_i - d p``; zero iff p is weighted homogeneous."""
    total = MultiPoly(p.vars)
    for v, w in weights.items():
        if w:
            total = total + (MultiPoly.variable(p.vars, v) * p.differentiate(v)).scale(w)
    return total - p.scale(degree)


__all__ = ["MultiPoly", "UnknownVariable", "euler_defect", "settings"]
