"""n-th roots of Gaussian rationals in polar form."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import gmpy2

from .numbers import ApproxComplex, ExactComplex, ctx


@dataclass(frozen=True)
class PolarRoot:
    index: int
    n: int
    modulus_text: str
    arg_over_pi: Fraction | None  # exact when the radicand lies on an axis
    value: ApproxComplex
    residual: float  # |root^n - v| / |v|

    @property
    def modulus(self):
        return abs(self.value.value)

    @property
    def argument(self):
        return ctx.arg(self.value.value)

    def describe(self) -> str:
        if self.arg_over_pi is None:
            arg = ctx.nstr(self.argument, 15)
        elif self.arg_over_pi == 0:
            arg = "0"
        else:
            arg = f"{self.arg_over_pi}*pi"
        return f"{self.modulus_text} * exp(i*{arg})"


def _axis_arg(v: ExactComplex) -> Fraction | None:
    if not v.im:
        return Fraction(0) if v.re > 0 else Fraction(1)
    if not v.re:
        return Fraction(1, 2) if v.im > 0 else Fraction(-1, 2)
    return None


def _modulus_text(v: ExactComplex, n: int) -> str:
    a2 = v.abs2()
    num, den = gmpy2.is_square(a2.numerator), gmpy2.is_square(a2.denominator)
    if num and den:
        m = gmpy2.mpq(gmpy2.isqrt(a2.numerator), gmpy2.isqrt(a2.denominator))
        base = str(m.numerator) if m.denominator == 1 else f"({m.numerator}/{m.denominator})"
        return base if n == 1 else f"{base}^(1/{n})"
    base = str(a2.numerator) if a2.denominator == 1 else f"({a2.numerator}/{a2.denominator})"
    return f"{base}^(1/{2 * n})"


def nth_roots(value, n: int) -> list[PolarRoot]:
    """All ``n`` roots of ``z^n = value`` ordered by argument index ``k``.

    Root ``k`` has modulus ``|v|^(1/n)`` and argument ``(arg v + 2 pi k)/n``.
    """
    if not isinstance(n, int) or n <= 0:
        raise ValueError("n must be a positive integer")
    exact = value if isinstance(value, ExactComplex) else None
    if exact is None and isinstance(value, (int, Fraction)):
        exact = ExactComplex(value)
    v = exact.to_mpc() if exact is not None else ctx.mpc(value)
    if v == 0:
        raise ValueError("roots of zero are not enumerated")
    base_arg = _axis_arg(exact) if exact is not None else None
    mod = abs(v) ** (ctx.mpf(1) / n)
    theta = ctx.arg(v)
    out = []
    for k in range(n):
        if base_arg is not None:
            frac = (base_arg + 2 * k) / n
            # fold into (-1, 1]
            while frac > 1:
                frac -= 2
            ang = ctx.pi * ctx.mpf(frac.numerator) / frac.denominator
        else:
            frac = None
            ang = (theta + 2 * ctx.pi * k) / n
        root = ctx.mpc(mod * ctx.cos(ang), mod * ctx.sin(ang))
        resid = float(abs(root ** n - v) / abs(v))
        out.append(
            PolarRoot(
                index=k,
                n=n,
                modulus_text=_modulus_text(exact, n) if exact is not None else ctx.nstr(mod, 20),
                arg_over_pi=frac,
                value=ApproxComplex(root),
                residual=resid,
            )
        )
    return out
