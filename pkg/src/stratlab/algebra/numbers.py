"""Scalar coefficient types.

``ExactComplex`` is a Gaussian rational backed by gmpy2 ``mpq``.  ``ApproxComplex``
is an mpmath complex carrying a magnitude budget: the sum of the moduli of
everything that was added together to produce it.  A value is treated as zero
when its modulus is below ``zero_threshold * budget``, which is how exact
cancellations (``5 s^32 - 5 s^32``) are told apart from round-off.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import gmpy2
import mpmath

DEFAULT_DIGITS = 34
DEFAULT_ZERO_THRESHOLD = 1e-10

ctx = mpmath.MPContext()
ctx.dps = DEFAULT_DIGITS


@dataclass
class Settings:
    digits: int = DEFAULT_DIGITS
    zero_threshold: float = DEFAULT_ZERO_THRESHOLD


settings = Settings()


def set_precision(digits: int | None = None, zero_threshold: float | None = None) -> None:
    """Set working precision (decimal digits) and the relative zero threshold."""
    if digits is not None:
        if digits < 15:
            raise ValueError("precision below 15 digits is not supported")
        settings.digits = digits
        ctx.dps = digits
    if zero_threshold is not None:
        if not 0 < zero_threshold < 1:
            raise ValueError("zero threshold must lie in (0, 1)")
        settings.zero_threshold = zero_threshold


def _mpq(value) -> gmpy2.mpq:
    if isinstance(value, gmpy2.mpq):
        return value
    if isinstance(value, int):
        return gmpy2.mpq(value)
    if isinstance(value, Fraction):
        return gmpy2.mpq(value.numerator, value.denominator)
    if isinstance(value, Rational):
        return gmpy2.mpq(int(value.numerator), int(value.denominator))
    if isinstance(value, str):
        return gmpy2.mpq(Fraction(value).numerator, Fraction(value).denominator)
    raise TypeError(f"cannot build an exact rational from {value!r}")


_ZERO = gmpy2.mpq(0)


def _make(re, im):
    # results of mpq arithmetic are already reduced; skip the conversions
    z = object.__new__(ExactComplex)
    z.re = re
    z.im = im
    return z


def _frac_text(q) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class ExactComplex:
    """Gaussian rational ``re + im*i`` with reduced fractions."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _mpq(re)
        self.im = _mpq(im)

    @classmethod
    def coerce(cls, value) -> "ExactComplex":
        if isinstance(value, ExactComplex):
            return value
        return cls(value)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, ApproxComplex):
            return NotImplemented
        o = ExactComplex.coerce(other)
        return _make(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return _make(-self.re, -self.im)

    def __sub__(self, other):
        if isinstance(other, ApproxComplex):
            return NotImplemented
        o = ExactComplex.coerce(other)
        return _make(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return ExactComplex.coerce(other) - self

    def __mul__(self, other):
        if type(other) is ExactComplex:
            o = other
        elif isinstance(other, ApproxComplex):
            return NotImplemented
        else:
            o = ExactComplex.coerce(other)
        if not self.im and not o.im:
            return _make(self.re * o.re, _ZERO)
        return _make(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def inverse(self) -> "ExactComplex":
        n = self.abs2()
        if not n:
            raise ZeroDivisionError("inverse of exact zero")
        return ExactComplex(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if isinstance(other, ApproxComplex):
            return NotImplemented
        return self * ExactComplex.coerce(other).inverse()

    def __rtruediv__(self, other):
        return ExactComplex.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("exact powers need an integer exponent")
        base = self if k >= 0 else self.inverse()
        result = ExactComplex(1)
        k = abs(k)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "ExactComplex":
        return ExactComplex(self.re, -self.im)

    def abs2(self):
        """Exact squared modulus as an ``mpq``."""
        return self.re * self.re + self.im * self.im

    def __abs__(self):
        return ctx.sqrt(ctx.mpf(self.abs2().numerator) / self.abs2().denominator)

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def __bool__(self):
        return not self.is_zero()

    def is_real(self) -> bool:
        return not self.im

    def to_approx(self) -> "ApproxComplex":
        return ApproxComplex(self.to_mpc())

    def to_mpc(self):
        return ctx.mpc(
            ctx.mpf(self.re.numerator) / self.re.denominator,
            ctx.mpf(self.im.numerator) / self.im.denominator,
        )

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    # comparison / display ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, ApproxComplex):
            return NotImplemented
        try:
            o = ExactComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"ExactComplex({_frac_text(self.re)}, {_frac_text(self.im)})"

    def __str__(self):
        if not self.im:
            return _frac_text(self.re)
        im = self.im
        if im == 1:
            imag = "i"
        elif im == -1:
            imag = "-i"
        else:
            imag = f"{_frac_text(im)}*i"
        if not self.re:
            return imag
        sign = "" if imag.startswith("-") else "+"
        return f"({_frac_text(self.re)}{sign}{imag})"


class ApproxComplex:
    """Complex float at the module precision with a magnitude budget.

    ``mag`` bounds the modulus of the exact computation that produced
    ``value`` term by term, so ``|value| <= zero_threshold * mag`` flags a
    cancellation down to noise.
    """

    __slots__ = ("value", "mag")

    def __init__(self, value, mag=None):
        if isinstance(value, ExactComplex):
            value = value.to_mpc()
        self.value = ctx.mpc(value)
        self.mag = ctx.mpf(mag) if mag is not None else abs(self.value)

    @classmethod
    def coerce(cls, value) -> "ApproxComplex":
        if isinstance(value, ApproxComplex):
            return value
        if isinstance(value, ExactComplex):
            return value.to_approx()
        if isinstance(value, (Fraction, Rational)) and not isinstance(value, int):
            return cls(ctx.mpf(int(value.numerator)) / int(value.denominator))
        return cls(value)

    def __add__(self, other):
        o = ApproxComplex.coerce(other)
        return ApproxComplex(self.value + o.value, self.mag + o.mag)

    __radd__ = __add__

    def __neg__(self):
        return ApproxComplex(-self.value, self.mag)

    def __sub__(self, other):
        o = ApproxComplex.coerce(other)
        return ApproxComplex(self.value - o.value, self.mag + o.mag)

    def __rsub__(self, other):
        return ApproxComplex.coerce(other) - self

    def __mul__(self, other):
        o = ApproxComplex.coerce(other)
        return ApproxComplex(self.value * o.value, self.mag * o.mag)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = ApproxComplex.coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("division by an approximate zero")
        return ApproxComplex(self.value / o.value, self.mag / abs(o.value))

    def __rtruediv__(self, other):
        return ApproxComplex.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("integer exponent required")
        if k < 0:
            return ApproxComplex(1) / (self ** (-k))
        return ApproxComplex(self.value ** k, self.mag ** k)

    def conjugate(self) -> "ApproxComplex":
        return ApproxComplex(ctx.conj(self.value), self.mag)

    def abs2(self):
        return self.value.real ** 2 + self.value.imag ** 2

    def __abs__(self):
        return abs(self.value)

    def is_zero(self, threshold: float | None = None) -> bool:
        thr = settings.zero_threshold if threshold is None else threshold
        return abs(self.value) <= thr * self.mag

    def __bool__(self):
        return not self.is_zero()

    def is_real(self) -> bool:
        return abs(self.value.imag) <= settings.zero_threshold * self.mag

    def to_mpc(self):
        return self.value

    def __complex__(self):
        return complex(self.value)

    def __repr__(self):
        return f"ApproxComplex({ctx.nstr(self.value, 17)})"

    def __str__(self):
        return ctx.nstr(self.value, 17)


Scalar = ExactComplex | ApproxComplex


def is_exact(c) -> bool:
    return isinstance(c, ExactComplex)


def as_scalar(value) -> Scalar:
    """Coerce ints, fractions and complex numbers to an engine scalar."""
    if isinstance(value, (ExactComplex, ApproxComplex)):
        return value
    if isinstance(value, (int, Fraction)) or isinstance(value, gmpy2.mpq):
        return ExactComplex(value)
    return ApproxComplex(value)


def to_mpc(value):
    if isinstance(value, (ExactComplex, ApproxComplex)):
        return value.to_mpc()
    return ctx.mpc(value)
