"""Exact Gaussian-rational arithmetic for operator coefficients.

All symbolic coefficients in the engine are numbers a + b*i with rational
a, b. Floating point never enters the symbolic layer.
"""

from __future__ import annotations

from fractions import Fraction


class GaussRat:
    """Complex rational a + b*i with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    @classmethod
    def coerce(cls, value) -> "GaussRat":
        if isinstance(value, GaussRat):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to GaussRat")

    # -- arithmetic ---------------------------------------------------------

    _COERCIBLE = (int, Fraction)

    def __add__(self, other):
        if not isinstance(other, (GaussRat, *self._COERCIBLE)):
            return NotImplemented
        other = GaussRat.coerce(other)
        return GaussRat(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (GaussRat, *self._COERCIBLE)):
            return NotImplemented
        other = GaussRat.coerce(other)
        return GaussRat(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        if not isinstance(other, (GaussRat, *self._COERCIBLE)):
            return NotImplemented
        return GaussRat.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (GaussRat, *self._COERCIBLE)):
            return NotImplemented
        other = GaussRat.coerce(other)
        return GaussRat(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (GaussRat, *self._COERCIBLE)):
            return NotImplemented
        other = GaussRat.coerce(other)
        denom = other.re * other.re + other.im * other.im
        if denom == 0:
            raise ZeroDivisionError("division by zero GaussRat")
        return GaussRat(
            (self.re * other.re + self.im * other.im) / denom,
            (self.im * other.re - self.re * other.im) / denom,
        )

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def conjugate(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    # -- predicates ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, GaussRat):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    # -- formatting ---------------------------------------------------------

    def __repr__(self):
        return f"GaussRat({self.re!r}, {self.im!r})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return _imag_str(self.im)
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{_imag_str(abs(self.im))}"


def _imag_str(b: Fraction) -> str:
    sign = "-" if b < 0 else ""
    mag = abs(b)
    num = "i" if mag.numerator == 1 else f"{mag.numerator}i"
    if mag.denominator == 1:
        return f"{sign}{num}"
    return f"{sign}{num}/{mag.denominator}"


ZERO = GaussRat(0)
ONE = GaussRat(1)
I = GaussRat(0, 1)


def binom_coeff(alpha: Fraction, n: int) -> Fraction:
    """Generalized binomial coefficient C(alpha, n) for rational alpha."""
    out = Fraction(1)
    for k in range(1, n + 1):
        out = out * (alpha - k + 1) / k
    return out
