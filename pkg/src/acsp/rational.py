"""Exact Gaussian-rational scalars.

Every constraint weight in this package is a value ``a + b*i`` where ``a``
and ``b`` are arbitrary-precision rationals.  There is no floating-point
representation anywhere: equality is decidable and exact, and the type is
closed under +, -, *, / (a field), which is everything the counting and
gadget machinery performs.
"""

from __future__ import annotations

from fractions import Fraction

_F0 = Fraction(0)
_F1 = Fraction(1)


class ComplexRat:
    """A complex number with exact rational real and imaginary parts.

    Instances are immutable by convention (never mutate ``re``/``im``) and
    hashable, so they can be shared freely across workers.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "ComplexRat":
        self = object.__new__(cls)
        self.re = re
        self.im = im
        return self

    @classmethod
    def parse(cls, text: str) -> "ComplexRat":
        """Parse a real rational string such as ``"3"``, ``"-1/2"``."""
        try:
            return cls._raw(Fraction(text), _F0)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {text!r}") from exc

    @classmethod
    def from_pair(cls, pair) -> "ComplexRat":
        """Parse a ``[re, im]`` pair of rational strings (or a bare real)."""
        if isinstance(pair, (list, tuple)):
            if len(pair) != 2:
                raise ValueError(f"expected [re, im], got {pair!r}")
            return cls._raw(_to_fraction(pair[0]), _to_fraction(pair[1]))
        return cls._raw(_to_fraction(pair), _F0)

    def to_pair(self) -> list:
        return [str(self.re), str(self.im)]

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexRat):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __add__(self, other: "ComplexRat") -> "ComplexRat":
        return ComplexRat._raw(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ComplexRat") -> "ComplexRat":
        return ComplexRat._raw(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "ComplexRat":
        return ComplexRat._raw(-self.re, -self.im)

    def __mul__(self, other: "ComplexRat") -> "ComplexRat":
        a, b = self.re, self.im
        c, d = other.re, other.im
        if not b and not d:
            return ComplexRat._raw(a * c, _F0)
        return ComplexRat._raw(a * c - b * d, a * d + b * c)

    def __truediv__(self, other: "ComplexRat") -> "ComplexRat":
        c, d = other.re, other.im
        if not c and not d:
            raise ZeroDivisionError("division by zero ComplexRat")
        if not d:
            return ComplexRat._raw(self.re / c, self.im / c)
        denom = c * c + d * d
        a, b = self.re, self.im
        return ComplexRat._raw((a * c + b * d) / denom, (b * c - a * d) / denom)

    def inverse(self) -> "ComplexRat":
        return ONE / self

    def conjugate(self) -> "ComplexRat":
        return ComplexRat._raw(self.re, -self.im)

    def __pow__(self, n: int) -> "ComplexRat":
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_one(self) -> bool:
        return self.re == _F1 and not self.im

    def __repr__(self) -> str:
        if not self.im:
            return f"CR({self.re})"
        return f"CR({self.re}, {self.im}i)"


def _to_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {v!r}") from exc
    raise ValueError(f"not a rational: {v!r} (floats are rejected)")


ZERO = ComplexRat._raw(_F0, _F0)
ONE = ComplexRat._raw(_F1, _F0)
MINUS_ONE = ComplexRat._raw(Fraction(-1), _F0)
I = ComplexRat._raw(_F0, _F1)
TWO = ComplexRat._raw(Fraction(2), _F0)
HALF = ComplexRat._raw(Fraction(1, 2), _F0)


def cr(re, im=0) -> ComplexRat:
    """Shorthand constructor accepting ints, Fractions or strings."""
    return ComplexRat(_to_fraction(re), _to_fraction(im))
