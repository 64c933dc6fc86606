"""Exact scalar arithmetic for distance values.

Every distance in this library is either a rational number or the square
root of a rational (a Euclidean distance between rational points).  Both
forms support exact comparison, so level ladders and chain completeness
never depend on floating-point rounding: two values are compared through
their squares, which are always rational.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def _rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    if q < 0:
        raise ValueError("negative radicand")
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


class Dist:
    """A nonnegative exact scalar: either rational or sqrt(rational).

    sqrt forms with a perfect-square radicand normalize to the rational
    form, so equal values always have equal representations. Ordering,
    equality and hashing go through the (always rational) square.
    """

    __slots__ = ("q", "root")

    def __init__(self, q: Rational, root: bool = False):
        q = _as_fraction(q)
        if q < 0:
            raise ValueError("distances are nonnegative")
        if root:
            r = _rational_sqrt(q)
            if r is not None:
                q, root = r, False
        self.q = q
        self.root = root

    @classmethod
    def rational(cls, q: Rational) -> "Dist":
        return cls(q, root=False)

    @classmethod
    def sqrt_of(cls, q: Rational) -> "Dist":
        return cls(q, root=True)

    ZERO: "Dist"  # assigned below

    @property
    def square(self) -> Fraction:
        return self.q if self.root else self.q * self.q

    def is_rational(self) -> bool:
        return not self.root

    def __float__(self) -> float:
        return math.sqrt(self.q) if self.root else float(self.q)

    def __bool__(self) -> bool:
        return self.q != 0

    def _coerce(self, other) -> "Dist":
        if isinstance(other, Dist):
            return other
        if isinstance(other, (int, Fraction)):
            return Dist(other)
        return NotImplemented  # type: ignore[return-value]

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.square == o.square

    def __lt__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.square < o.square

    def __le__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.square <= o.square

    def __gt__(self, other) -> bool:
        return not self.__le__(other)

    def __ge__(self, other) -> bool:
        return not self.__lt__(other)

    def __hash__(self) -> int:
        return hash(("Dist", self.square))

    def __add__(self, other) -> "Dist":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.q == 0:
            return o
        if o.q == 0:
            return self
        if not self.root and not o.root:
            return Dist(self.q + o.q)
        if self.root and o.root and self.q == o.q:
            return Dist(4 * self.q, root=True)
        raise ValueError("sum of distinct irrational square roots is not representable exactly")

    __radd__ = __add__

    def __mul__(self, c: Rational) -> "Dist":
        c = _as_fraction(c)
        if c < 0:
            raise ValueError("negative scale")
        return Dist(self.q * c * c, root=True) if self.root else Dist(self.q * c)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Dist":
        """Exact quotient of two distances (or by a rational scalar)."""
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if c <= 0:
                raise ZeroDivisionError("division by a nonpositive scalar")
            return Dist(self.q / (c * c), root=True) if self.root else Dist(self.q / c)
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.q == 0:
            raise ZeroDivisionError("division by zero distance")
        return Dist(self.square / o.square, root=True)

    def floor(self) -> int:
        """Exact floor of the value."""
        if not self.root:
            return self.q.numerator // self.q.denominator
        n, d = self.q.numerator, self.q.denominator
        i = math.isqrt(n // d)
        while (i + 1) * (i + 1) * d <= n:
            i += 1
        while i * i * d > n:
            i -= 1
        return i

    def token(self) -> str:
        """Canonical text form, e.g. "3", "3/2", "sqrt(5)", "sqrt(9/2)"."""
        body = str(self.q.numerator) if self.q.denominator == 1 else f"{self.q.numerator}/{self.q.denominator}"
        return f"sqrt({body})" if self.root else body

    def __repr__(self) -> str:
        return f"Dist({self.token()})"


Dist.ZERO = Dist(0)


def parse_rational(tok) -> Fraction:
    """Parse an exact rational from an int or a "p/q" string.

    Floats are rejected unless they are exactly integral: the document
    formats are exact by contract.
    """
    if isinstance(tok, bool):
        raise ValueError(f"not a rational: {tok!r}")
    if isinstance(tok, int):
        return Fraction(tok)
    if isinstance(tok, float):
        if tok.is_integer():
            return Fraction(int(tok))
        raise ValueError(f"non-integral float {tok!r} is not exact; use a 'p/q' string")
    if isinstance(tok, str):
        try:
            return Fraction(tok)
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"bad rational token {tok!r}") from e
    raise ValueError(f"not a rational: {tok!r}")


def rational_token(q: Rational) -> str:
    q = _as_fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
