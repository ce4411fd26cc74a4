"""Exact number-theoretic primitives.

Kronecker symbols, p-adic valuations, Hilbert symbols at every place, the
quartic root attached to an odd integer, and the cyclotomic field Q(zeta_8).
Everything here is exact; no floating point is used.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Union

from .errors import EvenInput, ParseError, ZeroInput

Rat = Fraction
RatLike = Union[int, Fraction, str]

INFINITY = "inf"


def as_rat(x: RatLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def render_rat(x: Fraction) -> str:
    x = as_rat(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(text: str) -> Fraction:
    if not re.fullmatch(r"-?\d+(/\d+)?", text):
        raise ValueError(f"malformed rational {text!r}")
    if text.endswith("/0"):
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(text)


def _jacobi(a: int, n: int) -> int:
    # n odd and positive
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(a: int, n: int) -> int:
    """The Kronecker symbol (a|n), extended to all integers n."""
    a, n = int(a), int(n)
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    twos = 0
    while n % 2 == 0:
        n //= 2
        twos += 1
    if twos:
        if a % 2 == 0:
            return 0
        if twos % 2 and a % 8 in (3, 5):
            result = -result
    return result * _jacobi(a, n)


def _int_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(x: RatLike, p: int) -> int:
    """ord_p(x) for a nonzero rational x."""
    x = as_rat(x)
    if x == 0:
        raise ZeroInput("valuation of zero")
    return _int_valuation(x.numerator, p) - _int_valuation(x.denominator, p)


def is_p_integral(x: RatLike, p: int) -> bool:
    x = as_rat(x)
    return x.denominator % p != 0


def _square_class(x: Fraction) -> int:
    # x and num*den differ by the square den^2
    return x.numerator * x.denominator


def hilbert(a: RatLike, b: RatLike, place) -> int:
    """Hilbert symbol (a, b) at a prime p or at the real place."""
    a, b = as_rat(a), as_rat(b)
    if a == 0 or b == 0:
        raise ZeroInput("Hilbert symbol of zero")
    if place == INFINITY or place == math.inf:
        return -1 if (a < 0 and b < 0) else 1
    p = int(place)
    a, b = _square_class(a), _square_class(b)
    s, t = _int_valuation(a, p), _int_valuation(b, p)
    u, v = a // p**s, b // p**t
    if p == 2:
        sign = -1 if ((u - 1) // 2) * ((v - 1) // 2) % 2 else 1
        if t % 2:
            sign *= kronecker(2, abs(u))
        if s % 2:
            sign *= kronecker(2, abs(v))
        return sign
    sign = kronecker(-1, p) if (s * t) % 2 else 1
    if t % 2:
        sign *= kronecker(u, p)
    if s % 2:
        sign *= kronecker(v, p)
    return sign


def eps_quartic(d: int) -> "CycQ8":
    """1 if d = 1 mod 4 and i if d = 3 mod 4."""
    d = int(d)
    if d % 2 == 0:
        raise EvenInput(f"{d} is even")
    return CycQ8.one() if d % 4 == 1 else CycQ8.i()


def _zeta_power(m: int) -> tuple[int, int]:
    # zeta^m as (sign, basis index) using zeta^4 = -1
    m %= 8
    return (1, m) if m < 4 else (-1, m - 4)


class CycQ8:
    """An element c0 + c1 z + c2 z^2 + c3 z^3 of Q(z), z a primitive 8th root of unity."""

    __slots__ = ("c",)

    def __init__(self, coords: Iterable[RatLike] = (0, 0, 0, 0)):
        c = tuple(as_rat(x) for x in coords)
        if len(c) != 4:
            raise ValueError("CycQ8 needs exactly four coordinates")
        object.__setattr__(self, "c", c)

    def __setattr__(self, name, value):
        raise AttributeError("CycQ8 is immutable")

    @classmethod
    def from_rat(cls, x: RatLike) -> "CycQ8":
        return cls((x, 0, 0, 0))

    @classmethod
    def zero(cls) -> "CycQ8":
        return cls()

    @classmethod
    def one(cls) -> "CycQ8":
        return cls((1, 0, 0, 0))

    @classmethod
    def zeta(cls) -> "CycQ8":
        return cls((0, 1, 0, 0))

    @classmethod
    def i(cls) -> "CycQ8":
        return cls((0, 0, 1, 0))

    @classmethod
    def sqrt2(cls) -> "CycQ8":
        return cls((0, 1, 0, -1))

    @staticmethod
    def _coerce(other) -> "CycQ8":
        if isinstance(other, CycQ8):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return CycQ8.from_rat(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycQ8(x + y for x, y in zip(self.c, other.c))

    __radd__ = __add__

    def __neg__(self):
        return CycQ8(-x for x in self.c)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycQ8(x - y for x, y in zip(self.c, other.c))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = [Fraction(0)] * 4
        for i, x in enumerate(self.c):
            if not x:
                continue
            for j, y in enumerate(other.c):
                if not y:
                    continue
                sign, k = _zeta_power(i + j)
                out[k] += sign * x * y
        return CycQ8(out)

    __rmul__ = __mul__

    def galois(self, j: int) -> "CycQ8":
        """Image under the automorphism z -> z^j, j odd."""
        out = [Fraction(0)] * 4
        for i, x in enumerate(self.c):
            sign, k = _zeta_power(i * j)
            out[k] += sign * x
        return CycQ8(out)

    def conj(self) -> "CycQ8":
        return self.galois(7)

    def norm(self) -> Fraction:
        n = self * self.galois(3) * self.galois(5) * self.galois(7)
        return n.c[0]

    def inverse(self) -> "CycQ8":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_8)")
        rest = self.galois(3) * self.galois(5) * self.galois(7)
        n = (self * rest).c[0]
        return CycQ8(x / n for x in rest.c)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, e: int) -> "CycQ8":
        if e < 0:
            return self.inverse() ** (-e)
        out, base = CycQ8.one(), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def is_zero(self) -> bool:
        return not any(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.c == other.c

    def __hash__(self) -> int:
        return hash(self.c)

    def __repr__(self) -> str:
        return f"CycQ8({self.render()})"

    def render(self) -> str:
        c0, c1, c2, c3 = (render_rat(x) for x in self.c)
        return f"{c0}+{c1}*z+{c2}*z^2+{c3}*z^3"

    __str__ = render

    @classmethod
    def parse(cls, text: str) -> "CycQ8":
        rat = r"(-?\d+(?:/\d+)?)"
        m = re.fullmatch(rf"{rat}\+{rat}\*z\+{rat}\*z\^2\+{rat}\*z\^3", text.strip())
        if not m:
            raise ParseError(f"malformed Q(zeta_8) element {text!r}")
        return cls(Fraction(g) for g in m.groups())
