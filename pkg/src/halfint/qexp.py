"""Truncated q-expansions over Q and the classical operators acting on them.

A series carries an inclusive precision: coefficients a_0 .. a_prec are known
and everything beyond is unknown.  Each operator computes the precision of its
output and asking for a coefficient past it raises PrecisionExhausted.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .arith import RatLike, as_rat, kronecker
from .errors import PrecisionExhausted


class QExpansion:
    """sum_{n <= prec} a_n q^n with exact rational coefficients."""

    __slots__ = ("_a", "prec", "weight", "level")

    def __init__(
        self,
        coeffs: Mapping[int, RatLike] | Sequence[RatLike] = (),
        prec: int = 0,
        weight: Optional[Fraction] = None,
        level: Optional[int] = None,
    ):
        if prec < 0:
            raise ValueError("precision must be non-negative")
        a = [Fraction(0)] * (prec + 1)
        items = coeffs.items() if isinstance(coeffs, Mapping) else enumerate(coeffs)
        for n, c in items:
            if n < 0:
                raise ValueError("negative exponent")
            if n > prec:
                c = as_rat(c)
                if c:
                    raise PrecisionExhausted(f"coefficient at {n} beyond precision {prec}")
                continue
            a[n] = as_rat(c)
        self._a = a
        self.prec = prec
        self.weight = None if weight is None else as_rat(weight)
        self.level = level

    @classmethod
    def _from_list(cls, a: list, prec: int, weight=None, level=None) -> "QExpansion":
        f = object.__new__(cls)
        f._a = a
        f.prec = prec
        f.weight = weight
        f.level = level
        return f

    @classmethod
    def zero(cls, prec: int) -> "QExpansion":
        return cls((), prec)

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            return Fraction(0)
        if n > self.prec:
            raise PrecisionExhausted(f"a_{n} requested but precision is {self.prec}")
        return self._a[n]

    def list(self) -> list[Fraction]:
        return list(self._a)

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return {n: c for n, c in enumerate(self._a) if c}

    def is_zero(self) -> bool:
        return not any(self._a)

    def valuation(self) -> int:
        """Index of the first nonzero coefficient, or prec + 1 if none is known."""
        for n, c in enumerate(self._a):
            if c:
                return n
        return self.prec + 1

    def truncate(self, prec: int) -> "QExpansion":
        if prec > self.prec:
            raise PrecisionExhausted(f"cannot extend precision {self.prec} to {prec}")
        return QExpansion._from_list(self._a[: prec + 1], prec, self.weight, self.level)

    def with_meta(self, weight=None, level=None) -> "QExpansion":
        return QExpansion._from_list(list(self._a), self.prec, as_rat(weight) if weight is not None else None, level)

    def __add__(self, other: "QExpansion") -> "QExpansion":
        prec = min(self.prec, other.prec)
        a = [x + y for x, y in zip(self._a[: prec + 1], other._a[: prec + 1])]
        return QExpansion._from_list(a, prec, self.weight, self.level)

    def __neg__(self) -> "QExpansion":
        return self.scale(-1)

    def __sub__(self, other: "QExpansion") -> "QExpansion":
        return self + other.scale(-1)

    def scale(self, s: RatLike) -> "QExpansion":
        s = as_rat(s)
        return QExpansion._from_list([s * x for x in self._a], self.prec, self.weight, self.level)

    def __mul__(self, other: "QExpansion") -> "QExpansion":
        return mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QExpansion):
            return NotImplemented
        return self.prec == other.prec and self._a == other._a

    def agrees_with(self, other: "QExpansion") -> bool:
        """Equality on the common precision."""
        prec = min(self.prec, other.prec)
        return self._a[: prec + 1] == other._a[: prec + 1]

    def __hash__(self) -> int:
        return hash((self.prec, tuple(self._a)))

    def __repr__(self) -> str:
        terms = [f"{c}*q^{n}" for n, c in enumerate(self._a) if c][:8]
        body = " + ".join(terms) if terms else "0"
        return f"QExpansion({body} + O(q^{self.prec + 1}))"


def add(f: QExpansion, g: QExpansion) -> QExpansion:
    return f + g


def scale(s: RatLike, f: QExpansion) -> QExpansion:
    return f.scale(s)


def mul(f: QExpansion, g: QExpansion) -> QExpansion:
    # a known zero prefix of one factor extends the usable precision of the other
    vf, vg = f.valuation(), g.valuation()
    prec = min(f.prec + vg, g.prec + vf)
    out = [Fraction(0)] * (prec + 1)
    fa, ga = f._a, g._a
    nz_g = [(j, y) for j, y in enumerate(ga) if y and j <= prec]
    for i, x in enumerate(fa):
        if not x or i > prec:
            continue
        for j, y in nz_g:
            if i + j > prec:
                break
            out[i + j] += x * y
    return QExpansion._from_list(out, prec)


def power(f: QExpansion, e: int, prec: Optional[int] = None) -> QExpansion:
    if e < 0:
        raise ValueError("negative power")
    out = QExpansion([1], f.prec if prec is None else prec)
    for _ in range(e):
        out = mul(out, f)
    return out


def u_op(m: int, f: QExpansion) -> QExpansion:
    if m < 1:
        raise ValueError("U_m needs m >= 1")
    prec = f.prec // m
    return QExpansion._from_list([f._a[m * n] for n in range(prec + 1)], prec)


def v_op(m: int, f: QExpansion) -> QExpansion:
    if m < 1:
        raise ValueError("V_m needs m >= 1")
    prec = m * f.prec
    out = [Fraction(0)] * (prec + 1)
    for n, c in enumerate(f._a):
        out[m * n] = c
    return QExpansion._from_list(out, prec)


def t_op_integral(p: int, k2: int, f: QExpansion) -> QExpansion:
    """Hecke operator T_p on a weight-k2 integral-weight series."""
    prec = f.prec // p
    scale_ = Fraction(p) ** (k2 - 1)
    out = []
    for n in range(prec + 1):
        c = f._a[p * n]
        if n % p == 0:
            c += scale_ * f._a[n // p]
        out.append(c)
    return QExpansion._from_list(out, prec)


def t_op_half(q: int, k: int, f: QExpansion, level: Optional[int] = None) -> QExpansion:
    """Hecke operator T_{q^2} in weight k + 1/2 with trivial character."""
    if level is not None and level % q == 0:
        raise ValueError(f"T_{q * q} needs q coprime to the level {level}")
    q2 = q * q
    prec = f.prec // q2
    mid = Fraction(q) ** (k - 1)
    top = Fraction(q) ** (2 * k - 1)
    sign = -1 if k % 2 else 1
    out = []
    for n in range(prec + 1):
        c = f._a[q2 * n] + kronecker(sign * n, q) * mid * f._a[n]
        if n % q2 == 0:
            c += top * f._a[n // q2]
        out.append(c)
    return QExpansion._from_list(out, prec)


def plus_condition(f: QExpansion, k: int) -> bool:
    """True iff a_n = 0 whenever (-1)^k n = 2, 3 mod 4, for n <= prec."""
    return all(not f._a[n] for n in plus_forbidden_indices(k, f.prec))


def plus_forbidden_indices(k: int, prec: int) -> list[int]:
    sign = -1 if k % 2 else 1
    return [n for n in range(prec + 1) if (sign * n) % 4 in (2, 3)]


def from_integers(values: Iterable[int], prec: int, shift: int = 0) -> QExpansion:
    a = [Fraction(0)] * (prec + 1)
    for i, v in enumerate(values):
        if i + shift > prec:
            break
        a[i + shift] = Fraction(v)
    return QExpansion._from_list(a, prec)
