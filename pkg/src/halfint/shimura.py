"""The Shimura lift on q-expansions and the coefficient form of its L-series identity."""

from __future__ import annotations

import math
from fractions import Fraction

from .arith import kronecker
from .errors import PrecisionExhausted
from .qexp import QExpansion


def is_squarefree(t: int) -> bool:
    if t < 1:
        return False
    d = 2
    while d * d <= t:
        if t % (d * d) == 0:
            return False
        d += 1
    return True


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def lift_character(t: int, k: int, level: int = 4):
    """d -> ((-1)^k | d)(t | d), and 0 when d shares a factor with the level."""
    sign = -1 if k % 2 else 1

    def chi(d: int) -> int:
        if math.gcd(d, level) > 1:
            return 0
        return kronecker(sign, d) * kronecker(t, d)

    return chi


def sh_lift(f: QExpansion, t: int, k: int, level: int = 4) -> QExpansion:
    """A_n = sum_{d | n} chi(d) d^(k-1) a(t n^2 / d^2), for weight k + 1/2 input.

    The character vanishes on d sharing a prime with the level (4 by default,
    so only even d are killed); pass the full level 4M to also kill d
    divisible by primes of M.  The constant term is not part of the lift and
    is returned as zero.
    """
    if not is_squarefree(t):
        raise ValueError(f"t = {t} is not squarefree")
    if f.prec < t:
        raise PrecisionExhausted(f"need precision {t}, have {f.prec}")
    prec = math.isqrt(f.prec // t)
    chi = lift_character(t, k, level)
    out = [Fraction(0)] * (prec + 1)
    for n in range(1, prec + 1):
        total = Fraction(0)
        for d in _divisors(n):
            c = chi(d)
            if c:
                m = n // d
                total += c * Fraction(d) ** (k - 1) * f[t * m * m]
        out[n] = total
    return QExpansion._from_list(out, prec)


def lseries_identity_check(f: QExpansion, F: QExpansion, D: int, k: int, level: int = 4) -> bool:
    """Check a(|D|) A_n = sum_{d | n} (D|d) d^(k-1) a(|D| (n/d)^2) wherever computable.

    The symbol (D|d) is taken as a character modulo the level, so it vanishes
    on d sharing a prime with the level.
    """
    sign = -1 if k % 2 else 1
    if sign * D <= 0:
        raise ValueError("need (-1)^k D > 0")
    aD = abs(D)
    if f.prec < aD:
        raise PrecisionExhausted(f"need precision {aD}, have {f.prec}")
    top = min(F.prec, math.isqrt(f.prec // aD))
    if top < 1:
        raise PrecisionExhausted("no coefficient is checkable")
    lhs_scale = f[aD]
    for n in range(1, top + 1):
        total = Fraction(0)
        for d in _divisors(n):
            if math.gcd(d, level) > 1:
                continue
            c = kronecker(D, d)
            if c:
                m = n // d
                total += c * Fraction(d) ** (k - 1) * f[aD * m * m]
        if lhs_scale * F[n] != total:
            return False
    return True
