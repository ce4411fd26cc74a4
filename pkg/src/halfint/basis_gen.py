"""Cusp forms of half-integral weight on Gamma0(4) from theta and the odd-divisor Eisenstein series.

The ring of modular forms of half-integral weight on Gamma0(4) is generated
by theta (weight 1/2) and F = sum_{n odd} sigma_1(n) q^n (weight 2); cusp
forms of weight k + 1/2 are theta*F*(theta^4 - 16F) times forms of weight
k - 4.  The generated space is checked for Hecke stability before use.
"""

from __future__ import annotations

import math

from . import linalg as la
from .errors import ImageEscapesSpan, InvariantViolation, PrecisionExhausted
from .qexp import QExpansion, mul, power
from .spaces import HalfIntegralSpace, T_op, operator_matrix


def theta_series(prec: int) -> QExpansion:
    a = [0] * (prec + 1)
    a[0] = 1
    n = 1
    while n * n <= prec:
        a[n * n] = 2
        n += 1
    return QExpansion(a, prec)


def _sigma1(n: int) -> int:
    total = 0
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            total += d
            if d * d != n:
                total += n // d
    return total


def eis_f(prec: int) -> QExpansion:
    return QExpansion({n: _sigma1(n) for n in range(1, prec + 1, 2)}, prec)


def gen_space_level4(k: int, prec: int, check_primes=(3, 5)) -> HalfIntegralSpace:
    """Echelonized basis of S_{k+1/2}(Gamma0(4)), validated by Hecke stability."""
    theta, F = theta_series(prec), eis_f(prec)
    if k < 4:
        return HalfIntegralSpace(k, 4, [], prec, f"S{2 * k + 1}/2(4)")
    cusp = mul(mul(theta, F), power(theta, 4) - F.scale(16)).truncate(prec)
    gens = []
    for b in range((k - 4) // 2 + 1):
        a = k - 4 - 2 * b
        gens.append(mul(cusp, mul(power(theta, 2 * a, prec), power(F, b, prec))).truncate(prec))
    rows = [g.list() for g in gens]
    R, piv, _ = la.rref(rows)
    basis = [QExpansion(r, prec) for r in R]
    if any(f[0] for f in basis):
        raise InvariantViolation("generated series do not vanish at infinity")
    space = HalfIntegralSpace(k, 4, basis, prec, f"S{2 * k + 1}/2(4)")
    checked = 0
    for q in check_primes:
        if prec // (q * q) >= space.pivot_bound():
            try:
                operator_matrix(space, T_op(q))
            except ImageEscapesSpan as exc:
                raise InvariantViolation(f"generated space is not T_{q * q}-stable: {exc}") from exc
            checked += 1
    if not checked:
        raise PrecisionExhausted(f"precision {prec} is too small to validate the generated space")
    return space
