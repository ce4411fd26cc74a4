"""Exact linear algebra over Q on plain lists of Fractions.

Matrices are lists of rows.  Polynomials are coefficient lists, lowest degree
first.  Only what the space computations need is provided: echelon forms,
kernels, characteristic polynomials and rational roots.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import mpmath

Matrix = list[list[Fraction]]
Poly = list[Fraction]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(A: Matrix) -> Matrix:
    return [list(col) for col in zip(*A)] if A else []


def matmul(A: Matrix, B: Matrix) -> Matrix:
    Bt = transpose(B)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in Bt] for row in A]


def matvec(A: Matrix, v: Sequence[Fraction]) -> list[Fraction]:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in A]


def mat_sub_scalar(A: Matrix, s: Fraction) -> Matrix:
    return [[x - s if i == j else x for j, x in enumerate(row)] for i, row in enumerate(A)]


def is_scalar(A: Matrix) -> bool:
    n = len(A)
    return all(A[i][j] == (A[0][0] if i == j else 0) for i in range(n) for j in range(n))


def rref(rows: Matrix) -> tuple[Matrix, list[int], Matrix]:
    """Reduced row echelon form R with pivots and T such that R = T * rows.

    Zero rows are dropped from R and T.
    """
    n = len(rows)
    work = [list(r) for r in rows]
    trans = identity(n)
    out: list[list[Fraction]] = []
    tout: list[list[Fraction]] = []
    pivots: list[int] = []
    for r, t in zip(work, trans):
        for b, tb, pc in zip(out, tout, pivots):
            f = r[pc]
            if f:
                r = [x - f * y for x, y in zip(r, b)]
                t = [x - f * y for x, y in zip(t, tb)]
        pc = next((j for j, x in enumerate(r) if x), None)
        if pc is None:
            continue
        inv = 1 / r[pc]
        r = [x * inv for x in r]
        t = [x * inv for x in t]
        for j in range(len(out)):
            f = out[j][pc]
            if f:
                out[j] = [x - f * y for x, y in zip(out[j], r)]
                tout[j] = [x - f * y for x, y in zip(tout[j], t)]
        out.append(r)
        tout.append(t)
        pivots.append(pc)
    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    return [out[i] for i in order], [pivots[i] for i in order], [tout[i] for i in order]


def rank(rows: Matrix) -> int:
    return len(rref(rows)[1])


def kernel(A: Matrix, ncols: int | None = None) -> Matrix:
    """Basis of {x : A x = 0}, as a list of vectors."""
    ncols = ncols if ncols is not None else (len(A[0]) if A else 0)
    R, pivots, _ = rref(A) if A else ([], [], [])
    free = [j for j in range(ncols) if j not in set(pivots)]
    basis = []
    for fj in free:
        v = [Fraction(0)] * ncols
        v[fj] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row[fj]
        basis.append(v)
    return basis


def solve_in_span(R: Matrix, pivots: list[int], w: Sequence[Fraction]) -> list[Fraction] | None:
    """Coordinates c with sum c_i R_i = w for an RREF basis R, or None."""
    c = [w[pc] for pc in pivots]
    for j in range(len(w)):
        if sum((ci * row[j] for ci, row in zip(c, R)), Fraction(0)) != w[j]:
            return None
    return c


def span_intersection_dim(A: Matrix, B: Matrix) -> int:
    if not A or not B:
        return 0
    return rank(A) + rank(B) - rank(A + B)


# polynomials


def poly_trim(p: Poly) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_eval(p: Poly, x: Fraction) -> Fraction:
    out = Fraction(0)
    for c in reversed(p):
        out = out * x + c
    return out


def poly_mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] += x * y
    return out


def poly_divmod(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    p, q = poly_trim(p), poly_trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    quo = [Fraction(0)] * max(0, len(p) - len(q) + 1)
    lead = q[-1]
    for i in range(len(quo) - 1, -1, -1):
        f = rem[i + len(q) - 1] / lead
        quo[i] = f
        if f:
            for j, c in enumerate(q):
                rem[i + j] -= f * c
    return poly_trim(quo), poly_trim(rem[: len(q) - 1])


def poly_gcd(p: Poly, q: Poly) -> Poly:
    p, q = poly_trim(p), poly_trim(q)
    while q:
        p, q = q, poly_divmod(p, q)[1]
    if not p:
        return []
    return [c / p[-1] for c in p]


def poly_derivative(p: Poly) -> Poly:
    return poly_trim([i * c for i, c in enumerate(p)][1:])


def mat_poly_eval(p: Poly, A: Matrix) -> Matrix:
    n = len(A)
    out = [[Fraction(0)] * n for _ in range(n)]
    for c in reversed(p):
        out = matmul(out, A)
        for i in range(n):
            out[i][i] += c
    return out


def charpoly(A: Matrix) -> Poly:
    """det(x I - A) by Berkowitz's division-free algorithm."""
    n = len(A)
    if n == 0:
        return [Fraction(1)]
    # vect holds coefficients highest degree first
    vect = [Fraction(1), -A[0][0]]
    for r in range(1, n):
        R = A[r][:r]
        C = [A[i][r] for i in range(r)]
        S = [row[:r] for row in A[:r]]
        a = A[r][r]
        # Toeplitz column: 1, -a, -R C, -R S C, ...
        col = [Fraction(1), -a]
        v = C
        for _ in range(r):
            col.append(-sum((x * y for x, y in zip(R, v)), Fraction(0)))
            v = matvec(S, v)
        new = []
        for i in range(r + 2):
            new.append(sum((col[i - j] * vect[j] for j in range(min(i, r) + 1) if i - j < len(col)), Fraction(0)))
        vect = new
    return list(reversed(vect))


def rational_roots(p: Poly) -> dict[Fraction, int]:
    """Rational roots of p with multiplicities.

    Candidates come from a high-precision numerical solve of the squarefree
    part; each candidate is then confirmed exactly, so the result is exact.
    """
    p = poly_trim(p)
    if len(p) <= 1:
        return {}
    sqf = poly_divmod(p, poly_gcd(p, poly_derivative(p)))[0]
    sqf = [c / sqf[-1] for c in sqf]
    denom = math.lcm(*(c.denominator for c in sqf))
    roots: dict[Fraction, int] = {}
    if len(sqf) == 2:
        cands = [-sqf[0]]
    else:
        scale_bits = max(abs(c.numerator).bit_length() + c.denominator.bit_length() for c in sqf)
        with mpmath.workdps(max(60, scale_bits // 3 + 40)):
            coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(sqf)]
            approx = mpmath.polyroots(coeffs, maxsteps=400, extraprec=400)
            cands = []
            for z in approx:
                if abs(mpmath.im(z)) > mpmath.mpf(10) ** (-10) * (1 + abs(z)):
                    continue
                x = mpmath.re(z)
                for den in _divisors_upto(denom):
                    num = int(mpmath.nint(x * den))
                    cands.append(Fraction(num, den))
    for r in cands:
        if r in roots or poly_eval(sqf, r) != 0:
            continue
        mult = 0
        q = p
        while True:
            quo, rem = poly_divmod(q, [-r, Fraction(1)])
            if rem:
                break
            mult += 1
            q = quo
        roots[r] = mult
    return roots


def _divisors_upto(n: int, limit: int = 64) -> list[int]:
    return [d for d in range(1, min(n, limit) + 1) if n % d == 0] + ([n] if n > limit else [])
