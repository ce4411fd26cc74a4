"""Spaces of half-integral weight cusp forms given by truncated q-expansion bases.

Hecke operators become exact rational matrices in the chosen basis.  The space
is split into joint generalized eigenspaces of the T_{q^2} (Shimura blocks),
each block is tested for newness at the primes dividing 2M through its U_{p^2}
action, and the plus and minus subspaces are extracted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import linalg as la
from .errors import (
    AllLiftsVanish,
    ImageEscapesSpan,
    InvariantViolation,
    PrecisionExhausted,
    RamanujanViolation,
    UndecidedBlock,
)
from .qexp import QExpansion, plus_forbidden_indices, t_op_half, u_op
from .shimura import is_squarefree, sh_lift


def prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n > 1 and prime_factors(n) == [n]


def sturm_bound(k: int, level: int) -> int:
    """Coefficient index certifying equality of weight k + 1/2 forms on Gamma0(level)."""
    index = Fraction(level)
    for p in prime_factors(level):
        index *= 1 + Fraction(1, p)
    return math.ceil(Fraction(2 * k + 1, 24) * index) + 1


@dataclass(frozen=True)
class HeckeOp:
    """T(q) is the half-integral T_{q^2}; U(m) is U_m; I is the identity."""

    kind: str
    n: int = 1

    def apply(self, f: QExpansion, k: int, level: int) -> QExpansion:
        if self.kind == "T":
            return t_op_half(self.n, k, f, level)
        if self.kind == "U":
            return u_op(self.n, f)
        if self.kind == "I":
            return f
        raise ValueError(f"unknown operator kind {self.kind!r}")

    def __str__(self) -> str:
        if self.kind == "T":
            return f"T{self.n * self.n}"
        if self.kind == "U":
            return f"U{self.n}"
        return "I"


def T_op(q: int) -> HeckeOp:
    return HeckeOp("T", q)


def U_op(m: int) -> HeckeOp:
    return HeckeOp("U", m)


@dataclass
class OperatorMatrix:
    """Columns are coordinates of op(basis_i); certified iff precision reaches the Sturm bound."""

    rows: la.Matrix
    precision: int
    certified: bool
    op: Optional[HeckeOp] = None

    def __len__(self) -> int:
        return len(self.rows)

    def __getitem__(self, i):
        return self.rows[i]

    def tag(self) -> str:
        return "certified" if self.certified else f"verified to precision {self.precision}"


class HalfIntegralSpace:
    """S_{k+1/2}(Gamma0(level)) or a subspace, spanned by truncated series."""

    def __init__(self, k: int, level: int, basis: Sequence[QExpansion], prec: int, name: str = ""):
        if level % 4:
            raise ValueError("level must be divisible by 4")
        M = level // 4
        if M % 2 == 0 or any(M % (p * p) == 0 for p in prime_factors(M)):
            raise ValueError("level must be 4M with M odd and squarefree")
        self.k = k
        self.level = level
        self.prec = prec
        self.name = name
        self.basis = [f.truncate(prec) for f in basis]
        rows = [f.list() for f in self.basis]
        R, piv, T = la.rref(rows) if rows else ([], [], [])
        if len(piv) != len(rows):
            raise InvariantViolation("basis is linearly dependent up to the given precision")
        self._R, self._piv, self._T = R, piv, T

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def M(self) -> int:
        return self.level // 4

    def primes_2M(self) -> list[int]:
        return prime_factors(2 * self.M)

    def sturm(self) -> int:
        return sturm_bound(self.k, self.level)

    def pivot_bound(self) -> int:
        return max(self._piv) if self._piv else 0

    def coordinates(self, f: QExpansion) -> list[Fraction]:
        """Coordinates of f in the basis, checked on every coefficient up to min(prec)."""
        P = min(f.prec, self.prec)
        if self._piv and self.pivot_bound() > P:
            raise PrecisionExhausted(f"precision {P} does not separate the basis (needs {self.pivot_bound()})")
        w = f.list()[: P + 1]
        c_r = [w[pc] for pc in self._piv]
        for n in range(P + 1):
            if sum((c * row[n] for c, row in zip(c_r, self._R)), Fraction(0)) != w[n]:
                raise ImageEscapesSpan(f"series leaves the span at q^{n}")
        return [sum((c * self._T[i][j] for i, c in enumerate(c_r)), Fraction(0)) for j in range(self.dim)]

    def contains(self, f: QExpansion) -> bool:
        try:
            self.coordinates(f)
        except ImageEscapesSpan:
            return False
        return True

    def element(self, coords: Sequence[Fraction]) -> QExpansion:
        a = [Fraction(0)] * (self.prec + 1)
        for c, f in zip(coords, self.basis):
            if c:
                fl = f.list()
                for n in range(self.prec + 1):
                    a[n] += c * fl[n]
        return QExpansion(a, self.prec, Fraction(2 * self.k + 1, 2), self.level)

    def subspace(self, vectors: Sequence[Sequence[Fraction]], name: str = "") -> "HalfIntegralSpace":
        return HalfIntegralSpace(self.k, self.level, [self.element(v) for v in vectors], self.prec, name)

    def __repr__(self) -> str:
        return f"HalfIntegralSpace(k={self.k}, level={self.level}, dim={self.dim}, prec={self.prec})"


def operator_matrix(space: HalfIntegralSpace, op: HeckeOp) -> OperatorMatrix:
    images = [op.apply(f, space.k, space.level) for f in space.basis]
    P = min((g.prec for g in images), default=space.prec)
    cols = [space.coordinates(g) for g in images]
    rows = la.transpose(cols) if cols else []
    return OperatorMatrix(rows, P, P >= space.sturm(), op)


def restrict(A: la.Matrix, vectors: la.Matrix) -> la.Matrix:
    """Matrix of A on span(vectors), assuming the span is A-stable."""
    if not vectors:
        return []
    R, piv, T = la.rref(vectors)
    cols = []
    for v in vectors:
        w = la.matvec(A, v)
        c = la.solve_in_span(R, piv, w)
        if c is None:
            raise ImageEscapesSpan("block is not stable under the operator")
        cols.append([sum((ci * T[i][j] for i, ci in enumerate(c)), Fraction(0)) for j in range(len(vectors))])
    return la.transpose(cols)


Eigen = Union[Fraction, tuple]


@dataclass
class Block:
    vectors: la.Matrix
    eigendata: dict = field(default_factory=dict)
    newness: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def describe(self) -> str:
        eig = ",".join(f"T{q * q}:{_render_eigen(v)}" for q, v in sorted(self.eigendata.items()))
        new = ",".join(f"{p}:{v}" for p, v in sorted(self.newness.items()))
        return f"dim {self.dim} eig {eig or '-'} new {new or '-'}"


def _render_eigen(v: Eigen) -> str:
    if isinstance(v, Fraction):
        return str(v)
    return "poly(" + " ".join(str(c) for c in v[1]) + ")"


def _split(M: la.Matrix) -> list[tuple[Eigen, la.Matrix]]:
    """Generalized eigenspaces of M: rational roots split, the rest kept as one factor."""
    n = len(M)
    cp = la.charpoly(M)
    roots = la.rational_roots(cp)
    rest = cp
    parts: list[tuple[Eigen, la.Matrix]] = []
    for r in sorted(roots):
        m = roots[r]
        N = la.mat_sub_scalar(M, r)
        P = la.identity(n)
        for _ in range(m):
            P = la.matmul(P, N)
        parts.append((r, la.kernel(P, n)))
        for _ in range(m):
            rest = la.poly_divmod(rest, [-r, Fraction(1)])[0]
    if len(rest) > 1:
        parts.append((("factor", tuple(rest)), la.kernel(la.mat_poly_eval(rest, M), n)))
    return parts


def _combine(vectors: la.Matrix, coeffs: la.Matrix) -> la.Matrix:
    # coefficient vectors relative to `vectors` -> vectors in the ambient coordinates
    out = []
    for c in coeffs:
        v = [Fraction(0)] * len(vectors[0])
        for ci, b in zip(c, vectors):
            if ci:
                v = [x + ci * y for x, y in zip(v, b)]
        out.append(v)
    return out


def shimura_decompose(space: HalfIntegralSpace, primes: Sequence[int], newness: bool = True) -> list[Block]:
    """Joint generalized eigenspaces of T_{q^2} for q in primes."""
    if space.dim == 0:
        return []
    for q in primes:
        if (2 * space.M) % q == 0:
            raise ValueError(f"prime {q} divides 2M")
    blocks = [Block(la.identity(space.dim))]
    for q in primes:
        A = operator_matrix(space, T_op(q)).rows
        refined = []
        for b in blocks:
            Mb = restrict(A, b.vectors)
            for eig, coeffs in _split(Mb):
                data = dict(b.eigendata)
                data[q] = eig
                refined.append(Block(_combine(b.vectors, coeffs), data))
        blocks = refined
    blocks.sort(key=lambda b: (-b.dim, [_sort_key(b.eigendata[q]) for q in primes]))
    if newness:
        for b in blocks:
            for p in space.primes_2M():
                b.newness[p] = p_new_test(b, p, space)
    return blocks


def _sort_key(v: Eigen):
    return (0, v, ()) if isinstance(v, Fraction) else (1, Fraction(0), v[1])


def up2_block_matrix(block: Block, p: int, space: HalfIntegralSpace) -> la.Matrix:
    A = operator_matrix(space, U_op(p * p)).rows
    return restrict(A, block.vectors)


def p_new_test(block: Block, p: int, space: HalfIntegralSpace) -> str:
    """new / old / undecided from the U_{p^2} action on the block."""
    if (2 * space.M) % p:
        raise ValueError(f"{p} does not divide 2M")
    try:
        M = up2_block_matrix(block, p, space)
    except (PrecisionExhausted, ImageEscapesSpan):
        return "undecided"
    target = Fraction(p) ** (2 * space.k - 2)
    if la.is_scalar(M):
        return "new" if M[0][0] ** 2 == target else "old"
    roots = la.rational_roots(la.charpoly(M))
    if sum(roots.values()) < len(M):
        return "old"
    if any(r * r != target for r in roots):
        return "old"
    return "undecided"


def up2_scalar(block: Block, p: int, space: HalfIntegralSpace) -> Optional[Fraction]:
    M = up2_block_matrix(block, p, space)
    return M[0][0] if la.is_scalar(M) else None


def default_primes(space: HalfIntegralSpace, count: int = 2) -> list[int]:
    """The first primes q not dividing 2M whose T_{q^2} image still separates the basis."""
    out = []
    q = 3
    while len(out) < count:
        if is_prime(q) and (2 * space.M) % q:
            if space.prec // (q * q) < max(space.pivot_bound(), 1):
                break
            out.append(q)
        q += 2
    if len(out) < count and space.dim:
        raise PrecisionExhausted("precision too small for Hecke operators at two primes")
    return out


def minus_space(space: HalfIntegralSpace, primes: Optional[Sequence[int]] = None) -> HalfIntegralSpace:
    if space.dim == 0:
        return space.subspace([], "minus")
    primes = list(primes) if primes else default_primes(space)
    vectors = []
    for b in shimura_decompose(space, primes):
        if any(v == "undecided" for v in b.newness.values()):
            raise UndecidedBlock(b.describe())
        if all(v == "new" for v in b.newness.values()):
            vectors.extend(b.vectors)
    return space.subspace(vectors, "minus")


def plus_space(space: HalfIntegralSpace) -> HalfIntegralSpace:
    if space.dim == 0:
        return space.subspace([], "plus")
    idx = plus_forbidden_indices(space.k, space.prec)
    lists = [f.list() for f in space.basis]
    rows = [[fl[n] for fl in lists] for n in idx]
    rows = [r for r in rows if any(r)]
    vectors = la.kernel(rows, space.dim) if rows else la.identity(space.dim)
    return space.subspace(vectors, "plus")


@dataclass
class NewformData:
    label: str
    weight: int
    level: int
    ap: dict = field(default_factory=dict)

    def validate(self) -> None:
        """Check multiplicativity, prime-power recurrences and |a_p| at primes dividing the level."""
        w = self.weight
        a = {n: Fraction(v) for n, v in self.ap.items()}
        if 1 in a and a[1] != 1:
            raise InvariantViolation(f"{self.label}: a_1 = {a[1]} is not 1")
        for n, v in a.items():
            fac = prime_factors(n)
            if len(fac) > 1:
                q = fac[0]
                qe = q
                while n % (qe * q) == 0:
                    qe *= q
                if qe in a and n // qe in a and a[qe] * a[n // qe] != v:
                    raise InvariantViolation(f"{self.label}: a_{n} is not multiplicative")
            elif len(fac) == 1:
                q = fac[0]
                if n == q:
                    if self.level % q == 0 and self.level % (q * q):
                        if v * v != Fraction(q) ** (w - 2):
                            raise InvariantViolation(f"{self.label}: |a_{q}| != {q}^{w // 2 - 1}")
                    continue
                prev, prev2 = n // q, n // (q * q)
                if q not in a or prev not in a:
                    continue
                if self.level % q == 0:
                    expect = a[q] * a[prev]
                else:
                    if prev2 not in a and prev2 != 1:
                        continue
                    before = a.get(prev2, Fraction(1))
                    expect = a[q] * a[prev] - Fraction(q) ** (w - 1) * before
                if expect != v:
                    raise InvariantViolation(f"{self.label}: recurrence fails at a_{n}")
        for n, v in a.items():
            if is_prime(n) and self.level % n and v * v > 4 * Fraction(n) ** (w - 1):
                raise InvariantViolation(f"{self.label}: a_{n} exceeds the Ramanujan bound")

    def lines(self) -> list[str]:
        return [f"{self.label} {self.weight} {self.level}"] + [f"{p} {v}" for p, v in sorted(self.ap.items())]


def block_eigendata(block: Block, space: HalfIntegralSpace, label: str = "") -> NewformData:
    """Eigen-data of the integral weight form attached to a block through its lifts."""
    if block.dim == 0:
        raise AllLiftsVanish("empty block")
    if not all(isinstance(v, Fraction) for v in block.eigendata.values()):
        raise ValueError("eigen-data needs a block with rational Hecke eigenvalues")
    members = [space.element(v) for v in block.vectors]
    t = next(
        (t for t in range(1, space.prec + 1) if is_squarefree(t) and any(f[t] for f in members)),
        None,
    )
    if t is None:
        raise AllLiftsVanish("every lift vanishes to the available precision")
    f = next(f for f in members if f[t])
    lift = sh_lift(f, t, space.k, space.level)
    lift = lift.scale(1 / lift[1])
    twoM = 2 * space.M
    ap: dict[int, Fraction] = {}
    for q in range(2, lift.prec + 1):
        if is_prime(q) and twoM % q:
            ap[q] = lift[q]
    for q, eig in block.eigendata.items():
        if isinstance(eig, Fraction):
            if q in ap and ap[q] != eig:
                raise InvariantViolation(f"lift coefficient a_{q} = {ap[q]} but T_{q * q} eigenvalue is {eig}")
            ap[q] = eig
    newness = block.newness or {p: p_new_test(block, p, space) for p in space.primes_2M()}
    level = 1
    for p, flag in sorted(newness.items()):
        if flag == "new":
            level *= p
            eta = up2_scalar(block, p, space)
            if eta is not None:
                ap[p] = eta
    data = NewformData(label or f"{2 * space.k}.{level}", 2 * space.k, level, dict(sorted(ap.items())))
    data.validate()
    return data


def block_report(blocks: Sequence[Block]) -> list[str]:
    return [f"block {i} {b.describe()}" for i, b in enumerate(blocks)]


@dataclass(frozen=True)
class Up2Classification:
    kind: str
    eigenvalue: Optional[Fraction] = None


def old_up_matrix(a_p, k: int, p: int) -> la.Matrix:
    """U_p on span(F_n, F_np) for a weight-2k eigenform F with eigenvalue a_p."""
    a_p = Fraction(a_p)
    bound = 4 * Fraction(p) ** (2 * k - 1)
    if a_p * a_p > bound:
        raise RamanujanViolation(f"|a_{p}| = {abs(a_p)} exceeds 2 {p}^({k}-1/2)")
    return [[a_p, Fraction(1)], [-Fraction(p) ** (2 * k - 1), Fraction(0)]]


def up2_eigen_classify(a_p, k: int, p: int) -> Up2Classification:
    """Whether U_p^2 on the old 2-dimensional span has real eigenvalues, and which."""
    M = old_up_matrix(a_p, k, p)
    a_p = M[0][0]
    det = -M[1][0]
    disc = a_p * a_p - 4 * det
    if disc < 0:
        # mu = (a_p +- i sqrt(-disc)) / 2 and mu^2 is real only when a_p = 0
        if a_p == 0:
            return Up2Classification("real", -det)
        return Up2Classification("nonreal")
    return Up2Classification("real")
