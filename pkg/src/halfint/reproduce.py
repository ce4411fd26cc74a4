"""Reproduction checks on the bundled fixtures, as (check_id, ok, detail) triples."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator

from .basis_gen import gen_space_level4
from .data_io import fixture_path, load_space, read_qseries
from .qexp import t_op_half, t_op_integral, u_op
from .shimura import sh_lift
from .spaces import (
    HalfIntegralSpace,
    T_op,
    U_op,
    minus_space,
    operator_matrix,
    plus_space,
    shimura_decompose,
    up2_scalar,
)
from . import linalg as la

Check = tuple[str, bool, str]

LEVEL12_NAMES = ["f1", "f2", "f3", "f4", "g1", "g2", "h1", "h2", "k1", "k2", "l1", "m1", "n1"]
LEVEL12_PRIMES = [5, 7]
LEVEL28_PRIMES = [3, 5]


def span_equal(space: HalfIntegralSpace, A: la.Matrix, B: la.Matrix) -> bool:
    """Equality of two spans of coordinate vectors."""
    r = la.rank(A) if A else 0
    return r == (la.rank(B) if B else 0) and r == (la.rank(A + B) if A or B else 0)


def coords_of(space: HalfIntegralSpace, combo: dict[str, int], names: list[str]) -> list[Fraction]:
    v = [Fraction(0)] * space.dim
    for nm, c in combo.items():
        v[names.index(nm)] += c
    return v


def printed_agreement(level_dir: str, names: list[str]) -> Iterator[Check]:
    for nm in names:
        full = read_qseries(fixture_path(level_dir, f"{nm}.qs"))
        printed = read_qseries(fixture_path(level_dir, "printed", f"{nm}.qs"))
        yield f"{level_dir}/printed/{nm}", full.agrees_with(printed), f"checked through q^{printed.prec}"


def equivariance(space: HalfIntegralSpace, primes: list[int], tag: str) -> Iterator[Check]:
    """sh_lift commutes with T_{q^2} -> T_q and U_{p^2} -> U_p on every basis element."""
    k = space.k
    for i, f in enumerate(space.basis):
        for q in primes:
            left = sh_lift(t_op_half(q, k, f), 1, k, space.level)
            right = t_op_integral(q, 2 * k, sh_lift(f, 1, k, space.level))
            yield f"{tag}/equivariance/T{q * q}/b{i}", left.agrees_with(right), f"to q^{min(left.prec, right.prec)}"
        for p in space.primes_2M():
            left = sh_lift(u_op(p * p, f), 1, k, space.level)
            right = u_op(p, sh_lift(f, 1, k, space.level))
            yield f"{tag}/equivariance/U{p * p}/b{i}", left.agrees_with(right), f"to q^{min(left.prec, right.prec)}"


def example_level28() -> Iterator[Check]:
    yield from printed_agreement("level28", ["f28"])
    S = load_space(fixture_path("level28", "manifest.txt"))
    yield "level28/dim", S.dim == 1, f"dim {S.dim}"
    for q, expect in ((3, -2), (5, 0)):
        M = operator_matrix(S, T_op(q))
        yield f"level28/T{q * q}", M.rows == [[Fraction(expect)]], f"{M.rows} ({M.tag()})"
    M = operator_matrix(S, U_op(4))
    yield "level28/U4", M.rows == [[Fraction(-1)]], f"{M.rows} ({M.tag()})"
    yield "level28/plus", plus_space(S).dim == 0, f"dim {plus_space(S).dim}"
    yield "level28/minus", minus_space(S, LEVEL28_PRIMES).dim == 1, "minus space is everything"
    yield from equivariance(S, LEVEL28_PRIMES, "level28")


def example_level12() -> Iterator[Check]:
    yield from printed_agreement("level12", LEVEL12_NAMES)
    S = load_space(fixture_path("level12", "manifest.txt"))
    blocks = shimura_decompose(S, LEVEL12_PRIMES)
    dims = [b.dim for b in blocks]
    yield "level12/blocks", dims == [4, 2, 2, 2, 1, 1, 1], f"dims {dims}"
    groups = [["f1", "f2", "f3", "f4"], ["g1", "g2"], ["h1", "h2"], ["k1", "k2"], ["l1"], ["m1"], ["n1"]]
    for grp in groups:
        want = [coords_of(S, {nm: 1}, LEVEL12_NAMES) for nm in grp]
        ok = any(span_equal(S, want, b.vectors) for b in blocks)
        yield f"level12/block/{'+'.join(grp)}", ok, "named forms span a Shimura block"
    P = plus_space(S)
    plus_named = all(P.contains(S.basis[LEVEL12_NAMES.index(nm)]) for nm in ("f1", "f4", "h1", "k1"))
    yield "level12/plus", P.dim == 4 and plus_named, f"dim {P.dim}"
    Mn = minus_space(S, LEVEL12_PRIMES)
    want = [coords_of(S, {nm: 1}, LEVEL12_NAMES) for nm in ("l1", "m1", "n1")]
    got = [S.coordinates(f) for f in Mn.basis]
    yield "level12/minus", Mn.dim == 3 and span_equal(S, want, got), f"dim {Mn.dim}"
    for b in blocks:
        if all(b.newness[p] == "new" for p in S.primes_2M()):
            etas = {p: up2_scalar(b, p, S) for p in S.primes_2M()}
            ok = all(e is not None and e * e == Fraction(p) ** (2 * S.k - 2) for p, e in etas.items())
            yield f"level12/Ueigen/{b.eigendata[5]}", ok, str(etas)
    yield from equivariance(S, LEVEL12_PRIMES, "level12")


def example_level4() -> Iterator[Check]:
    S = gen_space_level4(8, 200)
    yield "level4/dim", S.dim == 3, f"dim {S.dim}"
    plus, minus = plus_space(S), minus_space(S, [3, 5])
    yield "level4/split", (plus.dim, minus.dim, S.dim - plus.dim - minus.dim) == (1, 1, 1), f"plus {plus.dim} minus {minus.dim}"
    big = load_space(fixture_path("level12", "manifest.txt"))
    named = [
        {"f1": 1, "f4": -336},
        {"f2": 1, "f3": 2, "f4": -256},
        {"g1": 1, "g2": 3},
    ]
    embedded = [big.element(coords_of(big, c, LEVEL12_NAMES)).truncate(S.prec) for c in named]
    sub = HalfIntegralSpace(8, 12, embedded, S.prec)
    ok = all(sub.contains(f) for f in S.basis)
    yield "level4/embedding", ok and sub.dim == S.dim, "level-4 space equals the named level-12 combinations"
    yield "level4/plus", sub.contains(plus.basis[0]) and plus.contains(embedded[0]), "plus space is f1 - 336 f4"
    yield "level4/minus", minus.contains(embedded[2]), "minus space is g1 + 3 g2"


def all_checks() -> Iterator[Check]:
    yield from example_level28()
    yield from example_level12()
    yield from example_level4()
