"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""

import math
import random
import time
from fractions import Fraction

import pytest

from halfint import local_hecke
from halfint.basis_gen import gen_space_level4
from halfint.data_io import fixture_path, load_space, read_qseries
from halfint.local_hecke import relation_checks
from halfint.metaplectic import LocalCharacter, cocycle_holds, random_sl2
from halfint.qexp import t_op_half, t_op_integral, u_op
from halfint.reproduce import LEVEL12_NAMES, LEVEL12_PRIMES, LEVEL28_PRIMES, coords_of, span_equal
from halfint.shimura import sh_lift
from halfint.spaces import (
    HalfIntegralSpace,
    T_op,
    U_op,
    minus_space,
    operator_matrix,
    plus_space,
    shimura_decompose,
    up2_eigen_classify,
    up2_scalar,
)


@pytest.fixture
def report(capsys):
    def emit(number: int, title: str, ok: bool, detail: str = "") -> None:
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {title}" + (f" ({detail})" if detail else ""))
        assert ok, detail

    return emit


@pytest.fixture(scope="module")
def s28():
    return load_space(fixture_path("level28", "manifest.txt"))


@pytest.fixture(scope="module")
def s12():
    return load_space(fixture_path("level12", "manifest.txt"))


@pytest.fixture(scope="module")
def blocks12(s12):
    return shimura_decompose(s12, LEVEL12_PRIMES)


def _clear_hecke_caches():
    for fn in (
        local_hecke._left_cosets_cached,
        local_hecke._coset_data,
        local_hecke._product_support,
        local_hecke._basis_product,
    ):
        fn.cache_clear()


def _named(space, names):
    return [coords_of(space, {nm: 1}, LEVEL12_NAMES) for nm in names]


def test_criterion_01_cocycle(report):
    start = time.perf_counter()
    failures = 0
    for p in (2, 3, 5, 7):
        rng = random.Random(1000 + p)
        for _ in range(1000):
            g, h, k = (random_sl2(rng, p) for _ in range(3))
            failures += not cocycle_holds(g, h, k, p)
    elapsed = time.perf_counter() - start
    report(1, "cocycle identity, 4000 seeded triples", failures == 0 and elapsed < 5, f"failures={failures}, {elapsed:.2f}s")


def test_criterion_02_odd_relations(report):
    _clear_hecke_caches()
    start = time.perf_counter()
    bad, total = [], 0
    for p in (3, 5, 7):
        for kind in ("trivial", "legendre"):
            for word, lhs, rhs in relation_checks(LocalCharacter(p, kind), bound=2):
                total += 1
                if lhs != rhs:
                    bad.append(f"p={p} {kind} {word}")
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    report(2, "odd-p local Hecke relations", ok, f"{total} identities, failed={bad}, {elapsed:.1f}s")


def test_criterion_03_relations_at_two(report):
    bad, total = [], 0
    for k in range(4):
        for word, lhs, rhs in relation_checks(LocalCharacter(2, k), bound=2):
            total += 1
            if lhs != rhs:
                bad.append(f"k={k} {word}")
    report(3, "p=2 local Hecke relations for each k mod 4", not bad, f"{total} identities, failed={bad}")


def test_criterion_04_level28(report, s28):
    T9, T25, U4 = (operator_matrix(s28, op).rows[0][0] for op in (T_op(3), T_op(5), U_op(4)))
    plus, minus = plus_space(s28), minus_space(s28, LEVEL28_PRIMES)
    ok = (
        s28.dim == 1
        and (T9, T25, U4) == (-2, 0, -1)
        and plus.dim == 0
        and minus.dim == 1
    )
    report(4, "level 28 example", ok, f"dim {s28.dim}, T9 {T9}, T25 {T25}, U4 {U4}, plus {plus.dim}, minus {minus.dim}")


def test_criterion_05_level12(report, s12, blocks12):
    printed_ok = all(
        read_qseries(fixture_path("level12", f"{nm}.qs")).agrees_with(read_qseries(fixture_path("level12", "printed", f"{nm}.qs")))
        for nm in LEVEL12_NAMES
    )
    dims = [b.dim for b in blocks12]
    plus = plus_space(s12)
    plus_named = all(plus.contains(s12.basis[LEVEL12_NAMES.index(nm)]) for nm in ("f1", "f4", "h1", "k1"))
    minus = minus_space(s12, LEVEL12_PRIMES)
    minus_ok = minus.dim == 3 and span_equal(s12, _named(s12, ["l1", "m1", "n1"]), [s12.coordinates(f) for f in minus.basis])
    ok = printed_ok and dims == [4, 2, 2, 2, 1, 1, 1] and plus.dim == 4 and plus_named and minus_ok
    report(5, "level 12 example", ok, f"printed={printed_ok}, blocks {dims}, plus {plus.dim}, minus {minus.dim}")


def _equivariance_failures(space, primes_T, primes_U):
    k, level = space.k, space.level
    bad = []
    for i, f in enumerate(space.basis):
        lift = sh_lift(f, 1, k, level)
        for q in primes_T:
            if not sh_lift(t_op_half(q, k, f, level), 1, k, level).agrees_with(t_op_integral(q, 2 * k, lift)):
                bad.append(f"b{i} T{q * q}")
        for p in primes_U:
            if not sh_lift(u_op(p * p, f), 1, k, level).agrees_with(u_op(p, lift)):
                bad.append(f"b{i} U{p * p}")
    return bad


def test_criterion_06_equivariance(report, s28, s12):
    # at level 12 the Hecke operator at 3 is U_9, matched with U_3 on the lift
    bad = _equivariance_failures(s28, [3, 5], [2, 7])
    bad += _equivariance_failures(s12, [5, 7], [2, 3])
    report(6, "Shimura lift equivariance", not bad, "level 28: T9,T25,U4,U49; level 12: U9,T25,T49,U4; failed=" + str(bad))


def test_criterion_07_minus_u_eigenvalues(report, s28, s12, blocks12):
    bad = []
    etas28 = {}
    for space, blocks in ((s28, shimura_decompose(s28, LEVEL28_PRIMES)), (s12, blocks12)):
        for b in blocks:
            if not all(v == "new" for v in b.newness.values()):
                continue
            for p in space.primes_2M():
                eta = up2_scalar(b, p, space)
                if space is s28:
                    etas28[p] = eta
                if eta is None or abs(eta) != Fraction(p) ** (space.k - 1):
                    bad.append(f"level {space.level} p={p} eta={eta}")
    ok = not bad and etas28.get(2) == -1
    report(7, "U_{p^2} eigenvalue law on minus blocks", ok, "level 28 etas " + ", ".join(f"{p}: {e}" for p, e in sorted(etas28.items())) + f", failed={bad}")


def test_criterion_08_old_space_classification(report):
    rng = random.Random(8)
    bad = 0
    zeros = 0
    for i in range(500):
        p = rng.choice([2, 3, 5, 7, 11, 13])
        k = rng.randint(1, 8)
        top = Fraction(p) ** (2 * k - 1)
        bound = math.isqrt(int(4 * top))
        a_p = 0 if i % 10 == 0 else rng.randint(-bound, bound)
        res = up2_eigen_classify(a_p, k, p)
        if a_p == 0:
            zeros += 1
            bad += not (res.kind == "real" and res.eigenvalue == -top)
        else:
            bad += res.kind != "nonreal"
    report(8, "old-space U_p^2 classification on 500 random a_p", bad == 0, f"mismatches={bad}, a_p=0 cases={zeros}")


def test_criterion_09_level4(report, s12):
    S = gen_space_level4(8, 200)
    stable = all(len(operator_matrix(S, T_op(q)).rows) == S.dim for q in (3, 5))
    plus, minus = plus_space(S), minus_space(S, [3, 5])
    split = (plus.dim, minus.dim, S.dim - plus.dim - minus.dim)
    combos = [{"f1": 1, "f4": -336}, {"f2": 1, "f3": 2, "f4": -256}, {"g1": 1, "g2": 3}]
    embedded = [s12.element(coords_of(s12, c, LEVEL12_NAMES)).truncate(S.prec) for c in combos]
    sub = HalfIntegralSpace(8, 12, embedded, S.prec)
    embeds = all(sub.contains(f) for f in S.basis)
    named = plus.contains(embedded[0]) and minus.contains(embedded[2])
    ok = S.dim == 3 and stable and split == (1, 1, 1) and embeds and named
    report(9, "level 4 generator at k=8", ok, f"dim {S.dim}, split {split}, embeds={embeds}, named={named}")


def test_criterion_10_multiplicity_one(report, s28, s12, blocks12):
    bad = []
    for space, primes, blocks in ((s28, LEVEL28_PRIMES, shimura_decompose(s28, LEVEL28_PRIMES)), (s12, LEVEL12_PRIMES, blocks12)):
        tuples = [tuple(b.eigendata[q] for q in primes) for b in blocks]
        for i, b in enumerate(blocks):
            if all(v == "new" for v in b.newness.values()):
                if tuples.count(tuples[i]) != 1:
                    bad.append(f"level {space.level} block {i}")
    report(10, "strong multiplicity one on minus blocks", not bad, f"repeated eigenvalue tuples: {bad}")
