import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from halfint.arith import CycQ8, eps_quartic
from halfint.errors import CharacterMismatch, PlaceMismatch, UnsupportedCoset
from halfint.local_hecke import (
    T,
    U,
    basis_element,
    coset_count,
    coset_label,
    evaluate,
    identity_element,
    left_cosets,
    normal_form,
    parse_hecke_lines,
    rep,
    support_check,
)
from halfint.metaplectic import (
    IDENTITY,
    LocalCharacter,
    MetaElement,
    default_level,
    gamma_eval,
    h_mat,
    in_k0,
    meta_inv,
    meta_mul,
    w_mat,
    x_mat,
    y_mat,
)

labels = st.builds(lambda kind, n: kind(n), st.sampled_from([T, U]), st.integers(-2, 2))
seeds = st.integers(0, 2**32 - 1)


def _k0(rng, p):
    lev = default_level(p)
    g = IDENTITY
    for _ in range(3):
        kind = rng.randrange(3)
        if kind == 0:
            g = g * x_mat(Fraction(rng.randint(-30, 30), rng.choice([n for n in (1, 2, 3, 5, 7) if n % p])))
        elif kind == 1:
            g = g * y_mat(p**lev * rng.randint(-30, 30))
        else:
            num, den = (rng.choice([n for n in range(1, 16) if n % p]) for _ in range(2))
            g = g * h_mat(Fraction(rng.choice([1, -1]) * num, den))
    return MetaElement(g, rng.choice([1, -1]), p)


def test_coset_label_examples():
    for p in (2, 3, 5):
        assert coset_label(MetaElement(h_mat(p), 1, p)) == T(1)
        assert coset_label(MetaElement(w_mat(Fraction(1, p)), 1, p)) == U(1)
        assert coset_label(MetaElement(x_mat(1) * h_mat(p), 1, p)) == T(1)


def test_unlabelled_coset_at_two():
    # y(2) is in SL2(Z_2) but not in K0(4) and not in any T/U double coset
    x = MetaElement(y_mat(2), 1, 2)
    assert coset_label(x) is None
    with pytest.raises(UnsupportedCoset):
        normal_form(x)
    assert evaluate(identity_element(LocalCharacter(2, 0)), x) == CycQ8.zero()


def test_normal_form_examples():
    p = 3
    for lab in (T(1), U(1), U(-1), T(-2)):
        k1, got, k2 = normal_form(rep(lab, p))
        assert got == lab
        assert meta_mul(k1, meta_mul(rep(lab, p), k2)) == rep(lab, p)
    x = meta_mul(MetaElement(h_mat(3), 1, 3), MetaElement(y_mat(3), 1, 3))
    k1, lab, k2 = normal_form(x)
    assert meta_mul(k1, meta_mul(rep(lab, 3), k2)) == x
    k1, lab, k2 = normal_form(MetaElement(IDENTITY, -1, 3))
    assert lab == T(0) and k2 == MetaElement(IDENTITY, -1, 3)


@given(seeds, st.sampled_from([2, 3, 5, 7]), labels)
def test_normal_form_reconstructs(seed, p, lab):
    rng = random.Random(seed)
    x = meta_mul(_k0(rng, p), meta_mul(rep(lab, p), _k0(rng, p)))
    k1, got, k2 = normal_form(x)
    lev = default_level(p)
    assert got == lab
    assert in_k0(k1.m, p, lev) and in_k0(k2.m, p, lev)
    assert meta_mul(k1, meta_mul(rep(got, p), k2)) == x


def test_left_coset_counts():
    assert len(left_cosets(T(1), 3)) == 9
    assert len(left_cosets(U(1), 3)) == 3
    assert len(left_cosets(U(0), 3)) == 3
    for p in (3, 5):
        for n in (1, 2):
            assert len(left_cosets(T(n), p)) == p ** (2 * n)
            assert len(left_cosets(T(-n), p)) == p ** (2 * n)
            assert len(left_cosets(U(n), p)) == p ** (2 * n - 1)
        for n in (0, 1):
            assert len(left_cosets(U(-n), p)) == p ** (2 * n + 1)
    for lab in (T(1), T(-1), U(0), U(1), U(2), U(-1)):
        assert len(left_cosets(lab, 2)) == coset_count(lab, 2)


@pytest.mark.parametrize("p,lab", [(3, T(1)), (3, U(-1)), (3, T(-2)), (5, U(1)), (2, U(0)), (2, T(1)), (2, U(-1))])
def test_left_cosets_distinct_and_cover(p, lab):
    lev = default_level(p)
    reps = left_cosets(lab, p)
    for a, b in itertools.combinations(reps, 2):
        assert not in_k0((a.m.inv() * b.m), p, lev)
    rng = random.Random(7)
    for _ in range(20):
        x = meta_mul(_k0(rng, p), meta_mul(rep(lab, p), _k0(rng, p)))
        hits = [a for a in reps if in_k0(a.m.inv() * x.m, p, lev)]
        assert len(hits) == 1


def test_support_check():
    for p in (3, 5, 7):
        for kind in ("trivial", "legendre"):
            chi = LocalCharacter(p, kind)
            assert all(support_check(lab, chi) for lab in (T(-2), T(0), T(1), U(-1), U(0), U(1), U(2)))
    quartic = LocalCharacter(5, "quartic")
    for n in (-1, 0, 1, 2):
        assert not support_check(U(n), quartic)
        with pytest.raises(UnsupportedCoset):
            basis_element(U(n), quartic)
    for k in range(4):
        chi = LocalCharacter(2, k)
        assert all(support_check(lab, chi) for lab in (T(-1), T(0), T(1), U(0), U(1), U(-1)))


def test_evaluate_examples():
    for p in (3, 5, 7):
        chi = LocalCharacter(p, "trivial")
        hp = MetaElement(h_mat(p), 1, p)
        assert evaluate(basis_element(T(1), chi), hp) == eps_quartic(p).conj()
        assert evaluate(identity_element(chi), MetaElement(IDENTITY, -1, p)) == -CycQ8.one()
        assert evaluate(basis_element(U(1), chi), hp) == CycQ8.zero()
    with pytest.raises(PlaceMismatch):
        evaluate(identity_element(LocalCharacter(3, "trivial")), MetaElement(IDENTITY, 1, 5))


@given(seeds, st.sampled_from([(3, "trivial"), (3, "legendre"), (7, "legendre"), (2, 0), (2, 3)]), labels)
def test_basis_functions_well_defined(seed, case, lab):
    p, kind = case
    chi = LocalCharacter(p, kind)
    rng = random.Random(seed)
    k1, k2 = _k0(rng, p), _k0(rng, p)
    x = meta_mul(k1, meta_mul(rep(lab, p), k2))
    want = (gamma_eval(chi, k1) * gamma_eval(chi, rep(lab, p)) * gamma_eval(chi, k2)).conj()
    assert evaluate(basis_element(lab, chi), x) == want


def test_convolution_examples():
    chi = LocalCharacter(3, "trivial")
    B = lambda lab: basis_element(lab, chi)  # noqa: E731
    one = identity_element(chi)
    assert B(T(1)) * B(T(1)) == B(T(2))
    assert B(U(0)) * B(U(0)) == B(U(0)).scale(2) + one.scale(3)
    assert (B(U(0)) * B(U(0))).pretty() == "2*U0 + 3"
    for k in range(4):
        u1 = basis_element(U(1), LocalCharacter(2, k))
        assert u1 * u1 == identity_element(LocalCharacter(2, k))


def test_convolution_mismatch():
    a = identity_element(LocalCharacter(3, "trivial"))
    with pytest.raises(CharacterMismatch):
        a * identity_element(LocalCharacter(3, "legendre"))
    with pytest.raises(PlaceMismatch):
        a * identity_element(LocalCharacter(5, "trivial"))


@settings(max_examples=12)
@given(st.sampled_from([(3, "trivial"), (3, "legendre"), (2, 1)]), labels, labels, labels)
def test_convolution_associative(case, l1, l2, l3):
    chi = LocalCharacter(*case)
    a, b, c = (basis_element(lab, chi) for lab in (l1, l2, l3))
    assert (a * b) * c == a * (b * c)


@pytest.mark.parametrize("case", [(3, "trivial"), (3, "legendre"), (5, "trivial")])
def test_presentation_separation(case):
    chi = LocalCharacter(*case)
    gens = {"U0": basis_element(U(0), chi), "U1": basis_element(U(1), chi)}
    words = {}
    for length in range(1, 4):
        for start in ("U0", "U1"):
            names = [start if i % 2 == 0 else ("U1" if start == "U0" else "U0") for i in range(length)]
            e = gens[names[0]]
            for nm in names[1:]:
                e = e * gens[nm]
            words["*".join(names)] = e.leading_label()
    assert len(words) == 6
    assert len(set(words.values())) == len(words)


def test_hecke_lines_roundtrip():
    chi = LocalCharacter(7, "legendre")
    e = basis_element(U(1), chi).scale(CycQ8.i()) + identity_element(chi).scale(Fraction(-3, 2))
    assert parse_hecke_lines(e.lines(), chi) == e
    assert "U 1 0+0*z+1*z^2+0*z^3" in e.lines()
