import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from halfint.arith import CycQ8, eps_quartic, kronecker
from halfint.errors import NotInK0, OutsideDomain, PlaceMismatch
from halfint.metaplectic import (
    IDENTITY,
    LocalCharacter,
    Mat2,
    MetaElement,
    cocycle_holds,
    commutator_sigma,
    gamma_eval,
    h_mat,
    in_k0,
    in_k1,
    meta_commutator,
    meta_inv,
    meta_mul,
    random_sl2,
    s_factor,
    sigma,
    tau,
    triangular_decompose,
    w_mat,
    x_mat,
    y_mat,
)

PRIMES = [2, 3, 5, 7]
seeds = st.integers(0, 2**32 - 1)


def _k0_element(rng, p, n):
    # random element of K0(p^n): product of x(integer), y(p^n integer), h(unit)
    g = IDENTITY
    for _ in range(3):
        kind = rng.randrange(3)
        if kind == 0:
            g = g * x_mat(rng.randint(-20, 20))
        elif kind == 1:
            g = g * y_mat(p**n * rng.randint(-20, 20))
        else:
            num, den = (rng.choice([n for n in range(1, 14) if n % p]) for _ in range(2))
            g = g * h_mat(Fraction(rng.choice([1, -1]) * num, den))
    return g


def test_mat2_requires_det_one():
    with pytest.raises(ValueError):
        Mat2(1, 1, 1, 1)


@pytest.mark.parametrize("g,want", [(x_mat(5), 1), (Mat2(0, 1, -1, 0), -1), (Mat2(2, 1, 3, 2), 3)])
def test_tau(g, want):
    assert tau(g) == want


@pytest.mark.parametrize("g,want", [(Mat2(1, 0, 3, 1), 1), (Mat2(2, 1, 3, 2), -1), (Mat2(1, 1, 9, 10), 1)])
def test_s_factor(g, want):
    assert s_factor(g, 3) == want


def test_sigma_examples():
    assert sigma(h_mat(3), h_mat(3), 3) == -1
    for p in PRIMES:
        assert sigma(w_mat(1), w_mat(1), p) == 1
        assert sigma(IDENTITY, Mat2(2, 1, 3, 2), p) == 1


def test_meta_mul_examples():
    x = MetaElement(h_mat(3), 1, 3)
    assert meta_mul(x, x) == MetaElement(h_mat(9), -1, 3)
    g = MetaElement(Mat2(2, 1, 3, 2), -1, 5)
    assert meta_mul(MetaElement(IDENTITY, 1, 5), g) == g
    w = MetaElement(w_mat(1), 1, 7)
    assert meta_mul(w, w) == MetaElement(h_mat(-1), 1, 7)


def test_meta_mul_place_mismatch():
    with pytest.raises(PlaceMismatch):
        meta_mul(MetaElement(IDENTITY, 1, 3), MetaElement(IDENTITY, 1, 5))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_meta_inv_examples(p):
    for n in (1, 3, -1):
        inv = meta_inv(MetaElement(h_mat(Fraction(p) ** n), 1, p))
        assert inv == MetaElement(h_mat(Fraction(p) ** -n), kronecker(-1, p), p)
    assert meta_inv(MetaElement(x_mat(4), 1, p)) == MetaElement(x_mat(-4), 1, p)
    assert meta_inv(MetaElement(IDENTITY, -1, p)) == MetaElement(IDENTITY, -1, p)


@given(seeds, st.sampled_from(PRIMES))
def test_cocycle_identity(seed, p):
    rng = random.Random(seed)
    g, h, k = (random_sl2(rng, p) for _ in range(3))
    assert cocycle_holds(g, h, k, p)


@given(seeds, st.sampled_from(PRIMES))
def test_group_law_associative_with_inverse(seed, p):
    rng = random.Random(seed)
    x, y, z = (MetaElement(random_sl2(rng, p), rng.choice([1, -1]), p) for _ in range(3))
    assert meta_mul(meta_mul(x, y), z) == meta_mul(x, meta_mul(y, z))
    one = MetaElement(IDENTITY, 1, p)
    assert meta_mul(x, meta_inv(x)) == one
    assert meta_mul(meta_inv(x), x) == one


@given(seeds, st.sampled_from(PRIMES), st.sampled_from([1, -1]), st.sampled_from([1, -1]))
def test_commutator_sigma_matches_group_law(seed, p, e1, e2):
    rng = random.Random(seed)
    A, B = random_sl2(rng, p), random_sl2(rng, p)
    direct = meta_commutator(meta_inv(MetaElement(B, e2, p)), meta_inv(MetaElement(A, e1, p)))
    assert direct.m == B.inv() * A.inv() * B * A
    assert direct.eps == commutator_sigma(A, B, p)


@given(seeds, st.sampled_from(PRIMES), st.sampled_from("xyh"))
def test_commutator_sigma_closed_form(seed, p, kind):
    rng = random.Random(seed)
    A = random_sl2(rng, p)
    if kind == "h":
        u = Fraction(rng.choice([1, -1]) * rng.choice([1, 2, 4, 8, 11, 13, 16]), rng.choice([1, 11, 13]))
        if u.numerator % p == 0:
            u += 1
        if u.numerator % p == 0:
            u += 1
        B = h_mat(u)
    else:
        s = Fraction(rng.randint(1, 30), rng.choice([1, 3, 7])) * Fraction(p) ** rng.randint(-1, 3)
        B = x_mat(s) if kind == "x" else y_mat(s)
    assert commutator_sigma(A, B, p) == s_factor(B.inv() * A.inv() * B * A, p)


def test_commutator_sigma_examples():
    for p in PRIMES:
        A = random_sl2(random.Random(p), p)
        assert commutator_sigma(A, h_mat(1), p) == 1
        assert commutator_sigma(A, h_mat(-1), p) == 1
    for n in (-1, 0, 1, 2):
        A = h_mat(Fraction(3) ** n)
        assert commutator_sigma(A, x_mat(3 ** max(2 * n, 0)), 3) == 1


def test_subgroup_membership():
    assert in_k0(Mat2(1, 1, 3, 4), 3, 1)
    assert not in_k0(Mat2(1, 0, 1, 1), 3, 1)
    assert not in_k0(h_mat(3), 3, 1)
    assert in_k1(Mat2(4, 1, 3, 1), 3, 1)
    assert not in_k1(Mat2(2, 1, 3, 2), 3, 1)


def test_triangular_decompose_examples():
    s, u, t, delta = triangular_decompose(MetaElement(x_mat(5) * h_mat(2), 1, 3))
    assert t == 0 and delta == 1
    for p in (3, 5, 7):
        A = Mat2(1, 1, p, 1 + p)
        assert triangular_decompose(MetaElement(A, 1, p))[3] == 1
    assert triangular_decompose(MetaElement(IDENTITY, -1, 3)) == (0, 1, 0, -1)
    with pytest.raises(NotInK0):
        triangular_decompose(MetaElement(Mat2(1, 0, 1, 1), 1, 3))


@given(seeds, st.sampled_from(PRIMES))
def test_triangular_decompose_reconstructs(seed, p):
    rng = random.Random(seed)
    n = 2 if p == 2 else 1
    x = MetaElement(_k0_element(rng, p, n), rng.choice([1, -1]), p)
    s, u, t, delta = triangular_decompose(x, n)
    parts = [MetaElement(m, 1, p) for m in (x_mat(s), h_mat(u), y_mat(t))] + [MetaElement(IDENTITY, delta, p)]
    y = parts[0]
    for z in parts[1:]:
        y = meta_mul(y, z)
    assert y == x


def test_gamma_examples():
    for p in (3, 5, 7):
        chi = LocalCharacter(p, "trivial")
        assert gamma_eval(chi, MetaElement(h_mat(p), 1, p)) == eps_quartic(p)
        leg = LocalCharacter(p, "legendre")
        assert gamma_eval(leg, MetaElement(Mat2(1 + p, 1, p, 1), 1, p)) == CycQ8.one()
        assert gamma_eval(chi, MetaElement(IDENTITY, -1, p)) == -CycQ8.one()
    chi2 = LocalCharacter(2, 0)
    assert gamma_eval(chi2, MetaElement(w_mat(1), 1, 2)) == CycQ8.zeta().conj()
    for k in range(4):
        minus_i = gamma_eval(LocalCharacter(2, k), MetaElement(h_mat(-1), 1, 2))
        assert minus_i == -(CycQ8.i() ** (2 * k + 1))


def test_gamma_outside_domain():
    with pytest.raises(OutsideDomain):
        gamma_eval(LocalCharacter(3, "trivial"), MetaElement(Mat2(1, 0, 1, 1), 1, 3))
    with pytest.raises(PlaceMismatch):
        gamma_eval(LocalCharacter(3, "trivial"), MetaElement(IDENTITY, 1, 5))


@given(seeds, st.sampled_from([(3, "trivial"), (3, "legendre"), (5, "legendre"), (7, "legendre"), (5, "quartic"), (2, 0), (2, 1), (2, 2), (2, 3)]))
def test_gamma_multiplicative_on_k0(seed, case):
    p, kind = case
    chi = LocalCharacter(p, kind)
    rng = random.Random(seed)
    n = 2 if p == 2 else 1
    x = MetaElement(_k0_element(rng, p, n), rng.choice([1, -1]), p)
    y = MetaElement(_k0_element(rng, p, n), rng.choice([1, -1]), p)
    assert gamma_eval(chi, meta_mul(x, y)) == gamma_eval(chi, x) * gamma_eval(chi, y)
