"""The metaplectic double cover of SL2(Q_p) with exact rational data.

Elements are pairs (g, eps) with g a rational matrix of determinant one and
eps = +1 or -1; multiplication uses the Kubota cocycle sigma_p, normalised by
the factor s_p so that the standard compact open subgroups split.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .arith import (
    CycQ8,
    RatLike,
    as_rat,
    eps_quartic,
    hilbert,
    is_p_integral,
    kronecker,
    render_rat,
    valuation,
)
from .errors import NotInK0, OutsideDomain, PlaceMismatch


@dataclass(frozen=True)
class Mat2:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __init__(self, a: RatLike, b: RatLike, c: RatLike, d: RatLike):
        a, b, c, d = (as_rat(v) for v in (a, b, c, d))
        if a * d - b * c != 1:
            raise ValueError(f"determinant {a * d - b * c} is not 1")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction, c: Fraction, d: Fraction) -> "Mat2":
        # trusted constructor for products and inverses of valid matrices
        m = object.__new__(cls)
        object.__setattr__(m, "a", a)
        object.__setattr__(m, "b", b)
        object.__setattr__(m, "c", c)
        object.__setattr__(m, "d", d)
        return m

    def __mul__(self, other: "Mat2") -> "Mat2":
        sa, sb, sc, sd = self.a, self.b, self.c, self.d
        oa, ob, oc, od = other.a, other.b, other.c, other.d
        return Mat2._raw(sa * oa + sb * oc, sa * ob + sb * od, sc * oa + sd * oc, sc * ob + sd * od)

    def inv(self) -> "Mat2":
        return Mat2._raw(self.d, -self.b, -self.c, self.a)

    def entries(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def __repr__(self) -> str:
        a, b, c, d = (render_rat(v) for v in self.entries())
        return f"[[{a},{b}],[{c},{d}]]"


IDENTITY = Mat2(1, 0, 0, 1)


_ZERO, _ONE = Fraction(0), Fraction(1)


def x_mat(s: RatLike) -> Mat2:
    return Mat2._raw(_ONE, as_rat(s), _ZERO, _ONE)


def y_mat(s: RatLike) -> Mat2:
    return Mat2._raw(_ONE, _ZERO, as_rat(s), _ONE)


def w_mat(t: RatLike) -> Mat2:
    t = as_rat(t)
    return Mat2._raw(_ZERO, t, -1 / t, _ZERO)


def h_mat(t: RatLike) -> Mat2:
    t = as_rat(t)
    return Mat2._raw(t, _ZERO, _ZERO, 1 / t)


@dataclass(frozen=True)
class MetaElement:
    m: Mat2
    eps: int
    place: int

    def __post_init__(self):
        if self.eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")

    def __mul__(self, other: "MetaElement") -> "MetaElement":
        return meta_mul(self, other)

    def inv(self) -> "MetaElement":
        return meta_inv(self)


def lift(m: Mat2, p: int, eps: int = 1) -> MetaElement:
    return MetaElement(m, eps, p)


def default_level(p: int) -> int:
    """Exponent n of the Iwahori-type subgroup K0(p^n) used at p."""
    return 2 if p == 2 else 1


def tau(g: Mat2) -> Fraction:
    return g.c if g.c != 0 else g.d


def s_factor(g: Mat2, p: int) -> int:
    if g.c != 0 and g.d != 0 and valuation(g.c, p) % 2:
        return hilbert(g.c, g.d, p)
    return 1


def sigma(g: Mat2, h: Mat2, p: int, gh: Mat2 | None = None) -> int:
    if gh is None:
        gh = g * h
    t = tau(gh)
    return hilbert(t * tau(g), t * tau(h), p) * s_factor(g, p) * s_factor(h, p) * s_factor(gh, p)


def meta_mul(x: MetaElement, y: MetaElement) -> MetaElement:
    if x.place != y.place:
        raise PlaceMismatch(f"places {x.place} and {y.place} differ")
    gh = x.m * y.m
    return MetaElement(gh, x.eps * y.eps * sigma(x.m, y.m, x.place, gh), x.place)


def sigma_inverse_pair(A: Mat2, p: int) -> int:
    """sigma_p(A, A^-1) by the case analysis on the entries of A."""
    a, _, c, d = A.entries()
    if c == 0:
        return hilbert(a, a, p)
    if valuation(c, p) % 2 == 0:
        return 1
    if d != 0 and a != 0:
        return hilbert(c, d, p) * hilbert(-c, a, p)
    if d != 0:
        return hilbert(c, d, p)
    if a != 0:
        return hilbert(-c, a, p)
    return 1


def meta_inv(x: MetaElement) -> MetaElement:
    return MetaElement(x.m.inv(), x.eps * sigma_inverse_pair(x.m, x.place), x.place)


def meta_commutator(x: MetaElement, y: MetaElement) -> MetaElement:
    """x y x^-1 y^-1 computed through the group law."""
    return meta_mul(meta_mul(meta_mul(x, y), meta_inv(x)), meta_inv(y))


def commutator_sigma(A: Mat2, B: Mat2, p: int) -> int:
    """Sign of [(B,e2)^-1, (A,e1)^-1], which lies over B^-1 A^-1 B A."""
    Ai, Bi = A.inv(), B.inv()
    BA = B * A
    return (
        sigma(A, Ai, p)
        * sigma(B, Bi, p)
        * sigma(B, A, p)
        * sigma(Ai, BA, p)
        * sigma(Bi, Ai * BA, p)
    )


def in_k0(g: Mat2, p: int, n: int) -> bool:
    if not all(is_p_integral(v, p) for v in g.entries()):
        return False
    return g.c == 0 or valuation(g.c, p) >= n


def in_k1(g: Mat2, p: int, n: int) -> bool:
    if not in_k0(g, p, n):
        return False
    return g.a == 1 or valuation(g.a - 1, p) >= n


def triangular_decompose(
    x: MetaElement, n: int | None = None
) -> tuple[Fraction, Fraction, Fraction, int]:
    """Write x = (x(s),1)(h(u),1)(y(t),1)(I, sign); returns (s, u, t, sign)."""
    p = x.place
    n = default_level(p) if n is None else n
    A = x.m
    if not in_k0(A, p, n) or A.d == 0 or valuation(A.d, p) != 0:
        raise NotInK0(f"{A!r} is not in K0({p}^{n})")
    a, b, c, d = A.entries()
    if c == 0:
        delta = 1
    elif valuation(c, p) % 2:
        delta = hilbert(d, -1, p)
    else:
        delta = hilbert(-c, d, p)
    return b / d, 1 / d, c / d, x.eps * delta


def _unit_mod(u: Fraction, modulus: int) -> int:
    return u.numerator * pow(u.denominator, -1, modulus) % modulus


@dataclass(frozen=True)
class LocalCharacter:
    """A genuine character of the Iwahori-type subgroup at p.

    For odd p, kind is "trivial" or "legendre" (a quadratic character of
    (Z/p)^x pulled back along d mod p), or "quartic" for an order-four
    character used to probe the support conditions.  For p = 2, kind is an
    integer k mod 4 with gamma((-I,1)) = -i^(2k+1).
    """

    place: int
    kind: Union[str, int]

    def __post_init__(self):
        if self.place == 2:
            if not isinstance(self.kind, int):
                raise ValueError("the character at 2 is given by an integer k mod 4")
            object.__setattr__(self, "kind", self.kind % 4)
        elif self.kind not in ("trivial", "legendre", "quartic"):
            raise ValueError(f"unknown character kind {self.kind!r}")
        elif self.kind == "quartic" and self.place % 4 != 1:
            raise ValueError("an order-four character needs p = 1 mod 4")

    def unit_value(self, u: Fraction) -> CycQ8:
        """Value of the underlying character of (Z/p)^x at u mod p (odd p)."""
        p = self.place
        r = _unit_mod(as_rat(u), p)
        if self.kind == "trivial":
            return CycQ8.one()
        if self.kind == "legendre":
            return CycQ8.from_rat(kronecker(r, p))
        g = _primitive_root(p)
        e = 0
        while pow(g, e, p) != r:
            e += 1
        return CycQ8.i() ** (e % 4)

    def quadratic_sign(self) -> int:
        """gamma-bar(-1) for odd p as a sign, i.e. chi(-1)."""
        v = self.unit_value(Fraction(-1))
        return 1 if v == CycQ8.one() else -1


def _primitive_root(p: int) -> int:
    phi = p - 1
    factors = [q for q in range(2, phi + 1) if phi % q == 0 and all(q % r for r in range(2, q))]
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in factors):
            return g
    return 1


def _gamma_tilde_2(d: Fraction) -> CycQ8:
    return CycQ8.one() if _unit_mod(d, 4) == 1 else -CycQ8.i()


def _gamma_k0(chi: LocalCharacter, A: Mat2) -> CycQ8:
    p = chi.place
    if p == 2:
        k = chi.kind
        d = A.d
        chi02 = CycQ8.from_rat(kronecker(-1, _unit_mod(d, 4)) ** k)
        if A.c != 0:
            eps2 = _gamma_tilde_2(d).inverse() * hilbert(A.c, d, 2) * s_factor(A, 2)
        else:
            eps2 = _gamma_tilde_2(d)
        return eps2 * chi02
    return chi.unit_value(A.d)


def _gamma_w1(chi: LocalCharacter) -> CycQ8:
    if chi.place == 2:
        minus_i = _gamma_k0(chi, h_mat(-1))
        return (CycQ8.one() + minus_i) / CycQ8.sqrt2()
    return CycQ8.one()


def _gamma_h(chi: LocalCharacter, t: Fraction) -> CycQ8:
    # (h(t),1) = (h(p^n),1)(h(u),1)(I,(p^n,u)_p)
    p = chi.place
    n = valuation(t, p)
    u = t / Fraction(p) ** n
    if p == 2 or n % 2 == 0:
        base = CycQ8.one()
    else:
        base = eps_quartic(p)
    return base * _gamma_k0(chi, h_mat(u)) * hilbert(Fraction(p) ** n, u, p)


def gamma_eval(chi: LocalCharacter, x: MetaElement) -> CycQ8:
    """Evaluate the genuine character on K0-bar or on the torus normaliser."""
    p = chi.place
    if x.place != p:
        raise PlaceMismatch(f"character at {p}, element at {x.place}")
    A = x.m
    if in_k0(A, p, default_level(p)):
        if p == 2:
            return _gamma_k0(chi, A) * x.eps
        *_, sign = triangular_decompose(x)
        return chi.unit_value(A.d) * sign
    if A.b == 0 and A.c == 0:
        return _gamma_h(chi, A.a) * x.eps
    if A.a == 0 and A.d == 0:
        # (w(t),1) = (h(t),1)(w(1),1)(I,(t,-1)_p)
        t = A.b
        return _gamma_h(chi, t) * _gamma_w1(chi) * hilbert(t, -1, p) * x.eps
    raise OutsideDomain(f"{A!r} is neither in K0 nor in the torus normaliser")


def cocycle_holds(g: Mat2, h: Mat2, k: Mat2, p: int) -> bool:
    """sigma(g,h) sigma(gh,k) = sigma(g,hk) sigma(h,k)."""
    return sigma(g, h, p) * sigma(g * h, k, p) == sigma(g, h * k, p) * sigma(h, k, p)


def random_sl2(rng, p: int, depth: int = 3) -> Mat2:
    """A random element of SL2(Q) with p-power and prime-to-p denominators.

    Built as a product of unipotent, torus and Weyl factors so that every
    entry pattern (zero and nonzero c, d) occurs with positive probability.
    """

    def rat() -> Fraction:
        num = rng.randint(-40, 40) or 1
        den = rng.choice([1, 1, 2, 3, 5, 7, 9, 25]) * p ** rng.randint(0, 2)
        return Fraction(num * p ** rng.randint(0, 2), den)

    g = IDENTITY
    for _ in range(rng.randint(1, depth)):
        kind = rng.randrange(4)
        if kind == 0:
            g = g * x_mat(rat())
        elif kind == 1:
            g = g * y_mat(rat())
        elif kind == 2:
            g = g * h_mat(rat())
        else:
            g = g * w_mat(rat())
    return g
