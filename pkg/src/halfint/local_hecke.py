"""Genuine Iwahori-type Hecke algebras of the metaplectic cover at one prime.

The subgroup is K0(p) for odd p and K0(4) for p = 2.  Double cosets are
labelled T(n) (through (h(p^n),1)) and U(n) (through (w(p^-n),1)).  Basis
functions take the value conj(gamma) on the representatives and transform by
conj(gamma) on both sides; products are computed by the finite convolution sum
over left cosets, with the subgroup given volume one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

from .arith import CycQ8, render_rat, valuation
from .errors import CharacterMismatch, PlaceMismatch, UnsupportedCoset
from .metaplectic import (
    IDENTITY,
    LocalCharacter,
    Mat2,
    MetaElement,
    commutator_sigma,
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


@dataclass(frozen=True, order=True)
class CosetLabel:
    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in ("T", "U"):
            raise ValueError("label kind must be T or U")

    def __str__(self) -> str:
        return f"{self.kind}{self.n}"


def T(n: int) -> CosetLabel:
    return CosetLabel("T", n)


def U(n: int) -> CosetLabel:
    return CosetLabel("U", n)


def rep_matrix(label: CosetLabel, p: int) -> Mat2:
    if label.kind == "T":
        return h_mat(Fraction(p) ** label.n)
    return w_mat(Fraction(p) ** (-label.n))


def rep(label: CosetLabel, p: int) -> MetaElement:
    return MetaElement(rep_matrix(label, p), 1, p)


def _ord(x: Fraction, p: int) -> float:
    return valuation(x, p) if x != 0 else float("inf")


def _stabiliser_exponents(label: CosetLabel, lev: int) -> tuple[int, int]:
    """(B0, C0) with K0 cap g K0 g^-1 = {ord b >= B0, ord c >= C0}."""
    if label.kind == "T":
        n = label.n
        return max(0, 2 * n), max(lev, lev - 2 * n)
    m = -label.n
    return max(0, lev + 2 * m), max(lev, -2 * m)


def coset_count(label: CosetLabel, p: int, lev: Optional[int] = None) -> int:
    lev = default_level(p) if lev is None else lev
    b0, c0 = _stabiliser_exponents(label, lev)
    return p ** (b0 + c0 - lev)


def _reduce_mod(x: Fraction, e: int, p: int) -> Fraction:
    # canonical representative of x modulo p^e Z_p
    if x == 0:
        return Fraction(0)
    r = max(0, -valuation(x, p), -e)
    scaled = x * Fraction(p) ** r
    modulus = p ** (r + e)
    if modulus == 1:
        return Fraction(0)
    num = scaled.numerator * pow(scaled.denominator, -1, modulus) % modulus
    return Fraction(num, p**r)


def _lattice_key(v1: tuple[Fraction, Fraction], v2: tuple[Fraction, Fraction], p: int):
    # Hermite form over Z_p of the lattice spanned by the columns v1, v2
    if _ord(v1[1], p) < _ord(v2[1], p):
        piv, other = v1, v2
    else:
        piv, other = v2, v1
    ratio = other[1] / piv[1]
    top = other[0] - ratio * piv[0]
    e1, e2 = valuation(top, p), valuation(piv[1], p)
    unit = piv[1] / Fraction(p) ** e2
    return e1, e2, _reduce_mod(piv[0] / unit, e1, p)


def coset_key(g: Mat2, p: int, lev: Optional[int] = None):
    """A canonical invariant of the left coset g.K0(p^lev)."""
    lev = default_level(p) if lev is None else lev
    col1 = (g.a, g.c)
    col2 = (g.b, g.d)
    scaled = (g.b * p**lev, g.d * p**lev)
    return _lattice_key(col1, col2, p), _lattice_key(col1, scaled, p)


def left_cosets(label: CosetLabel, p: int, lev: Optional[int] = None) -> list[MetaElement]:
    """Pairwise inequivalent representatives alpha_i with K0 g K0 = U alpha_i K0."""
    lev = default_level(p) if lev is None else lev
    b0, c0 = _stabiliser_exponents(label, lev)
    g = rep_matrix(label, p)
    out: list[MetaElement] = []
    seen = set()
    for s in range(p**b0):
        for t in range(p ** (c0 - lev)):
            alpha = x_mat(s) * y_mat(t * p**lev) * g
            key = coset_key(alpha, p, lev)
            if key in seen:
                continue
            seen.add(key)
            out.append(MetaElement(alpha, 1, p))
    return out


def _pivot_reduce(g: Mat2, p: int, lev: int):
    """Reduce g to a monomial matrix by K0-row and K0-column operations.

    Returns (L, label, R) with g = L * rep(label) * R and L, R in K0, or None
    when no admissible pivot exists (only possible for p = 2).
    """
    a, b, c, d = g.entries()
    oa, ob, oc, od = (_ord(v, p) for v in (a, b, c, d))
    L, R = IDENTITY, IDENTITY
    M = g
    if ob >= oa and oc >= oa + lev:
        # clear b with a column op, c with a row op
        E = x_mat(-b / a)
        M, R = M * E, E.inv() * R
        F = y_mat(-M.c / M.a)
        M, L = F * M, L * F.inv()
        n = valuation(M.a, p)
        unit = M.a / Fraction(p) ** n
        return L, T(n), h_mat(unit) * R
    if ob >= od and oc >= od + lev:
        E = x_mat(-b / d)
        M, L = E * M, L * E.inv()
        F = y_mat(-M.c / M.d)
        M, R = M * F, F.inv() * R
        m = valuation(M.d, p)
        unit = M.d / Fraction(p) ** m
        return L, T(-m), h_mat(1 / unit) * R
    if oa >= ob + lev and od >= ob + lev:
        E = y_mat(-a / b)
        M, R = M * E, E.inv() * R
        F = y_mat(-M.d / M.b)
        M, L = F * M, L * F.inv()
        m = valuation(M.b, p)
        unit = M.b / Fraction(p) ** m
        # w(p^m u) = w(p^m) h(1/u)
        return L, U(-m), h_mat(1 / unit) * R
    if oa >= oc and od >= oc:
        E = x_mat(-a / c)
        M, L = E * M, L * E.inv()
        F = x_mat(-M.d / M.c)
        M, R = M * F, F.inv() * R
        t = M.b
        m = valuation(t, p)
        unit = t / Fraction(p) ** m
        return L, U(-m), h_mat(1 / unit) * R
    return None


def normal_form(x: MetaElement, lev: Optional[int] = None):
    """Return (k1, label, k2) with k1 * rep(label) * k2 = x and k1, k2 in K0-bar."""
    p = x.place
    lev = default_level(p) if lev is None else lev
    found = _pivot_reduce(x.m, p, lev)
    if found is None:
        raise UnsupportedCoset(f"{x.m!r} lies outside every T/U double coset")
    L, label, R = found
    k1 = MetaElement(L, 1, p)
    partial = meta_mul(k1, rep(label, p))
    trial = meta_mul(partial, MetaElement(R, 1, p))
    k2 = MetaElement(R, trial.eps * x.eps, p)
    return k1, label, k2


def coset_label(x: MetaElement, lev: Optional[int] = None) -> Optional[CosetLabel]:
    """The T/U label of the double coset of x, or None if it has no such label."""
    lev = default_level(x.place) if lev is None else lev
    found = _pivot_reduce(x.m, x.place, lev)
    return None if found is None else found[1]


def _unit_generators(p: int) -> list[int]:
    if p == 2:
        return [-1, 3, 5]
    return list(range(2, p)) + [p + 1, -1]


def support_check(label: CosetLabel, chi: LocalCharacter, lev: Optional[int] = None) -> bool:
    """True iff gamma kills every commutator [k^-1, g^-1] with k in K0 cap gK0g^-1."""
    p = chi.place
    lev = default_level(p) if lev is None else lev
    b0, c0 = _stabiliser_exponents(label, lev)
    A = rep_matrix(label, p)
    generators = [x_mat(p**b0), y_mat(p**c0)]
    generators += [h_mat(u) for u in _unit_generators(p)]
    one = CycQ8.one()
    for B in generators:
        comm = B.inv() * A.inv() * B * A
        xi = commutator_sigma(A, B, p)
        if gamma_eval(chi, MetaElement(comm, xi, p)) != one:
            return False
    return True


@dataclass(frozen=True)
class HeckeElement:
    place: int
    level_exponent: int
    char: LocalCharacter
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {lab: c for lab, c in self.coeffs.items() if not c.is_zero()}
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    def _check(self, other: "HeckeElement"):
        if self.place != other.place or self.level_exponent != other.level_exponent:
            raise PlaceMismatch("Hecke elements live at different places")
        if self.char != other.char:
            raise CharacterMismatch("Hecke elements have different characters")

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        self._check(other)
        out = dict(self.coeffs)
        for lab, c in other.coeffs.items():
            out[lab] = out.get(lab, CycQ8.zero()) + c
        return HeckeElement(self.place, self.level_exponent, self.char, out)

    def __neg__(self) -> "HeckeElement":
        return self.scale(CycQ8.from_rat(-1))

    def __sub__(self, other: "HeckeElement") -> "HeckeElement":
        return self + (-other)

    def scale(self, s) -> "HeckeElement":
        s = CycQ8._coerce(s)
        return HeckeElement(
            self.place, self.level_exponent, self.char, {lab: s * c for lab, c in self.coeffs.items()}
        )

    def __mul__(self, other: "HeckeElement") -> "HeckeElement":
        return convolve(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return (
            self.place == other.place
            and self.level_exponent == other.level_exponent
            and self.char == other.char
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.place, self.level_exponent, self.char, tuple(self.coeffs.items())))

    def support(self) -> list[CosetLabel]:
        return list(self.coeffs)

    def leading_label(self) -> Optional[CosetLabel]:
        if not self.coeffs:
            return None
        return max(self.coeffs, key=lambda lab: (coset_count(lab, self.place, self.level_exponent), lab))

    def lines(self) -> list[str]:
        return [f"{lab.kind} {lab.n} {c.render()}" for lab, c in self.coeffs.items()]

    def pretty(self) -> str:
        """Human-readable sum such as '2*U0 + 3', with the unit T0 written last."""
        if not self.coeffs:
            return "0"
        labels = sorted(self.coeffs, key=lambda lab: (lab == T(0), lab))
        parts = []
        for lab in labels:
            c = self.coeffs[lab]
            coef = render_rat(c.c[0]) if c.is_rational() else f"({c.render()})"
            if lab == T(0):
                parts.append(coef)
            elif coef == "1":
                parts.append(str(lab))
            elif coef == "-1":
                parts.append(f"-{lab}")
            else:
                parts.append(f"{coef}*{lab}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"HeckeElement[p={self.place}]({self.pretty()})"


def parse_hecke_lines(lines: Iterable[str], chi: LocalCharacter) -> HeckeElement:
    coeffs = {}
    for line in lines:
        kind, n, value = line.split()
        coeffs[CosetLabel(kind, int(n))] = CycQ8.parse(value)
    return HeckeElement(chi.place, default_level(chi.place), chi, coeffs)


def basis_element(label: CosetLabel, chi: LocalCharacter) -> HeckeElement:
    if not support_check(label, chi):
        raise UnsupportedCoset(f"no function in the algebra is supported on {label}")
    p = chi.place
    return HeckeElement(p, default_level(p), chi, {label: CycQ8.one()})


def identity_element(chi: LocalCharacter) -> HeckeElement:
    return basis_element(T(0), chi)


def _basis_value(label: CosetLabel, chi: LocalCharacter, x: MetaElement) -> CycQ8:
    try:
        k1, lab, k2 = normal_form(x)
    except UnsupportedCoset:
        return CycQ8.zero()
    if lab != label:
        return CycQ8.zero()
    value = gamma_eval(chi, k1) * gamma_eval(chi, rep(lab, chi.place)) * gamma_eval(chi, k2)
    return value.conj()


def evaluate(e: HeckeElement, x: MetaElement) -> CycQ8:
    if x.place != e.place:
        raise PlaceMismatch("element and Hecke function at different places")
    try:
        k1, lab, k2 = normal_form(x, e.level_exponent)
    except UnsupportedCoset:
        return CycQ8.zero()
    c = e.coeffs.get(lab)
    if c is None:
        return CycQ8.zero()
    chi = e.char
    value = gamma_eval(chi, k1) * gamma_eval(chi, rep(lab, e.place)) * gamma_eval(chi, k2)
    return c * value.conj()


@lru_cache(maxsize=None)
def _left_cosets_cached(label: CosetLabel, p: int, lev: int) -> tuple[MetaElement, ...]:
    return tuple(left_cosets(label, p, lev))


@lru_cache(maxsize=None)
def _coset_data(label: CosetLabel, chi: LocalCharacter) -> tuple:
    # inverses of the left coset representatives with the basis value at each
    alphas = _left_cosets_cached(label, chi.place, default_level(chi.place))
    return tuple((meta_inv(a), _basis_value(label, chi, a)) for a in alphas)


@lru_cache(maxsize=None)
def _product_support(l1: CosetLabel, l2: CosetLabel, p: int) -> tuple[CosetLabel, ...]:
    # K0 g1 K0 g2 K0 is the union of the double cosets of g1 beta_j
    r1 = rep(l1, p)
    found = set()
    for beta in _left_cosets_cached(l2, p, default_level(p)):
        lab = coset_label(meta_mul(r1, beta))
        if lab is not None:
            found.add(lab)
    return tuple(sorted(found))


@lru_cache(maxsize=None)
def _basis_product(l1: CosetLabel, l2: CosetLabel, chi: LocalCharacter) -> tuple:
    p = chi.place
    data = _coset_data(l1, chi)
    out = {}
    for lab in _product_support(l1, l2, p):
        target = rep(lab, p)
        total = CycQ8.zero()
        for ainv, v1 in data:
            if v1.is_zero():
                continue
            v2 = _basis_value(l2, chi, meta_mul(ainv, target))
            if not v2.is_zero():
                total = total + v1 * v2
        if not total.is_zero():
            # coefficient relative to the basis value conj(gamma(rep))
            out[lab] = total * gamma_eval(chi, target)
    return tuple(sorted(out.items()))


def convolve(e1: HeckeElement, e2: HeckeElement) -> HeckeElement:
    e1._check(e2)
    out: dict = {}
    for l1, c1 in e1.coeffs.items():
        for l2, c2 in e2.coeffs.items():
            for lab, c in _basis_product(l1, l2, e1.char):
                out[lab] = out.get(lab, CycQ8.zero()) + c1 * c2 * c
    return HeckeElement(e1.place, e1.level_exponent, e1.char, out)


def _gamma_bar_minus_one(chi: LocalCharacter) -> CycQ8:
    from .metaplectic import h_mat as _h

    return gamma_eval(chi, MetaElement(_h(-1), 1, chi.place)).conj()


def relation_checks(chi: LocalCharacter, bound: int = 2):
    """Yield (word, lhs, rhs) for the standard relations of the algebra.

    For odd p these are the product rules among T_n and U_n, the quadratic
    relations for U_0 and U_1 and the rescaled U_1 relation; for p = 2 they
    are the product rules and quadratic relations of the K0(4) algebra.
    """
    p = chi.place
    B = lambda lab: basis_element(lab, chi)  # noqa: E731
    one = identity_element(chi)
    rng = range(-bound, bound + 1)
    for m in rng:
        for n in rng:
            if m * n >= 0:
                yield f"T{m}*T{n}", B(T(m)) * B(T(n)), B(T(m + n))
    U0, U1 = B(U(0)), B(U(1))
    if p == 2:
        for n in rng:
            yield f"U1*T{n}", U1 * B(T(n)), B(U(n + 1))
            yield f"T{n}*U1", B(T(n)) * U1, B(U(1 - n))
            yield f"U1*U{n}", U1 * B(U(n)), B(T(n - 1))
            yield f"U{n}*U1", B(U(n)) * U1, B(T(1 - n))
        yield "U1*U1", U1 * U1, one
        r2 = CycQ8.sqrt2()
        lhs = (U0 - one.scale(2 * r2)) * (U0 + one.scale(r2))
        yield "(U0-2*sqrt2)*(U0+sqrt2)", lhs, one.scale(0)
        return
    gm = _gamma_bar_minus_one(chi)
    for n in range(0, bound + 1):
        yield f"U1*T{n}", U1 * B(T(n)), B(U(n + 1))
        yield f"T{-n}*U1", B(T(-n)) * U1, B(U(n + 1))
        yield f"U0*T{-n}", U0 * B(T(-n)), B(U(-n))
        yield f"T{n}*U0", B(T(n)) * U0, B(U(-n))
    for n in range(1, bound + 1):
        yield f"U0*U{n}", U0 * B(U(n)), B(T(n)).scale(gm)
        yield f"U{n}*U0", B(U(n)) * U0, B(T(-n)).scale(gm)
    sign = CycQ8.from_rat(1 if p % 4 == 1 else -1)
    eps = CycQ8.one() if p % 4 == 1 else CycQ8.i()
    U1p = U1.scale(eps.conj())
    if chi.kind == "trivial":
        yield "U0*U0", U0 * U0, U0.scale(p - 1) + one.scale(p)
        yield "U1*U1", U1 * U1, one.scale(p)
        yield "T1*U1", B(T(1)) * U1, U0.scale(p)
        yield "(1/p)*U1*T1*U1", (U1 * B(T(1)) * U1).scale(Fraction(1, p)), B(T(-1))
        yield "U1'*U1'", U1p * U1p, one.scale(sign * p)
    elif chi.kind == "legendre":
        yield "U0*U0", U0 * U0, one.scale(sign * p)
        yield "U1*U1", U1 * U1, U1.scale(eps * (p - 1)) + one.scale(sign * p)
        yield "U1'*U1'", U1p * U1p, U1p.scale(p - 1) + one.scale(p)
