"""Regenerate the bundled fixtures from eta-quotient constructions.

Level 28, weight 3/2:
    f28 = q*t1(q) + 2*q^2*t2(q) with
    t1 = eta(z)^3 eta(4z)^2 eta(7z) eta(14z) / eta(2z)^4 and
    t2 = eta(z)^2 eta(4z)^3 eta(14z) eta(28z) / eta(2z)^4 (q-shifts removed).

Level 12, weight 17/2:
    thirteen holomorphic eta quotients of level 12 span the space; each printed
    truncation is located inside its T_25 generalized eigenspace, where the
    truncation determines it uniquely, and the full expansion is emitted.

Linear algebra here is done with sympy so that it stays independent of the
package.  Usage: python tools/make_fixtures.py [--prec 1000] [--out DIR]
"""

from __future__ import annotations

import argparse
from fractions import Fraction
from pathlib import Path

import sympy as sp

from halfint.data_io import emit_newform, write_qseries
from halfint.qexp import QExpansion
from halfint.shimura import sh_lift
from halfint.spaces import NewformData

LEVEL12_ETA = [
    (-9, 10, 13, 10, -3, -4),
    (-9, 11, 13, 5, 2, -5),
    (-9, 11, 13, 11, -10, 1),
    (-9, 12, 13, 0, 7, -6),
    (-9, 12, 13, 6, -5, 0),
    (-9, 13, 5, 13, 0, -5),
    (-9, 13, 13, 1, 0, -1),
    (-9, 13, 13, 7, -12, 5),
    (-9, 14, 5, 8, 5, -6),
    (-9, 14, 5, 14, -7, 0),
    (-9, 14, 13, -4, 5, -2),
    (-6, 2, 12, 11, 5, -7),
    (-4, -5, 14, 14, 6, -8),
]
LEVEL12_DIVISORS = (1, 2, 3, 4, 6, 12)

# printed truncations: (coefficients, last printed exponent)
PRINTED12 = {
    "f1": ({1: 1, 4: 88, 9: 513, 12: 3024, 13: -4368, 16: -13760, 21: 33264}, 21),
    "f2": ({2: 11, 4: 64, 7: 232, 8: -1408, 9: 4608, 10: 190, 11: -6578}, 11),
    "f3": ({3: 9, 4: -64, 6: 189, 7: -232, 10: -190, 12: 1152, 13: -3328}, 13),
    "f4": ({5: 1, 8: -11, 9: 18, 12: -9, 17: -116, 20: 344, 21: -99, 24: -189}, 24),
    "g1": ({1: 1, 3: 21, 4: -128, 6: -609, 7: 3192, 9: 5313, 10: -12810}, 10),
    "g2": ({2: 3, 3: 7, 6: -203, 8: -384, 9: -416, 11: 2706, 12: -896}, 12),
    "h1": ({5: 1, 8: 7, 12: -27, 17: -80, 20: 56, 21: 189, 24: 81, 29: 231}, 29),
    "h2": ({2: 7, 3: -27, 6: 81, 8: -896, 11: 854, 12: 3456, 14: -1876}, 14),
    "k1": ({1: 1, 4: -362, 9: -2187, 12: -11826, 13: 19032, 16: 51940}, 16),
    "k2": ({3: 1971, 4: 13184, 6: 31266, 7: -20158, 10: 271340}, 10),
    "l1": ({2: 13, 3: 129, 5: 736, 6: 1323, 8: 1664, 11: 5918, 12: 16512}, 12),
    "m1": ({3: 1, 6: -18, 7: -42, 10: -12, 12: 128, 13: 384, 15: -126, 19: -1074, 21: 896}, 21),
    "n1": ({1: 16, 3: -1539, 4: -2048, 6: -5994, 7: -50178, 9: -34992, 10: -2460}, 10),
}
PRINTED28 = ([0, 1, -1, 0, -1, 0, 0, 1, 1, -1, 0, 0, 0, 0, 1, -2, 1, 0, 3, 0, 0, -2], 21)


def pentagonal(prec: int) -> list[int]:
    """prod_{n >= 1} (1 - q^n) to q^prec by Euler's pentagonal theorem."""
    c = [0] * (prec + 1)
    k = 0
    while True:
        hit = False
        for j in ((k, -k) if k else (0,)):
            e = j * (3 * j - 1) // 2
            if e <= prec:
                c[e] += -1 if j % 2 else 1
                hit = True
        if not hit and k > 0:
            break
        k += 1
    return c


def _mul_sparse(a: list[int], s: list[int], prec: int) -> list[int]:
    nz = [(i, v) for i, v in enumerate(s) if v]
    out = [0] * (prec + 1)
    for i, v in nz:
        for j in range(prec + 1 - i):
            if a[j]:
                out[i + j] += v * a[j]
    return out


def _div_sparse(a: list[int], s: list[int], prec: int) -> list[int]:
    # s has constant term 1
    nz = [(i, v) for i, v in enumerate(s) if v and i > 0]
    out = [0] * (prec + 1)
    for n in range(prec + 1):
        t = a[n]
        for i, v in nz:
            if i > n:
                break
            t -= v * out[n - i]
        out[n] = t
    return out


def eta_quotient(exps: dict[int, int], prec: int) -> tuple[int, list[int]]:
    """(q-order, integer coefficients from q^order) of prod eta(d z)^r_d."""
    shift = sum(d * r for d, r in exps.items())
    if shift % 24:
        raise ValueError("eta quotient has fractional q-order")
    base = [0] * (prec + 1)
    base[0] = 1
    for d, r in exps.items():
        p = pentagonal(prec // d)
        s = [0] * (prec + 1)
        for i, v in enumerate(p):
            s[i * d] = v
        for _ in range(abs(r)):
            base = _mul_sparse(base, s, prec) if r > 0 else _div_sparse(base, s, prec)
    return shift // 24, base


def level28_form(prec: int) -> list[int]:
    _, t1 = eta_quotient({1: 3, 4: 2, 7: 1, 14: 1, 2: -4}, prec)
    _, t2 = eta_quotient({1: 2, 4: 3, 14: 1, 28: 1, 2: -4}, prec)
    f = [0] * (prec + 1)
    for i in range(prec):
        f[i + 1] += t1[i]
    for i in range(prec - 1):
        f[i + 2] += 2 * t2[i]
    return f


def level12_spanning(prec: int) -> list[list[int]]:
    out = []
    for r in LEVEL12_ETA:
        order, s = eta_quotient(dict(zip(LEVEL12_DIVISORS, r)), prec)
        v = [0] * (prec + 1)
        for i, c in enumerate(s[: prec + 1 - order]):
            v[i + order] = c
        out.append(v)
    return out


def _t25(v: list, k: int = 8) -> list:
    q, q2 = 5, 25
    out = []
    for n in range((len(v) - 1) // q2 + 1):
        c = v[q2 * n] + sp.jacobi_symbol(((-1) ** k * n) % q, q) * q ** (k - 1) * v[n]
        if n % q2 == 0:
            c += q ** (2 * k - 1) * v[n // q2]
        out.append(c)
    return out


def level12_forms(prec: int) -> dict[str, list[int]]:
    vecs = level12_spanning(prec)
    E = sp.Matrix(vecs).rref()[0]
    E = [list(E.row(i)) for i in range(E.rows)]
    if len(E) != 13:
        raise SystemExit("eta quotients do not span a 13-dimensional space")
    piv = [next(j for j, x in enumerate(r) if x) for r in E]
    cols = []
    for row in E:
        w = _t25(row)
        c = [w[pc] for pc in piv]
        check = [sum(ci * E[i][n] for i, ci in enumerate(c)) for n in range(len(w))]
        if check != w:
            raise SystemExit("T25 image escapes the span")
        cols.append(c)
    T = sp.Matrix(cols).T
    blocks = {}
    for lam, mult in T.eigenvals().items():
        ns = ((T - lam * sp.eye(13)) ** mult).nullspace()
        blocks[lam] = [sp.Matrix([list(v)]) * sp.Matrix(E) for v in ns]
    forms = {}
    for name, (cf, last) in PRINTED12.items():
        target = sp.Matrix([[cf.get(n, 0) for n in range(last + 1)]])
        found = None
        for lam, bs in blocks.items():
            A = sp.Matrix.vstack(*[b[:, : last + 1] for b in bs]).T
            try:
                sol, params = A.gauss_jordan_solve(target.T)
            except ValueError:
                continue
            if params.shape[0]:
                raise SystemExit(f"{name} is not determined by its printed truncation")
            if found is not None:
                raise SystemExit(f"{name} matches two eigenspaces")
            series = sum((sol[i] * bs[i] for i in range(len(bs))), sp.zeros(1, prec + 1))
            if any(not x.is_integer for x in series):
                raise SystemExit(f"{name} has non-integral coefficients")
            found = [int(x) for x in series]
        if found is None:
            raise SystemExit(f"{name} matches no eigenspace")
        forms[name] = found
    return forms


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--prec", type=int, default=1000)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "src/halfint/fixtures")
    args = ap.parse_args()
    out, P = args.out, args.prec

    d28 = out / "level28"
    (d28 / "printed").mkdir(parents=True, exist_ok=True)
    f28 = QExpansion(level28_form(P), P)
    write_qseries(d28 / "f28.qs", f28, Fraction(3, 2), 28)
    (d28 / "manifest.txt").write_text(f"S3/2(28) 3 2 28 {P}\nf28.qs\n")
    coeffs, last = PRINTED28
    write_qseries(d28 / "printed" / "f28.qs", QExpansion(coeffs, last), Fraction(3, 2), 28)

    d12 = out / "level12"
    (d12 / "printed").mkdir(parents=True, exist_ok=True)
    forms = level12_forms(P)
    for name, v in forms.items():
        write_qseries(d12 / f"{name}.qs", QExpansion(v, P), Fraction(17, 2), 12)
        cf, last = PRINTED12[name]
        write_qseries(d12 / "printed" / f"{name}.qs", QExpansion(cf, last), Fraction(17, 2), 12)
    (d12 / "manifest.txt").write_text(f"S17/2(12) 17 2 12 {P}\n" + "".join(f"{n}.qs\n" for n in PRINTED12))

    # weight-2 newform of level 14 read off from the normalized lift of f28
    lift = sh_lift(f28, 1, 1, 28)
    nf = NewformData("F14", 2, 14, {n: lift[n] for n in range(1, lift.prec + 1)})
    nf.validate()
    (out / "newforms").mkdir(parents=True, exist_ok=True)
    (out / "newforms" / "F14.nf").write_text(emit_newform(nf))
    print(f"fixtures written to {out} at precision {P}")


if __name__ == "__main__":
    main()
