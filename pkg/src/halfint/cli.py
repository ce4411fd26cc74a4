"""Command-line front end: `halfint <subcommand> ...`.

Exit status is 0 when every check passes, 1 when a check fails and 2 on usage
errors.  Failures are reported as "FAIL <check-id> <detail>" lines.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from .data_io import emit_qseries, load_space, read_qseries, write_space
from .errors import HalfIntError
from .local_hecke import relation_checks
from .metaplectic import LocalCharacter, cocycle_holds, random_sl2
from .spaces import is_prime


def _fail(check_id: str, detail: str) -> None:
    print(f"FAIL {check_id} {detail}")


def cmd_verify_local(args) -> int:
    if args.p == 2:
        chi = LocalCharacter(2, args.kmod4 if args.kmod4 is not None else 0)
    else:
        chi = LocalCharacter(args.p, args.gamma)
    failed = 0
    for word, lhs, rhs in relation_checks(chi):
        if lhs == rhs:
            print(f"{word} = {lhs.pretty()} ... OK")
        else:
            failed += 1
            _fail(f"verify-local/p{args.p}/{word}", f"got {lhs.pretty()} expected {rhs.pretty()}")
    return 1 if failed else 0


def cmd_cocycle_fuzz(args) -> int:
    rng = random.Random(args.seed)
    failed = 0
    for i in range(args.trials):
        g, h, k = (random_sl2(rng, args.p) for _ in range(3))
        if not cocycle_holds(g, h, k, args.p):
            failed += 1
            _fail(f"cocycle/p{args.p}/trial{i}", f"g={g!r} h={h!r} k={k!r}")
    print(f"cocycle p={args.p} trials={args.trials} seed={args.seed} failures={failed}")
    return 1 if failed else 0


def _primes(text: str | None):
    if not text:
        return None
    return [int(x) for x in text.split(",") if x.strip()]


def cmd_decompose(args) -> int:
    from .spaces import block_report, default_primes, shimura_decompose

    space = load_space(args.space)
    if space.dim == 0:
        return 0
    primes = _primes(args.primes) or default_primes(space)
    for line in block_report(shimura_decompose(space, primes)):
        print(line)
    return 0


def _emit_space(sub, out: str | None) -> None:
    if out:
        print(write_space(out, sub))
        return
    print(f"dim {sub.dim}")
    w = Fraction(2 * sub.k + 1, 2)
    for f in sub.basis:
        sys.stdout.write(emit_qseries(f, w, sub.level))
        print("---")


def cmd_minus(args) -> int:
    from .spaces import minus_space

    _emit_space(minus_space(load_space(args.space), _primes(args.primes)), args.out)
    return 0


def cmd_plus(args) -> int:
    from .spaces import plus_space

    _emit_space(plus_space(load_space(args.space)), args.out)
    return 0


def cmd_shimura_lift(args) -> int:
    from .shimura import sh_lift

    if args.space:
        space = load_space(args.space)
        series, k, level = space.basis, space.k, space.level
    else:
        if args.k is None:
            print("shimura-lift: --series needs --k", file=sys.stderr)
            return 2
        f = read_qseries(args.series)
        series, k, level = [f], args.k, f.level or 4
    for f in series:
        lift = sh_lift(f, args.t, k, level)
        sys.stdout.write(emit_qseries(lift, Fraction(2 * k), level // 2))
        if len(series) > 1:
            print("---")
    return 0


def cmd_gen_level4(args) -> int:
    from .basis_gen import gen_space_level4

    space = gen_space_level4(args.k, args.prec)
    out = args.out or f"level4_k{args.k}"
    print(write_space(out, space))
    return 0


def cmd_check_fixtures(args) -> int:
    from .reproduce import all_checks

    failed = 0
    for check_id, ok, detail in all_checks():
        if ok:
            print(f"OK {check_id} {detail}")
        else:
            failed += 1
            _fail(check_id, detail)
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="halfint", description="Half-integral weight Hecke computations.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify-local", help="check the local Hecke algebra relations")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--gamma", choices=["trivial", "legendre"], default="trivial")
    s.add_argument("--kmod4", type=int, default=None)
    s.set_defaults(func=cmd_verify_local)

    s = sub.add_parser("cocycle-fuzz", help="random test of the 2-cocycle identity")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_cocycle_fuzz)

    s = sub.add_parser("decompose", help="Shimura block decomposition of a space")
    s.add_argument("--space", required=True)
    s.add_argument("--primes", default=None)
    s.set_defaults(func=cmd_decompose)

    for name, func in (("minus-space", cmd_minus), ("plus-space", cmd_plus)):
        s = sub.add_parser(name, help=f"emit the {name.split('-')[0]} subspace")
        s.add_argument("--space", required=True)
        s.add_argument("--out", default=None)
        if name == "minus-space":
            s.add_argument("--primes", default=None)
        s.set_defaults(func=func)

    s = sub.add_parser("shimura-lift", help="lift a space or a single series")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--space")
    src.add_argument("--series")
    s.add_argument("--k", type=int, default=None)
    s.add_argument("--t", type=int, default=1)
    s.set_defaults(func=cmd_shimura_lift)

    s = sub.add_parser("gen-level4", help="generate S_{k+1/2}(Gamma0(4))")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--prec", type=int, default=200)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_gen_level4)

    s = sub.add_parser("check-fixtures", help="reproduce the reference results on the bundled fixtures")
    s.set_defaults(func=cmd_check_fixtures)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("verify-local", "cocycle-fuzz") and not is_prime(args.p):
        parser.error("--p must be a prime")
    try:
        return args.func(args)
    except (HalfIntError, ValueError, OSError) as exc:
        _fail(args.command, f"{type(exc).__name__}: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
