"""``turyn`` command line.

Exit codes: 0 success, 1 a check or precondition failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from math import comb, factorial
from pathlib import Path
from typing import Sequence

from . import acceptance
from .certificate import Certificate
from .codeforge import build_golay, verify_759_identity
from .latticeforge import build_leech, verify_196560_identity
from .orthogroup import (
    ClosureCapExceeded,
    canonicalize_S,
    closure_order,
    random_cond1_subspace,
    sl_order,
    stab_S_generators,
)
from .quadspace import ConditionError, NotPlusTypeError, build_S, direct_sum_k, hyperbolic_space, standard_pair
from .textio import (
    ParseError,
    read_space_and_subspace,
    write_code,
    write_gram2,
    write_qspace,
    write_subspace,
    write_wreath,
)
from .voashadow import analogy_table, moonshine_certificate

DEFAULT_SEED = 1
EXIT_OK, EXIT_CHECK, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(lines: Sequence[str], out: Path | None = None) -> None:
    text = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _certificate_exit(cert: Certificate) -> int:
    print(cert)
    return EXIT_OK if cert.ok else EXIT_CHECK


# ---------------------------------------------------------------------------
# Subcommands


def cmd_qspace(args) -> int:
    sp = hyperbolic_space(args.m)
    if args.k and args.k > 1:
        sp = direct_sum_k(sp, args.k)
    _emit([f"# hyperbolic space, m={args.m}" + (f", {args.k}-fold sum" if args.k and args.k > 1 else "")]
          + write_qspace(sp), args.out)
    return EXIT_OK


def cmd_random_s(args) -> int:
    sp, S, h = random_cond1_subspace(args.m, args.seed)
    lines = [f"# S(Phi_std, Psi_std; 3) moved by a random wreath element, m={args.m}, seed={args.seed}"]
    lines += write_qspace(sp) + write_subspace(S)
    _emit(lines, args.out)
    return EXIT_OK


def cmd_canon(args) -> int:
    try:
        text = Path(args.input).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from None
    sp, S = read_space_and_subspace(text)
    if sp is None:
        if S.ambient % 6:
            raise ParseError("without a qspace section the subspace ambient must be 6m")
        sp = hyperbolic_space(S.ambient // 6)
    if S.ambient != 3 * sp.dim:
        raise ParseError(f"subspace ambient {S.ambient} is not 3 x {sp.dim}")
    c = canonicalize_S(sp, S)
    verified = c.g.image(S) == build_S(sp, c.phi, c.psi, 3)
    lines = ["# block isometry g with S.g = S(Phi, Psi; 3)"] + write_wreath(c.g)
    lines += ["# Phi"] + write_subspace(c.phi) + ["# Psi"] + write_subspace(c.psi)
    lines.append(f"# equation S.g = S(Phi,Psi;3): {'verified' if verified else 'FAILED'}")
    _emit(lines, args.out)
    if args.out is not None:
        print(f"equation S.g = S(Phi,Psi;3): {'verified' if verified else 'FAILED'}")
    return EXIT_OK if verified else EXIT_CHECK


def cmd_golay(args) -> int:
    build = build_golay()
    _emit(write_code(build.code), args.out)
    rep = verify_759_identity(build)
    build.certificate.check("identity_759_terms", (3, 84, 672), rep.terms_classified)
    return _certificate_exit(build.certificate)


def cmd_leech(args) -> int:
    build = build_leech(full_enum=args.full_enum, norm6=args.norm6)
    _emit(write_gram2(build.lattice), args.out)
    rep = verify_196560_identity(build)
    build.certificate.check("identity_196560_terms", (720, 11520, 184320), rep.terms_classified)
    return _certificate_exit(build.certificate)


def cmd_moonshine(args) -> int:
    count, cert = moonshine_certificate()
    print(f"breakdown: {count.terms[0]} + {count.terms[1]} + {count.terms[2]}")
    print(f"total: {count.total}")
    return _certificate_exit(cert)


def cmd_stab_order(args) -> int:
    m, k = args.m, args.k
    sp = hyperbolic_space(m)
    phi, psi = standard_pair(sp)
    gens = stab_S_generators(sp, phi, psi, k)
    shape = 2 ** ((k - 1) * comb(m, 2)) * sl_order(m) * factorial(k)
    print(f"# {len(gens)} generators of the stabilizer of S(Phi_std, Psi_std; {k}), m={m}")
    for i, g in enumerate(gens, 1):
        print(f"# generator {i}")
        print("\n".join(write_wreath(g)))
    print(f"shape_order: {shape}")
    if m <= 3:
        try:
            order = closure_order([g.flatten(direct_sum_k(sp, k)) for g in gens])
        except ClosureCapExceeded as exc:
            print(f"closure_order: not computed ({exc})")
            return EXIT_OK
        print(f"closure_order: {order}")
        return EXIT_OK if order == shape else EXIT_CHECK
    print("closure_order: not computed for m > 3")
    return EXIT_OK


def cmd_analogy(args) -> int:
    table = analogy_table(csv_format=args.csv)
    print(table)
    return EXIT_CHECK if "FAIL" in table else EXIT_OK


def cmd_verify_all(args) -> int:
    ok = True
    for res in acceptance.run_all(full_enum=args.full_enum, only=args.only):
        print(res.line(), flush=True)
        ok = ok and res.passed
    print(f"overall: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_CHECK


# ---------------------------------------------------------------------------


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="turyn", description="Quadratic-space gluing of codes, lattices and the weight-2 count.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("qspace", help="quadratic space files")
    qsub = p.add_subparsers(dest="action", required=True)
    g = qsub.add_parser("gen", help="emit the hyperbolic space (or its k-fold sum)")
    g.add_argument("--m", type=_positive, required=True)
    g.add_argument("--k", type=_positive)
    g.add_argument("--out", type=Path)
    g.set_defaults(func=cmd_qspace)

    p = sub.add_parser("random-s", help="a seeded subspace satisfying w^3 >= 4")
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_random_s)

    p = sub.add_parser("canon", help="canonicalize a subspace of R^3")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("golay", help="build the Golay code and its certificate")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_golay)

    p = sub.add_parser("leech", help="build the Leech lattice and its certificate")
    p.add_argument("--out", type=Path)
    p.add_argument("--full-enum", action="store_true", help="also count norm-4 vectors by direct rank-24 enumeration (slow)")
    p.add_argument("--norm6", action="store_true", help="also count norm-6 vectors by cosets")
    p.set_defaults(func=cmd_leech)

    p = sub.add_parser("moonshine-dim", help="the weight-2 dimension count")
    p.set_defaults(func=cmd_moonshine)

    p = sub.add_parser("stab-order", help="stabilizer generators and closure order")
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--k", type=int, default=3)
    p.set_defaults(func=cmd_stab_order)

    p = sub.add_parser("analogy", help="the three-way count table")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_analogy)

    p = sub.add_parser("verify-all", help="run every acceptance check")
    p.add_argument("--full-enum", action="store_true")
    p.add_argument("--only", type=int, nargs="+", metavar="N", help="run only these criteria")
    p.set_defaults(func=cmd_verify_all)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "command", None) == "stab-order" and args.k < 3:
        print("error: --k must be at least 3", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (ParseError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConditionError, NotPlusTypeError, ClosureCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
