"""Command-line interface: construct, verify, search and convert artifacts.

Exit codes: 0 success, 1 verification failure, 2 bad parameters or input.
Artifacts go to --out, or to stdout when --out is omitted; human-readable
reports go to stderr for construct/convert/search and stdout for verify.
"""

from __future__ import annotations

import argparse
import sys

from . import io
from .classes import classes_to_cartan_bases, partition_search, standard_partition, verify_partition
from .errorbases import check_nice, composite_basis, pauli_basis, verify_ueb
from .errors import InputError, MubkitError, NonPrime, Report, SizeCapExceeded
from .fields import is_prime, mols_from_field, net_parallel_classes, prime_power
from .lie import (
    CartanSubalgebra,
    OrthogonalDecomposition,
    cartans_to_mubs,
    is_cartan,
    is_dagger_closed,
    mubs_to_cartans,
    verify_od,
)
from .linalg import Subspace, fourier_matrix
from .monomial import is_monomial_dense
from .mub import is_monomial_collection, latin_mubs, mubs_from_classes, same_basis, verify_mubs

SEARCH_CAP = 12


class VerificationFailed(MubkitError):
    def __init__(self, report: Report):
        super().__init__(report.summary())
        self.report = report


def _require(args, *names):
    missing = [f"--{k.replace('_', '-')}" for k in names if getattr(args, k) is None]
    if missing:
        raise InputError(f"missing required option(s): {', '.join(missing)}")


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")


def _emit(args, obj, report: Report | None) -> None:
    """Write the artifact unless its verification failed (and --no-verify is unset)."""
    if report is not None:
        print(report.summary(), file=sys.stderr)
        if not report.ok and not args.no_verify:
            raise VerificationFailed(report)
    kind, payload = io.to_payload(obj)
    if args.out is None:
        sys.stdout.write(io.dumps(kind, payload))
    else:
        io.save(args.out, payload, kind)


def _latin_hadamard(spec: str, s: int):
    if spec == "fourier":
        return fourier_matrix(s)
    _, H = io.load(spec)
    return H


def cmd_construct(args) -> int:
    verify = not args.no_verify
    kind = args.kind
    if kind == "pauli-basis":
        _require(args, "p")
        _check_prime(args.p)
        E = pauli_basis(args.p, args.e)
        rep = None
        if verify:
            rep = verify_ueb(E, args.tol)
            _, nice = check_nice(E, args.tol)
            rep.merge(nice, "nice: ")
        _emit(args, E, rep)
    elif kind == "composite-basis":
        _require(args, "n")
        E = composite_basis(args.n)
        rep = None
        if verify:
            rep = verify_ueb(E, args.tol)
            _, nice = check_nice(E, args.tol)
            rep.merge(nice, "nice: ")
        _emit(args, E, rep)
    elif kind == "standard-mubs":
        _require(args, "p")
        _check_prime(args.p)
        M = mubs_from_classes(standard_partition(args.p, args.e), seed=args.seed)
        _emit(args, M, verify_mubs(M, args.tol) if verify else None)
    elif kind == "latin-mubs":
        _require(args, "s")
        prime_power(args.s)
        classes = net_parallel_classes(mols_from_field(args.s), args.s)
        M = latin_mubs(classes, _latin_hadamard(args.hadamard, args.s), args.tol)
        _emit(args, M, verify_mubs(M, args.tol) if verify else None)
    elif kind == "standard-od":
        _require(args, "p")
        _check_prime(args.p)
        P = standard_partition(args.p, args.e)
        D = OrthogonalDecomposition(P.n, [CartanSubalgebra(P.n, b) for b in classes_to_cartan_bases(P)])
        _emit(args, D, verify_od(D) if verify else None)
    return 0


def _verify_monomial(obj, tol: float) -> Report:
    rep = Report("monomiality")
    if hasattr(obj, "bases"):
        res = is_monomial_collection(obj, tol)
        for (i, j), G in res.groups.items():
            rep.metrics[f"pair ({i}, {j}) group"] = "none" if G is None else str(G)
            if G is None:
                rep.fail(f"standardized Hadamard of bases {i}, {j} is not a character table")
    else:
        if is_monomial_dense(obj, tol) is None:
            rep.fail("matrix is not monomial with root-of-unity entries")
    return rep


def cmd_verify(args) -> int:
    kind = args.kind
    expect = {
        "ueb": "error-basis",
        "nice": "error-basis",
        "classes": "partition",
        "mubs": "mubs",
        "cartan": "cartan",
        "od": "od",
        "monomial": None,
    }[kind]
    _, obj = io.load(args.file, expect)
    tol = args.tol
    if kind == "ueb":
        rep = verify_ueb(obj, tol)
    elif kind == "nice":
        _, rep = check_nice(obj, tol)
    elif kind == "classes":
        rep = verify_partition(obj, None, tol)
    elif kind == "mubs":
        rep = verify_mubs(obj, tol)
    elif kind == "cartan":
        rep = is_cartan(obj, tol)
        closed = is_dagger_closed(obj, tol)
        rep.metrics["dagger_closed"] = closed
    elif kind == "od":
        rep = verify_od(obj)
    else:
        rep = _verify_monomial(obj, max(tol, 1e-8))
    print(rep.summary())
    return 0 if rep.ok else 1


def cmd_search(args) -> int:
    _require(args, "n")
    if args.n > SEARCH_CAP:
        raise SizeCapExceeded(f"n = {args.n} exceeds the search cap {SEARCH_CAP}")
    if args.n < 2:
        raise InputError("n must be at least 2")
    res = partition_search(composite_basis(args.n), time_cap=args.time_cap)
    print(f"mu = {res.mu}", file=sys.stderr)
    print(f"exhausted = {str(res.exhausted).lower()}", file=sys.stderr)
    print(f"nodes = {res.nodes}", file=sys.stderr)
    print(f"candidates = {res.candidates}", file=sys.stderr)
    if res.witness is not None:
        kind, payload = io.to_payload(res.witness)
        payload["exhausted"] = res.exhausted
        if args.out is None:
            sys.stdout.write(io.dumps(kind, payload))
        else:
            io.save(args.out, payload, kind)
    return 0


def _same_span(A: CartanSubalgebra, B: CartanSubalgebra) -> bool:
    SA, SB = Subspace.span(A.basis), Subspace.span(B.basis)
    return SA.rank == SB.rank and all(SA.contains(h, 1e-8) for h in B.dense_basis())


def cmd_convert(args) -> int:
    kind = args.kind
    if kind == "mubs-to-od":
        _, M = io.load(args.file, "mubs")
        rep = verify_mubs(M, args.tol)
        if not rep.ok:
            raise VerificationFailed(rep)
        D = OrthogonalDecomposition(M.n, mubs_to_cartans(M, args.tol))
        rep = verify_od(D)
        if args.roundtrip_check:
            back = cartans_to_mubs(D.cartans, seed=args.seed, tol=args.tol)
            for k, (B0, B1) in enumerate(zip(M.bases, back.bases)):
                if not same_basis(B0, B1):
                    rep.fail(f"roundtrip: basis {k} is not reproduced up to phase and permutation")
        _emit(args, D, rep)
    elif kind == "od-to-mubs":
        _, D = io.load(args.file, "od")
        M = cartans_to_mubs(D.cartans, seed=args.seed, tol=args.tol)
        rep = verify_mubs(M, args.tol)
        if args.roundtrip_check:
            for k, (C0, C1) in enumerate(zip(D.cartans, mubs_to_cartans(M, args.tol))):
                if not _same_span(C0, C1):
                    rep.fail(f"roundtrip: component {k} is not reproduced")
        _emit(args, M, rep)
    elif kind == "classes-to-mubs":
        _, P = io.load(args.file, "partition")
        M = mubs_from_classes(P.verify(None, args.tol), seed=args.seed)
        _emit(args, M, verify_mubs(M, args.tol))
    return 0


def _positive(kind):
    def parse(text):
        v = kind(text)
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return v

    return parse


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_positive(float), default=1e-9)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None)
    common.add_argument("--no-verify", action="store_true")

    parser = argparse.ArgumentParser(prog="mubkit", description="Mutually unbiased bases and orthogonal decompositions.")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", parents=[common])
    c.add_argument("kind", choices=["pauli-basis", "standard-mubs", "latin-mubs", "composite-basis", "standard-od"])
    c.add_argument("--p", type=_positive(int))
    c.add_argument("--e", type=_positive(int), default=1)
    c.add_argument("--s", type=_positive(int))
    c.add_argument("--n", type=_positive(int))
    c.add_argument("--hadamard", default="fourier", help="'fourier' or a path to a matrix artifact")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", parents=[common])
    v.add_argument("kind", choices=["ueb", "nice", "classes", "mubs", "cartan", "od", "monomial"])
    v.add_argument("file")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", parents=[common])
    s.add_argument("what", choices=["partition"])
    s.add_argument("--n", type=_positive(int))
    s.add_argument("--time-cap", type=_positive(float), default=None)
    s.set_defaults(func=cmd_search)

    v = sub.add_parser("convert", parents=[common])
    v.add_argument("kind", choices=["mubs-to-od", "od-to-mubs", "classes-to-mubs"])
    v.add_argument("file")
    v.add_argument("--roundtrip-check", action="store_true")
    v.set_defaults(func=cmd_convert)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except VerificationFailed as exc:
        print("verification failed; nothing written", file=sys.stderr)
        return exc.exit_code
    except MubkitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
