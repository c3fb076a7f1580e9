"""Command-line front end.

Subcommands
-----------
assemble : build one operator matrix and write it to CSV/JSON
compare  : direct-vs-variational hypersingular table over a list of k
specfun  : tabulate the analytic integral helpers on a sigma grid
selftest : run the built-in identity checks (fast) or oracle suite (full)

Every numeric path is library code; this module only parses arguments,
formats output and maps failures to exit codes.
"""
from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import __version__
from .assembly import Method, Operator, assemble, compare_methods
from .geometry import load_mesh_file
from .kernels import KernelContext
from .matrixio import write_matrix
from .specfun import HankelKind, gamma0, gamma2, int_h0, int_h0_x

SPECFUN_TABLE = {
    "I0": lambda kind, s, nq: int_h0(kind, s),
    "I1": lambda kind, s, nq: int_h0_x(kind, s),
    "Gamma0": gamma0,
    "Gamma2": gamma2,
}


def _add_common(p):
    p.add_argument("--kind", type=int, choices=(1, 2), default=1,
                   help="Hankel function kind (default 1)")
    p.add_argument("--nq", type=int, default=20,
                   help="Gauss-Legendre order (default 20)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="helmbem",
                                 description="2D Helmholtz boundary operator "
                                             "matrix assembly")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("assemble", help="assemble one operator matrix")
    a.add_argument("--mesh", required=True)
    a.add_argument("--operator", required=True, choices=("S", "D", "Dadj", "N"))
    a.add_argument("--method", choices=("direct", "variational"), default=None)
    a.add_argument("--k", type=float, required=True)
    _add_common(a)
    a.add_argument("--levels", type=int, default=8,
                   help="vertex refinement depth (default 8)")
    a.add_argument("--deterministic", action="store_true",
                   help="process pairs in a fixed order for byte-stable output "
                        "(assembly is already deterministic; kept as an "
                        "explicit contract)")
    a.add_argument("--out", required=True)
    a.add_argument("--format", choices=("csv", "json"), default="csv")

    c = sub.add_parser("compare", help="direct vs variational hypersingular")
    c.add_argument("--mesh", required=True)
    c.add_argument("--k", required=True,
                   help="comma-separated wavenumbers, e.g. 0.1,1,10")
    _add_common(c)
    c.add_argument("--levels", type=int, default=8)
    c.add_argument("--out", default=None, help="optional CSV output path")

    f = sub.add_parser("specfun", help="tabulate I0/I1/Gamma0/Gamma2")
    f.add_argument("--fn", required=True, choices=sorted(SPECFUN_TABLE))
    f.add_argument("--kind", type=int, choices=(1, 2), default=1)
    f.add_argument("--nq", type=int, default=20)
    f.add_argument("--sigma-max", type=float, default=20.0)
    f.add_argument("--samples", type=int, default=201)
    f.add_argument("--out", required=True)

    s = sub.add_parser("selftest", help="run built-in checks")
    s.add_argument("--full", action="store_true",
                   help="include the slow oracle comparisons")
    return ap


def cmd_assemble(args) -> int:
    if args.operator != "N" and args.method is not None:
        print("error: --method is only valid with --operator N", file=sys.stderr)
        return 2
    mesh = load_mesh_file(args.mesh)
    ctx = KernelContext(k=args.k, kind=HankelKind(args.kind))
    t0 = time.perf_counter()
    mat = assemble(mesh, Operator(args.operator), ctx, nq=args.nq,
                   levels=args.levels,
                   method=Method(args.method) if args.method else None)
    elapsed = time.perf_counter() - t0
    mat.validate()
    write_matrix(mat, args.out, fmt=args.format)
    print(f"{args.operator} matrix {mat.n_nodes}x{mat.n_nodes}  "
          f"max|entry| = {np.max(np.abs(mat.entries)):.6e}  "
          f"assembled in {elapsed:.3f} s -> {args.out}")
    return 0


def cmd_compare(args) -> int:
    try:
        ks = [float(tok) for tok in args.k.split(",") if tok.strip()]
    except ValueError:
        print(f"error: bad wavenumber list {args.k!r}", file=sys.stderr)
        return 2
    if not ks:
        print("error: empty wavenumber list", file=sys.stderr)
        return 2
    mesh = load_mesh_file(args.mesh)
    rows_csv = ["k,pair_class,i,j,ndir_re,ndir_im,nvar_re,nvar_im,abs_diff"]
    for k in ks:
        ctx = KernelContext(k=k, kind=HankelKind(args.kind))
        cmp_ = compare_methods(mesh, ctx, nq=args.nq, levels=args.levels)
        print(cmp_.format_table())
        print()
        for r in cmp_.rows:
            rows_csv.append(f"{k:g},{r.pair_class},{r.i},{r.j},"
                            f"{r.n_direct.real:.12e},{r.n_direct.imag:.12e},"
                            f"{r.n_variational.real:.12e},"
                            f"{r.n_variational.imag:.12e},{r.abs_diff:.3e}")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(rows_csv) + "\n")
        print(f"wrote {args.out}")
    return 0


def cmd_specfun(args) -> int:
    if args.samples < 2:
        print("error: need at least 2 samples", file=sys.stderr)
        return 2
    fn = SPECFUN_TABLE[args.fn]
    kind = HankelKind(args.kind)
    sigmas = np.linspace(0.0, args.sigma_max, args.samples)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("sigma,re,im\n")
        for s in sigmas:
            v = fn(kind, float(s), args.nq)
            fh.write(f"{s:.12g},{v.real:.17g},{v.imag:.17g}\n")
    print(f"wrote {args.samples} samples of {args.fn} (kind {args.kind}) "
          f"to {args.out}")
    return 0


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    return run_selftest(full=args.full)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "assemble":
            return cmd_assemble(args)
        if args.command == "compare":
            return cmd_compare(args)
        if args.command == "specfun":
            return cmd_specfun(args)
        if args.command == "selftest":
            return cmd_selftest(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
