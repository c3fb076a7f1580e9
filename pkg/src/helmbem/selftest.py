"""Built-in check suite behind `helmbem selftest`.

Fast tier: algebraic identities, symmetry invariants and quadrature sanity,
a few seconds total.  Full tier adds brute-force oracle comparisons for the
singular integrals and runs for a couple of minutes.
"""
from __future__ import annotations

import numpy as np

from . import oracle as orc
from . import singular
from .assembly import Method, Operator, assemble
from .geometry import make_mesh, regular_polygon
from .kernels import KernelContext
from .matrixio import matrix_from_text, matrix_to_text
from .quadrature import gl_rule, integrate_1d, integrate_1d_refined
from .specfun import HankelKind, gamma0, gamma2, hankel, int_h0, int_h0_x

SQUARE = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]


class _Report:
    def __init__(self):
        self.failures = 0

    def check(self, name: str, measured: float, tol: float):
        ok = measured <= tol
        if not ok:
            self.failures += 1
        print(f"[{'PASS' if ok else 'FAIL'}] {name:<58} "
              f"err={measured:#.3e}  tol={tol:g}")


def _fast_checks(rep: _Report):
    z = np.geomspace(0.01, 100.0, 120)
    for kind in HankelKind:
        h0 = hankel(kind, 0, z)
        h1 = hankel(kind, 1, z)
        h2 = hankel(kind, 2, z)
        res = np.max(np.abs(z * h0 + z * h2 - 2.0 * h1) / np.abs(h1))
        rep.check(f"hankel recurrence, kind {kind.value}", float(res), 1e-10)

    from .specfun import BesselFamily, bessel

    res = max(abs(bessel(BesselFamily.STRUVE_H, -1, float(x))
                  + bessel(BesselFamily.STRUVE_H, 1, float(x)) - 2.0 / np.pi)
              for x in z)
    rep.check("struve recurrence (order 0)", res, 1e-12)

    for fn, name in ((int_h0, "int_h0"), (int_h0_x, "int_h0_x")):
        vals = [abs(fn(HankelKind.FIRST, s)) for s in (0.0, 1e-12, 1e-9)]
        rep.check(f"{name} small-argument limit", max(vals), 1e-10)

    res = max(abs(int_h0(HankelKind.SECOND, s) - np.conj(int_h0(HankelKind.FIRST, s)))
              for s in (0.3, 1.0, 2.26, 10.0))
    rep.check("kind conjugation of int_h0", res, 1e-14)

    # integration-by-parts identities tie the quadratured gammas to closed forms
    res = 0.0
    for s in (0.1, 1.0, 2.26, 10.0, 20.0):
        g0 = gamma0(HankelKind.FIRST, s)
        exact = s * int_h0(HankelKind.FIRST, s) - int_h0_x(HankelKind.FIRST, s)
        res = max(res, abs(g0 - exact))
    rep.check("gamma0 vs integration-by-parts identity", res, 1e-10)

    rule = gl_rule(20)
    worst = 0.0
    for p in range(0, 40, 7):
        got = integrate_1d(rule, -1.0, 1.0, lambda x, p=p: x**p)
        want = 0.0 if p % 2 else 2.0 / (p + 1)
        worst = max(worst, abs(got - want))
    rep.check("gauss rule degree exactness (n=20)", worst, 1e-13)

    # per-level error ratio is 1/2, so 22 levels reach the 1e-9 scale
    got = integrate_1d_refined(rule, 0.0, 1.0, np.log, 22)
    rep.check("refined rule on log endpoint", abs(got + 1.0), 1e-9)

    ctx = KernelContext(k=1.0)
    sc = singular.single_coincident(ctx, 1.0)
    ident = abs(sc.i11 + sc.i12 - 0.25j * gamma0(HankelKind.FIRST, 1.0))
    rep.check("single coincident: i11 + i12 identity", ident, 1e-13)

    u11t, u12t = singular.hyper_variational_coincident(ctx, 1.0)
    ident = abs(u11t + u12t - (sc.i11 + sc.i12))
    rep.check("variational coincident sum identity", ident, 1e-13)

    a = singular.hyper_adjacent_sing_reg(HankelKind.FIRST, 1.0, 2.26, 2.0)
    b = singular.hyper_adjacent_sing_reg(HankelKind.FIRST, 2.26, 1.0, 2.0)
    rep.check("adjacent pole closed form swap symmetry", abs(a - b), 1e-13)
    lo = singular.hyper_adjacent_sing_reg(HankelKind.FIRST, 1.0, 2.0, np.pi / 2 - 1e-9)
    hi = singular.hyper_adjacent_sing_reg(HankelKind.FIRST, 1.0, 2.0, np.pi / 2 + 1e-9)
    rep.check("adjacent pole closed form continuity at pi/2", abs(lo - hi), 1e-10)

    rep.check("double layer coincident block",
              abs(singular.double_coincident()), 0.0)

    mesh = make_mesh(SQUARE)
    S = assemble(mesh, Operator.S, ctx)
    rep.check("S symmetry (unit square)", S.symmetry_defect(), 1e-12)
    D = assemble(mesh, Operator.D, ctx)
    Dadj = assemble(mesh, Operator.DADJ, ctx)
    scale = np.max(np.abs(D.entries))
    rep.check("Dadj = D^T (unit square)",
              float(np.max(np.abs(Dadj.entries - D.entries.T)) / scale), 1e-12)
    nd = assemble(mesh, Operator.N, ctx, method=Method.DIRECT)
    nv = assemble(mesh, Operator.N, ctx, method=Method.VARIATIONAL)
    rep.check("N symmetry (unit square)", nd.symmetry_defect(), 1e-12)
    rep.check("N direct vs variational (unit square)",
              float(np.max(np.abs(nd.entries - nv.entries))), 2e-4)

    rt = matrix_from_text(matrix_to_text(S))
    rep.check("matrix CSV round-trip",
              float(np.max(np.abs(rt.entries - S.entries))), 0.0)


def _full_checks(rep: _Report):
    ctx = KernelContext(k=1.0)
    for l in (1.0, 2.26):
        sc = singular.single_coincident(ctx, l)
        r11 = orc.oracle_single_coincident(ctx, l, True)
        r12 = orc.oracle_single_coincident(ctx, l, False)
        rep.check(f"single coincident vs oracle, l={l} (equal nodes)",
                  abs(sc.i11 - r11.value), 1e-8)
        rep.check(f"single coincident vs oracle, l={l} (cross nodes)",
                  abs(sc.i12 - r12.value), 1e-8)

    hc = singular.hyper_direct_coincident(ctx, 1.0)
    r = orc.oracle_hyper_coincident(ctx, 1.0, True)
    rep.check("hyper direct coincident vs oracle (equal nodes)",
              abs(hc.u11_reg - r.value), 1e-4)
    r = orc.oracle_hyper_coincident(ctx, 1.0, False)
    rep.check("hyper direct coincident vs oracle (cross nodes)",
              abs(hc.u12 - r.value), 1e-4)

    u11t, _ = singular.hyper_variational_coincident(ctx, 1.0)
    r = orc.oracle_variational_coincident(ctx, 1.0, True)
    rep.check("variational coincident vs oracle", abs(u11t - r.value), 1e-7)

    for (lm, ln, th) in ((1.0, 1.0, np.pi / 2), (1.0, 2.26, np.pi / 3),
                         (2.26, 2.26, 2 * np.pi / 3)):
        cf = singular.hyper_adjacent_sing_reg(HankelKind.FIRST, lm, ln, th)
        r = orc.oracle_hyper_adjacent_sing(HankelKind.FIRST, lm, ln, th)
        rep.check(f"adjacent pole closed form vs oracle ({lm},{ln},{th:.2f})",
                  abs(cf - r.value), 1e-6)
        d = singular.double_adjacent_singular(ctx, lm, ln, th)
        r = orc.oracle_adjacent(ctx, "D", lm, ln, th, True, True)
        rep.check(f"double layer vertex transform vs oracle ({lm},{ln},{th:.2f})",
                  abs(d - r.value), 1e-7)

    s = singular.single_adjacent(ctx, 1.0, 1.0, np.pi / 2, True, True)
    r = orc.oracle_adjacent(ctx, "S", 1.0, 1.0, np.pi / 2, True, True)
    rep.check("single layer adjacent (both one) vs oracle", abs(s - r.value), 1e-9)

    h = singular.hyper_direct_adjacent(ctx, 1.0, 1.0, np.pi / 2, True, True)
    r = orc.oracle_adjacent(ctx, "N", 1.0, 1.0, np.pi / 2, True, True)
    rep.check("hyper adjacent (both one) vs oracle", abs(h.total - r.value), 1e-4)


def run_selftest(full: bool = False) -> int:
    rep = _Report()
    _fast_checks(rep)
    if full:
        _full_checks(rep)
    total = "full" if full else "fast"
    if rep.failures:
        print(f"selftest ({total}): {rep.failures} check(s) FAILED")
        return 1
    print(f"selftest ({total}): all checks passed")
    return 0
