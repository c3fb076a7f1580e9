"""Galerkin operator matrices over a boundary mesh.

Entry (i, j) sums the four segment-pair double integrals of the pairs
(m in i) x (n in j); the loop runs over segment pairs in lexicographic
order and scatters each pair's four basis-combination integrals, so the
result is deterministic.  Pair integrals are routed by classification:
coincident and adjacent pairs go to the closed-form/transformed routines
in `singular`, disjoint pairs to plain tensor Gauss-Legendre of the raw
kernel.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import kernels, singular
from .geometry import Mesh, NodeEnd, PairTag, adjacent_angle, basis_curl, classify_pair
from .kernels import KernelContext
from .quadrature import gl_rule
from .specfun import HankelKind

__all__ = [
    "Method",
    "Operator",
    "OperatorMatrix",
    "MethodComparison",
    "assemble",
    "compare_methods",
]


class Operator(enum.Enum):
    S = "S"
    D = "D"
    DADJ = "Dadj"
    N = "N"


class Method(enum.Enum):
    DIRECT = "direct"
    VARIATIONAL = "variational"
    NOT_APPLICABLE = "n/a"


SYMMETRIC_OPS = (Operator.S, Operator.N)


@dataclass
class OperatorMatrix:
    """Dense node-indexed Galerkin matrix with its assembly parameters."""

    op: Operator
    method: Method
    k: float
    kind: HankelKind
    nq: int
    entries: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.entries.shape[0]

    def symmetry_defect(self) -> float:
        """max |A_ij - A_ji| over the scale max |A|; 0 for a symmetric A."""
        scale = np.max(np.abs(self.entries))
        if scale == 0:
            return 0.0
        return float(np.max(np.abs(self.entries - self.entries.T)) / scale)

    def validate(self, tol: float = 1e-12):
        if not np.all(np.isfinite(self.entries)):
            raise ValueError("matrix contains non-finite entries")
        if self.op in SYMMETRIC_OPS and self.symmetry_defect() > tol:
            raise ValueError(f"{self.op.value} matrix asymmetric beyond {tol}: "
                             f"defect {self.symmetry_defect():.3e}")


def _disjoint_pair(mesh, m, n, ctx, op, combo, nq, var_curl=None):
    """Tensor Gauss-Legendre of the raw kernel over a well-separated pair."""
    rule = gl_rule(nq)
    t = 0.5 * (rule.nodes + 1.0)
    w = 0.5 * rule.weights
    am, bm = mesh.seg_a[m], mesh.seg_b[m]
    an, bn = mesh.seg_a[n], mesh.seg_b[n]
    rm = am[None, :] + t[:, None] * (bm - am)[None, :]
    rn = an[None, :] + t[:, None] * (bn - an)[None, :]
    dx = rm[:, 0][:, None] - rn[:, 0][None, :]
    dy = rm[:, 1][:, None] - rn[:, 1][None, :]
    dist = np.hypot(dx, dy)
    nm, nn_vec = mesh.normals[m], mesh.normals[n]
    pi = (1.0 - t) if combo[0] is NodeEnd.A else t
    pj = (1.0 - t) if combo[1] is NodeEnd.A else t
    if var_curl is not None:
        ci, cj = var_curl
        nn = float(nm @ nn_vec)
        kern = kernels.green_grid(ctx, dist)
        f = kern * (ctx.k**2 * nn * pi[:, None] * pj[None, :] - ci * cj)
    else:
        if op is Operator.S:
            kern = kernels.green_grid(ctx, dist)
        elif op is Operator.D:
            rnp = dx * nn_vec[0] + dy * nn_vec[1]
            kern = kernels.dlayer_grid(ctx, dist, rnp, adjoint=False)
        elif op is Operator.DADJ:
            rn_ = dx * nm[0] + dy * nm[1]
            kern = kernels.dlayer_grid(ctx, dist, rn_, adjoint=True)
        else:
            rn_ = dx * nm[0] + dy * nm[1]
            rnp = dx * nn_vec[0] + dy * nn_vec[1]
            nn = float(nm @ nn_vec)
            kern = kernels.hyper_grid(ctx, dist, rn_, rnp, nn)
        f = kern * pi[:, None] * pj[None, :]
    scale = float(mesh.lengths[m] * mesh.lengths[n])
    return scale * complex(np.einsum("i,j,ij->", w, w, f))


def _pair_block(mesh, m, n, ctx, op, method, nq, levels, coincident_cache):
    """All four basis-combination integrals for the ordered pair (m, n).

    Returns a dict {(NodeEnd_m, NodeEnd_n): complex}.
    """
    cls = classify_pair(mesh, m, n)
    l_m = float(mesh.lengths[m])
    l_n = float(mesh.lengths[n])
    ends = (NodeEnd.A, NodeEnd.B)
    out = {}

    if cls.tag is PairTag.COINCIDENT:
        if op in (Operator.D, Operator.DADJ):
            zero = singular.double_coincident()
            return {(em, en): zero for em in ends for en in ends}
        key = (op, method, l_m)
        block = coincident_cache.get(key)
        if block is None:
            if op is Operator.S:
                sc = singular.single_coincident(ctx, l_m, nq)
                block = (sc.i11, sc.i12)
            elif method is Method.VARIATIONAL:
                block = singular.hyper_variational_coincident(ctx, l_m, nq)
            else:
                hc = singular.hyper_direct_coincident(ctx, l_m, nq)
                block = (hc.u11_reg, hc.u12)
            coincident_cache[key] = block
        same, cross = block
        for em in ends:
            for en in ends:
                out[(em, en)] = same if em is en else cross
        return out

    if cls.tag is PairTag.ADJACENT:
        theta = adjacent_angle(mesh, m, n)
        for em in ends:
            for en in ends:
                i_at_v = em is cls.m_end
                j_at_v = en is cls.n_end
                if op is Operator.S:
                    val = singular.single_adjacent(ctx, l_m, l_n, theta,
                                                   i_at_v, j_at_v, nq, levels)
                elif op in (Operator.D, Operator.DADJ):
                    val = singular.double_adjacent(ctx, l_m, l_n, theta,
                                                   i_at_v, j_at_v, nq, levels,
                                                   adjoint=op is Operator.DADJ)
                elif method is Method.VARIATIONAL:
                    ci = basis_curl(mesh.segment(m), em)
                    cj = basis_curl(mesh.segment(n), en)
                    val = singular.variational_adjacent(ctx, l_m, l_n, theta,
                                                        i_at_v, j_at_v, ci, cj,
                                                        nq, levels)
                else:
                    val = singular.hyper_direct_adjacent(ctx, l_m, l_n, theta,
                                                         i_at_v, j_at_v,
                                                         nq, levels).total
                out[(em, en)] = val
        return out

    for em in ends:
        for en in ends:
            if op is Operator.N and method is Method.VARIATIONAL:
                ci = basis_curl(mesh.segment(m), em)
                cj = basis_curl(mesh.segment(n), en)
                out[(em, en)] = _disjoint_pair(mesh, m, n, ctx, op, (em, en), nq,
                                               var_curl=(ci, cj))
            else:
                out[(em, en)] = _disjoint_pair(mesh, m, n, ctx, op, (em, en), nq)
    return out


def _node_of(mesh, seg, end):
    return seg if end is NodeEnd.A else (seg + 1) % mesh.n_segments


def assemble(mesh: Mesh, op: Operator | str, ctx: KernelContext,
             nq: int = 20, levels: int = 8,
             method: Method | str | None = None) -> OperatorMatrix:
    """Assemble the Galerkin matrix of one boundary operator.

    Parameters
    ----------
    mesh : Mesh
    op : Operator or one of "S", "D", "Dadj", "N".
    ctx : wavenumber and Hankel kind.
    nq : Gauss-Legendre order for all pair quadratures.
    levels : dyadic refinement depth for vertex-singular quadratures.
    method : for op = N only: Method.DIRECT (default) or Method.VARIATIONAL.
    """
    op = Operator(op) if not isinstance(op, Operator) else op
    if method is not None and not isinstance(method, Method):
        method = Method(method)
    if op is Operator.N:
        if method is None:
            method = Method.DIRECT
        if method is Method.NOT_APPLICABLE:
            raise ValueError("operator N needs method direct or variational")
    else:
        if method not in (None, Method.NOT_APPLICABLE):
            raise ValueError(f"method is only meaningful for operator N, "
                             f"got {method} with {op.value}")
        method = Method.NOT_APPLICABLE
    if nq < 1:
        raise ValueError("nq must be >= 1")

    N = mesh.n_segments
    entries = np.zeros((N, N), dtype=complex)
    cache: dict = {}
    for m in range(N):
        for n in range(N):
            block = _pair_block(mesh, m, n, ctx, op, method, nq, levels, cache)
            for (em, en), val in block.items():
                entries[_node_of(mesh, m, em), _node_of(mesh, n, en)] += val
    return OperatorMatrix(op=op, method=method, k=ctx.k, kind=ctx.kind,
                          nq=nq, entries=entries)


# ---------------------------------------------------------------------------
@dataclass
class ComparisonRow:
    pair_class: str
    i: int
    j: int
    n_direct: complex
    n_variational: complex

    @property
    def abs_diff(self) -> float:
        return abs(self.n_direct - self.n_variational)

    @property
    def imag_diff(self) -> float:
        return abs(self.n_direct.imag - self.n_variational.imag)


@dataclass
class MethodComparison:
    """Direct-vs-variational hypersingular comparison at one wavenumber."""

    k: float
    kind: HankelKind
    nq: int
    rows: list[ComparisonRow] = field(default_factory=list)
    max_abs_diff: float = 0.0
    max_imag_diff: float = 0.0

    def format_table(self) -> str:
        lines = [f"k = {self.k:g}  (kind {self.kind.value}, nq = {self.nq})",
                 f"{'pair class':<18}{'(i,j)':<8}{'N_direct':>28}"
                 f"{'N_variational':>28}{'|diff|':>12}"]
        for r in self.rows:
            lines.append(f"{r.pair_class:<18}({r.i},{r.j})  "
                         f"{r.n_direct.real:+.6f}{r.n_direct.imag:+.6f}i".ljust(54)
                         + f"{r.n_variational.real:+.6f}{r.n_variational.imag:+.6f}i".rjust(28)
                         + f"{r.abs_diff:>12.2e}")
        lines.append(f"max entrywise |direct - variational| = {self.max_abs_diff:.3e}"
                     f"   (imaginary parts: {self.max_imag_diff:.3e})")
        return "\n".join(lines)


def compare_methods(mesh: Mesh, ctx: KernelContext, nq: int = 20,
                    levels: int = 8) -> MethodComparison:
    """Assemble N both ways and tabulate representative node pairs.

    Rows cover a coincident pair (i = j), first neighbors and second
    neighbors; the max-diff fields scan all entries.
    """
    nd = assemble(mesh, Operator.N, ctx, nq, levels, Method.DIRECT).entries
    nv = assemble(mesh, Operator.N, ctx, nq, levels, Method.VARIATIONAL).entries
    rows = []
    for label, (i, j) in (("coincident", (0, 0)),
                          ("first-neighbor", (0, 1)),
                          ("second-neighbor", (0, 2))):
        rows.append(ComparisonRow(pair_class=label, i=i, j=j,
                                  n_direct=complex(nd[i, j]),
                                  n_variational=complex(nv[i, j])))
    return MethodComparison(k=ctx.k, kind=ctx.kind, nq=nq, rows=rows,
                            max_abs_diff=float(np.max(np.abs(nd - nv))),
                            max_imag_diff=float(np.max(np.abs(nd.imag - nv.imag))))
