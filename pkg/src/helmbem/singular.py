"""Semi-analytical singular and near-singular segment-pair integrals.

All adjacent-pair routines work in the local frame of the shared vertex:
with s, s' the arc distances from the vertex along the two segments and
theta the corner angle between the away-from-vertex directions,

    R^2    = s^2 + s'^2 - 2 s s' cos(theta)
    R . n  = + s' sin(theta)      (n  = outward normal of the first segment)
    R . n' = - s  sin(theta)      (n' = outward normal of the second segment)
    n . n' = - cos(theta)

which holds for both orderings of a counterclockwise polygon corner.  Basis
restrictions are parameterized by whether they equal one at the vertex:
p(t) = 1 - t if so, else t, with t in [0, 1] the fractional vertex distance.

The hypersingular coincident/adjacent results are returned with their
log-divergent bookkeeping term already removed; summing them over the four
segment pairs of a mesh node reproduces the finite diagonal entry exactly,
so no regularization parameter appears anywhere in this API.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import KernelContext
from .quadrature import gl_rule, refined_edges
from .specfun import (EULER_GAMMA, BesselFamily, HankelKind, bessel, gamma0,
                      gamma2, hankel)

__all__ = [
    "COLLINEAR_SIN_EPS",
    "CoincidentSingleLayer",
    "HypersingularAdjacent",
    "HypersingularCoincident",
    "double_adjacent",
    "double_adjacent_singular",
    "double_coincident",
    "hyper_adjacent_sing_reg",
    "hyper_direct_adjacent",
    "hyper_direct_coincident",
    "hyper_variational_coincident",
    "single_adjacent",
    "single_coincident",
    "variational_adjacent",
]

# |sin theta| below this marks a collinear corner.
COLLINEAR_SIN_EPS = 1e-10


@dataclass(frozen=True)
class CoincidentSingleLayer:
    """Single-layer blocks on one segment: i22 = i11 and i21 = i12."""

    i11: complex
    i12: complex

    @property
    def i21(self) -> complex:
        return self.i12

    @property
    def i22(self) -> complex:
        return self.i11


@dataclass(frozen=True)
class HypersingularCoincident:
    """Coincident hypersingular blocks, diagonal one regularized.

    u11_reg is the equal-node block with its -+(1/2pi) log eps divergence
    removed; u12 is the cross-node block, finite as it stands.
    """

    u11_reg: complex
    u12: complex

    @property
    def u21(self) -> complex:
        return self.u12

    @property
    def u22_reg(self) -> complex:
        return self.u11_reg


@dataclass(frozen=True)
class HypersingularAdjacent:
    """Adjacent hypersingular split: smooth part plus regularized pole part.

    sing_reg carries the closed-form vertex contribution with its
    -+(1/2pi) log eps divergence removed; it is purely real up to the kind
    sign and is zero for basis pairs vanishing at the vertex.
    """

    reg: complex
    sing_reg: complex

    @property
    def total(self) -> complex:
        return self.reg + self.sing_reg


def _check_kl(ctx: KernelContext, length: float):
    if not (np.isfinite(length) and length > 0 and ctx.k * length > 0):
        raise ValueError(f"need k*l > 0, got k={ctx.k}, l={length}")


def single_coincident(ctx: KernelContext, length: float, nq: int = 20) -> CoincidentSingleLayer:
    """Closed-form single-layer double integrals over one segment.

    i11 combines Hankel/Struve products at kl with the iterated integrals
    gamma0/gamma2; i12 follows from i12 = -i11 + (i/4k^2) gamma0(kl).
    """
    _check_kl(ctx, length)
    k = ctx.k
    kind = ctx.kind
    kl = k * length
    sgn = kind.sign
    h0 = hankel(kind, 0, kl)
    h1 = hankel(kind, 1, kl)
    h2 = hankel(kind, 2, kl)
    st0 = bessel(BesselFamily.STRUVE_H, 0, kl)
    st1 = bessel(BesselFamily.STRUVE_H, 1, kl)
    g0 = gamma0(kind, kl, nq)
    g2 = gamma2(kind, kl, nq)
    i11 = ((1j * np.pi / (8 * k * k)) * (h1 * st0 - h0 * st1)
           - (0.5j / (k * k)) * h2
           + sgn * 2.0 / (np.pi * k**4 * length**2)
           + (0.25j / (k * k)) * g0
           + (0.5j / (k**4 * length**2)) * g2)
    i12 = -i11 + (0.25j / (k * k)) * g0
    return CoincidentSingleLayer(i11=complex(i11), i12=complex(i12))


def double_coincident() -> complex:
    """Coincident double-layer blocks vanish: R is orthogonal to the normal."""
    return 0j


def _local_grid(l_m, l_n, theta, tm, tn):
    """Distance and projections on a (tm, tn) tensor grid in the local frame."""
    s = np.sin(theta)
    c = np.cos(theta)
    sm = l_m * tm[:, None]
    sn = l_n * tn[None, :]
    r2 = sm * sm + sn * sn - 2.0 * c * sm * sn
    dist = np.sqrt(r2)
    rn = sn * s
    rnp = -sm * s
    return dist, rn, rnp, -c


def _basis(t, at_vertex: bool):
    return 1.0 - t if at_vertex else t


def _adjacent_kernel(ctx, op, dist, rn, rnp, nn, regularized=False):
    from . import kernels

    if op == "S":
        return kernels.green_grid(ctx, dist)
    if op == "D":
        return kernels.dlayer_grid(ctx, dist, rnp, adjoint=False)
    if op == "Dadj":
        return kernels.dlayer_grid(ctx, dist, rn, adjoint=True)
    if op == "N":
        return kernels.hyper_grid(ctx, dist, rn, rnp, nn, regularized=regularized)
    raise ValueError(op)


def _composite_nodes(nq, levels):
    """Composite Gauss nodes/weights on [0, 1], refined toward 0 if levels > 0."""
    rule = gl_rule(nq)
    x, w = rule.nodes, rule.weights
    if levels <= 0:
        return 0.5 * (x + 1.0), 0.5 * w
    edges = refined_edges(0.0, 1.0, levels)
    ts = []
    ws = []
    for a, b in zip(edges[:-1], edges[1:]):
        ts.append(0.5 * (b - a) * (x + 1.0) + a)
        ws.append(0.5 * (b - a) * w)
    return np.concatenate(ts), np.concatenate(ws)


def _tensor_adjacent(ctx, op, l_m, l_n, theta, i_at_vertex, j_at_vertex,
                     nq, levels=0, regularized=False, curl_weight=None):
    """Tensor quadrature over the unit (t, t') square in the local frame.

    levels > 0 refines dyadically toward the vertex corner (t = t' = 0).
    curl_weight = (ci, cj) switches to the single-layer kernel with the
    combined weight k^2 (n.n') p p' - ci cj.
    """
    tm, wm = _composite_nodes(nq, levels)
    tn, wn = tm, wm
    pim = _basis(tm, i_at_vertex)
    pjn = _basis(tn, j_at_vertex)
    dist, rn, rnp, nn = _local_grid(l_m, l_n, theta, tm, tn)
    if curl_weight is not None:
        ci, cj = curl_weight
        kern = _adjacent_kernel(ctx, "S", dist, rn, rnp, nn)
        f = kern * (ctx.k**2 * nn * pim[:, None] * pjn[None, :] - ci * cj)
    else:
        kern = _adjacent_kernel(ctx, op, dist, rn, rnp, nn,
                                regularized=regularized)
        f = kern * pim[:, None] * pjn[None, :]
    return complex(l_m * l_n * np.einsum("i,j,ij->", wm, wn, f))


def _polar_adjacent(ctx, op, l_m, l_n, theta, i_at_vertex, j_at_vertex,
                    nq, levels=8):
    """Vertex-singularity cancellation by the polar map t = rho cos(phi),
    t' = rho sin(phi).

    The unit square becomes two phi panels with rho rescaled onto [0, 1];
    the Jacobian rho makes the integrand bounded at the vertex.  A dyadic
    refinement of rho toward 0 removes the residual rho^p log(rho) endpoint
    terms that would otherwise cap plain Gauss accuracy near 1e-9.
    """
    rho, wrho = _composite_nodes(nq, levels)
    rule = gl_rule(nq)
    x, w = rule.nodes, rule.weights
    total = 0j
    for (pa, pb), scaling in (((0.0, np.pi / 4), "sec"), ((np.pi / 4, np.pi / 2), "csc")):
        phi = 0.5 * (pb - pa) * (x + 1.0) + pa
        wph = 0.5 * (pb - pa) * w
        scale = 1.0 / np.cos(phi) if scaling == "sec" else 1.0 / np.sin(phi)
        RH = rho[:, None] * scale[None, :]
        tm = RH * np.cos(phi)[None, :]
        tn = RH * np.sin(phi)[None, :]
        dist, rn, rnp, nn = _local_grid_tt(l_m, l_n, theta, tm, tn)
        kern = _adjacent_kernel(ctx, op, dist, rn, rnp, nn)
        f = kern * _basis(tm, i_at_vertex) * _basis(tn, j_at_vertex)
        jac = RH * scale[None, :]
        total += l_m * l_n * np.einsum("i,j,ij->", wrho, wph, f * jac)
    return complex(total)


def _local_grid_tt(l_m, l_n, theta, tm, tn):
    # same as _local_grid but for full 2D arrays of (tm, tn)
    s = np.sin(theta)
    c = np.cos(theta)
    sm = l_m * tm
    sn = l_n * tn
    r2 = sm * sm + sn * sn - 2.0 * c * sm * sn
    dist = np.sqrt(r2)
    return dist, sn * s, -sm * s, -c


def single_adjacent(ctx: KernelContext, l_m: float, l_n: float, theta: float,
                    i_at_vertex: bool, j_at_vertex: bool,
                    nq: int = 20, levels: int = 8) -> complex:
    """Single-layer integral over an adjacent pair.

    Basis products vanishing at the shared vertex cancel the kernel's
    logarithm and plain tensor quadrature applies; the both-one case keeps
    an integrable log and uses the vertex-refined composite rule.
    """
    _check_kl(ctx, min(l_m, l_n))
    both_one = i_at_vertex and j_at_vertex
    return _tensor_adjacent(ctx, "S", l_m, l_n, theta, i_at_vertex, j_at_vertex,
                            nq, levels=levels if both_one else 0)


def double_adjacent_singular(ctx: KernelContext, l_m: float, l_n: float,
                             theta: float, nq: int = 20, levels: int = 8) -> complex:
    """Double-layer adjacent integral for the both-one-at-vertex basis pair.

    Evaluated through the polar vertex transform; collinear pairs return
    exactly zero since R stays orthogonal to the far segment's normal.
    """
    _check_kl(ctx, min(l_m, l_n))
    if abs(np.sin(theta)) < COLLINEAR_SIN_EPS:
        return 0j
    return _polar_adjacent(ctx, "D", l_m, l_n, theta, True, True, nq, levels)


def double_adjacent(ctx: KernelContext, l_m: float, l_n: float, theta: float,
                    i_at_vertex: bool, j_at_vertex: bool, nq: int = 20,
                    levels: int = 8, adjoint: bool = False) -> complex:
    """Double-layer (or adjoint) integral over an adjacent pair, any basis pair.

    Every combination goes through the polar transform: the both-one case
    needs it for the 1/R vertex singularity, and for mixed pairs it still
    beats plain tensor quadrature by several digits at equal cost.
    """
    _check_kl(ctx, min(l_m, l_n))
    if abs(np.sin(theta)) < COLLINEAR_SIN_EPS:
        return 0j
    op = "Dadj" if adjoint else "D"
    return _polar_adjacent(ctx, op, l_m, l_n, theta, i_at_vertex, j_at_vertex,
                           nq, levels)


def hyper_direct_coincident(ctx: KernelContext, length: float,
                            nq: int = 20) -> HypersingularCoincident:
    """Coincident hypersingular blocks with the log divergence removed.

    u11_reg = k^2 i11 + (i/2kl) H_1(kl) - i/4
              +- (1/2pi)(gamma + log(k/2) - 2/(kl)^2),
    u12     = k^2 i12 + (i/4) H_0(kl) - (i/2kl) H_1(kl) +- 1/(pi (kl)^2),
    upper signs for the first kind.
    """
    _check_kl(ctx, length)
    k = ctx.k
    kind = ctx.kind
    kl = k * length
    sgn = kind.sign
    sc = single_coincident(ctx, length, nq)
    h0 = hankel(kind, 0, kl)
    h1 = hankel(kind, 1, kl)
    u11 = (k * k * sc.i11 + (0.5j / kl) * h1 - 0.25j
           + sgn * (EULER_GAMMA + np.log(k / 2.0) - 2.0 / (kl * kl)) / (2.0 * np.pi))
    u12 = (k * k * sc.i12 + 0.25j * h0 - (0.5j / kl) * h1
           + sgn / (np.pi * kl * kl))
    return HypersingularCoincident(u11_reg=complex(u11), u12=complex(u12))


def hyper_adjacent_sing_reg(kind: HankelKind, l_m: float, l_n: float,
                            theta: float) -> complex:
    """Closed-form pole contribution of the adjacent hypersingular integral,
    log divergence removed.

    -+(1/2pi) { 1/2 + (sin/2 lm ln)[lm^2 atan2(ln sin, lm - ln cos)
                                    + ln^2 atan2(lm sin, ln - lm cos)]
                - log(lm ln)
                - (1/4 lm ln)[(cos (lm^2+ln^2) - 2 lm ln) log(lm^2+ln^2-2 lm ln cos)
                              - cos (lm^2 log lm^2 + ln^2 log ln^2)] }

    The two-argument arctangent keeps the antiderivative on the correct
    branch when lm < ln cos(theta) (or vice versa), and the log bracket is
    arranged so theta = pi/2 needs no special-casing; theta = pi reproduces
    the collinear limit.  Symmetric under swapping lm and ln.
    """
    s = np.sin(theta)
    c = np.cos(theta)
    at1 = np.arctan2(l_n * s, l_m - l_n * c)
    at2 = np.arctan2(l_m * s, l_n - l_m * c)
    q = l_m * l_m + l_n * l_n - 2.0 * l_m * l_n * c
    log_bracket = ((c * (l_m * l_m + l_n * l_n) - 2.0 * l_m * l_n) * np.log(q)
                   - c * (l_m * l_m * np.log(l_m * l_m)
                          + l_n * l_n * np.log(l_n * l_n)))
    val = (0.5
           + (s / (2.0 * l_m * l_n)) * (l_m * l_m * at1 + l_n * l_n * at2)
           - np.log(l_m * l_n)
           - log_bracket / (4.0 * l_m * l_n))
    return complex(-kind.sign * val / (2.0 * np.pi))


def hyper_direct_adjacent(ctx: KernelContext, l_m: float, l_n: float,
                          theta: float, i_at_vertex: bool, j_at_vertex: bool,
                          nq: int = 20, levels: int = 8) -> HypersingularAdjacent:
    """Adjacent hypersingular integral, split into smooth and pole parts.

    Both-one case: reg integrates the pole-subtracted kernel (regularized
    Hankel functions) by vertex-refined tensor quadrature, and sing_reg is
    the closed form of hyper_adjacent_sing_reg.  Basis pairs vanishing at
    the vertex are handled whole by the polar transform with sing_reg = 0.
    """
    _check_kl(ctx, min(l_m, l_n))
    if i_at_vertex and j_at_vertex:
        reg = _tensor_adjacent(ctx, "N", l_m, l_n, theta, True, True,
                               nq, levels=levels, regularized=True)
        sing = hyper_adjacent_sing_reg(ctx.kind, l_m, l_n, theta)
        return HypersingularAdjacent(reg=reg, sing_reg=sing)
    val = _polar_adjacent(ctx, "N", l_m, l_n, theta, i_at_vertex, j_at_vertex,
                          nq, levels)
    return HypersingularAdjacent(reg=val, sing_reg=0j)


def hyper_variational_coincident(ctx: KernelContext, length: float,
                                 nq: int = 20) -> tuple[complex, complex]:
    """Coincident blocks of the single-layer form of the hypersingular
    operator: (u11~, u12~) = k^2 (i11, i12) -+ (i/2 k^2 l^2) gamma0(kl)."""
    _check_kl(ctx, length)
    k = ctx.k
    kl = k * length
    sc = single_coincident(ctx, length, nq)
    g0 = gamma0(ctx.kind, kl, nq)
    corr = (0.5j / (k * k * length * length)) * g0
    return complex(k * k * sc.i11 - corr), complex(k * k * sc.i12 + corr)


def variational_adjacent(ctx: KernelContext, l_m: float, l_n: float,
                         theta: float, i_at_vertex: bool, j_at_vertex: bool,
                         curl_i: float, curl_j: float, nq: int = 20,
                         levels: int = 8) -> complex:
    """Adjacent pair of the variational hypersingular form.

    Integrand g(kR) [k^2 (n.n') p p' - curl_i curl_j]: the constant curl
    product keeps an integrable log at the vertex for every basis pair, so
    the vertex-refined composite rule is used throughout.
    """
    _check_kl(ctx, min(l_m, l_n))
    return _tensor_adjacent(ctx, "S", l_m, l_n, theta, i_at_vertex, j_at_vertex,
                            nq, levels=levels, curl_weight=(curl_i, curl_j))
