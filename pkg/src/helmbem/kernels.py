"""Pointwise Helmholtz kernel and its normal derivatives.

These are the regular-evaluation entry points used for well-separated
quadrature points; coincident-point arguments are rejected.  The grid variants
accept precomputed distance/projection arrays and are what the assembly loops
call.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .specfun import HankelKind, hankel, hankel01_grid, hankel2_from, hankel_reg

__all__ = [
    "KernelContext",
    "green",
    "dg_dn",
    "dg_dnp",
    "d2g_dndnp",
    "d2g_singular_part",
    "green_grid",
    "dlayer_grid",
    "hyper_grid",
]

COINCIDENT_RTOL = 1e-14


@dataclass(frozen=True)
class KernelContext:
    """Wavenumber and Hankel-kind selection shared by all kernel calls."""

    k: float
    kind: HankelKind = HankelKind.FIRST

    def __post_init__(self):
        if not (np.isfinite(self.k) and self.k > 0):
            raise ValueError(f"wavenumber must be positive and finite, got {self.k}")


def _separation(r, rp, scale=1.0):
    r = np.asarray(r, dtype=float)
    rp = np.asarray(rp, dtype=float)
    d = r - rp
    dist = float(np.hypot(d[0], d[1]))
    if dist <= COINCIDENT_RTOL * max(scale, 1.0):
        raise ValueError("coincident evaluation points; route singular pairs "
                         "through the dedicated integrators")
    return d, dist


def green(ctx: KernelContext, r, rp) -> complex:
    """Free-space kernel (i/4) H_0(k |r - r'|)."""
    _, dist = _separation(r, rp)
    return 0.25j * hankel(ctx.kind, 0, ctx.k * dist)


def dg_dnp(ctx: KernelContext, r, rp, np_vec) -> complex:
    """Normal derivative at the source point: (ik/4R) H_1(kR) (R . n')."""
    d, dist = _separation(r, rp)
    np_vec = np.asarray(np_vec, dtype=float)
    return (0.25j * ctx.k / dist) * hankel(ctx.kind, 1, ctx.k * dist) \
        * float(d @ np_vec)


def dg_dn(ctx: KernelContext, r, rp, n_vec) -> complex:
    """Normal derivative at the observation point: -(ik/4R) H_1(kR) (R . n)."""
    d, dist = _separation(r, rp)
    n_vec = np.asarray(n_vec, dtype=float)
    return (-0.25j * ctx.k / dist) * hankel(ctx.kind, 1, ctx.k * dist) \
        * float(d @ n_vec)


def d2g_dndnp(ctx: KernelContext, r, rp, n_vec, np_vec, regularized: bool = False) -> complex:
    """Second mixed normal derivative of the kernel.

    (ik/4R^2) [R H_1(kR) (n.n') - k H_2(kR) (R.n)(R.n')]; with
    regularized=True the Hankel functions are replaced by their
    pole-subtracted versions, leaving the smooth remainder of the kernel.
    """
    d, dist = _separation(r, rp)
    n_vec = np.asarray(n_vec, dtype=float)
    np_vec = np.asarray(np_vec, dtype=float)
    z = ctx.k * dist
    if regularized:
        h1, h2 = hankel_reg(ctx.kind, 1, z), hankel_reg(ctx.kind, 2, z)
    else:
        h1, h2 = hankel(ctx.kind, 1, z), hankel(ctx.kind, 2, z)
    rn = float(d @ n_vec)
    rnp = float(d @ np_vec)
    nn = float(n_vec @ np_vec)
    return (0.25j * ctx.k / dist**2) * (dist * h1 * nn - ctx.k * h2 * rn * rnp)


def d2g_singular_part(ctx: KernelContext, r, rp, n_vec, np_vec) -> complex:
    """Closed-form pole part split off by the regularized Hankel functions.

    +-(1/2pi) [(n.n')/R^2 - 2 (R.n)(R.n')/R^4], upper sign for the first kind;
    d2g_dndnp == d2g_dndnp(regularized=True) + this, identically.
    """
    d, dist = _separation(r, rp)
    n_vec = np.asarray(n_vec, dtype=float)
    np_vec = np.asarray(np_vec, dtype=float)
    rn = float(d @ n_vec)
    rnp = float(d @ np_vec)
    nn = float(n_vec @ np_vec)
    return complex(ctx.kind.sign / (2.0 * np.pi)
                   * (nn / dist**2 - 2.0 * rn * rnp / dist**4))


# ---------------------------------------------------------------------------
# Grid variants: vectorized over precomputed geometry arrays.
# ---------------------------------------------------------------------------
def green_grid(ctx: KernelContext, dist):
    h0, _ = hankel01_grid(ctx.kind, ctx.k * dist)
    return 0.25j * h0


def dlayer_grid(ctx: KernelContext, dist, r_dot_normal, adjoint: bool):
    """D (adjoint=False, uses R.n') or D-adjoint (adjoint=True, uses R.n)."""
    sign = -1.0 if adjoint else 1.0
    _, h1 = hankel01_grid(ctx.kind, ctx.k * dist)
    return sign * (0.25j * ctx.k / dist) * h1 * r_dot_normal


def hyper_grid(ctx: KernelContext, dist, rn, rnp, nn, regularized: bool = False):
    z = ctx.k * dist
    h0, h1 = hankel01_grid(ctx.kind, z)
    h2 = hankel2_from(h0, h1, z)
    if regularized:
        h1 = h1 + ctx.kind.sign * 2j / (np.pi * z)
        h2 = h2 + ctx.kind.sign * 4j / (np.pi * z * z)
    return (0.25j * ctx.k / (dist * dist)) * (dist * h1 * nn - ctx.k * h2 * rn * rnp)
