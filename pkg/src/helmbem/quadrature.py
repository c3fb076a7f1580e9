"""Gauss-Legendre rules and 1D/2D integration drivers.

Rules are generated once per order and cached.  Integrands must be
numpy-vectorized: they receive node arrays and return value arrays.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "QuadRule",
    "gl_rule",
    "integrate_1d",
    "integrate_1d_refined",
    "integrate_2d",
    "refined_edges",
]

MAX_ORDER = 128


@dataclass(frozen=True)
class QuadRule:
    """Gauss-Legendre nodes/weights on the reference interval (-1, 1)."""

    nodes: np.ndarray
    weights: np.ndarray
    order: int


_RULES: dict[int, QuadRule] = {}


def _newton_legendre(n: int):
    # Roots of P_n by Newton iteration from Chebyshev initial guesses.
    k = np.arange(1, n + 1)
    x = -np.cos(np.pi * (k - 0.25) / (n + 0.5))
    for _ in range(100):
        p0 = np.ones_like(x)
        p1 = x.copy()
        for j in range(2, n + 1):
            p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
        if n == 1:
            p1, p0 = x, np.ones_like(x)
        dp = n * (x * p1 - p0) / (x * x - 1.0)
        dx = p1 / dp
        x -= dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    p0 = np.ones_like(x)
    p1 = x.copy()
    for j in range(2, n + 1):
        p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
    if n == 1:
        p1, p0 = x, np.ones_like(x)
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    return x, w


def gl_rule(n: int) -> QuadRule:
    """Return the (cached) n-point Gauss-Legendre rule on (-1, 1)."""
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_ORDER:
        raise ValueError(f"order must be an integer in [1, {MAX_ORDER}], got {n!r}")
    n = int(n)
    rule = _RULES.get(n)
    if rule is None:
        if n == 1:
            x, w = np.array([0.0]), np.array([2.0])
        else:
            x, w = _newton_legendre(n)
        # enforce exact symmetry of the computed rule
        x = 0.5 * (x - x[::-1])
        w = 0.5 * (w + w[::-1])
        x.setflags(write=False)
        w.setflags(write=False)
        rule = QuadRule(nodes=x, weights=w, order=n)
        _RULES[n] = rule
    return rule


def integrate_1d(rule: QuadRule, a: float, b: float, f) -> complex:
    """Gauss-Legendre approximation of the integral of f over [a, b].

    Nodes are strictly interior, so f is never evaluated at a or b.
    """
    if not (np.isfinite(a) and np.isfinite(b) and a <= b):
        raise ValueError(f"bad interval [{a}, {b}]")
    if a == b:
        return 0j
    xs = 0.5 * (b - a) * (rule.nodes + 1.0) + a
    vals = np.asarray(f(xs))
    if not np.all(np.isfinite(vals)):
        bad = xs[~np.isfinite(vals)]
        raise ValueError(f"integrand returned non-finite value at x={bad[0]!r}")
    return complex(np.sum(rule.weights * vals) * 0.5 * (b - a))


def refined_edges(a: float, b: float, levels: int) -> np.ndarray:
    """Dyadic panel edges on [a, b] clustering geometrically toward a."""
    if levels < 0:
        raise ValueError("levels must be >= 0")
    edges = [b]
    w = b - a
    for _ in range(levels):
        w /= 2.0
        edges.append(a + w)
    edges.append(a)
    return np.asarray(edges[::-1])


def integrate_1d_refined(rule: QuadRule, a: float, b: float, f, levels: int) -> complex:
    """Composite rule on a dyadic subdivision clustering toward the endpoint a.

    With levels = 0 this is identical to integrate_1d.  Integrands with a
    logarithmic singularity at a converge geometrically in `levels`.
    """
    if not (np.isfinite(a) and np.isfinite(b) and a <= b):
        raise ValueError(f"bad interval [{a}, {b}]")
    if a == b:
        return 0j
    total = 0j
    for lo, hi in zip(*_edge_pairs(a, b, levels)):
        total += integrate_1d(rule, lo, hi, f)
    return total


def _edge_pairs(a, b, levels):
    edges = refined_edges(a, b, levels)
    return edges[:-1], edges[1:]


def integrate_2d(rule: QuadRule, f) -> complex:
    """Tensor-product rule for f(u, v) over the unit square.

    f receives two meshgrid-shaped arrays and must return a matching array.
    """
    u = 0.5 * (rule.nodes + 1.0)
    w = 0.5 * rule.weights
    U, V = np.meshgrid(u, u, indexing="ij")
    vals = np.asarray(f(U, V))
    if not np.all(np.isfinite(vals)):
        i, j = np.argwhere(~np.isfinite(vals))[0]
        raise ValueError(f"integrand returned non-finite value at (u, v)="
                         f"({U[i, j]!r}, {V[i, j]!r})")
    return complex(np.einsum("i,j,ij->", w, w, vals))
