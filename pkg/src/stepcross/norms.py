"""Norms on the torus: L_p, mixed-smoothness Besov norms in sharp and smooth
block form, the block-sum norm that is stronger than L_q, the sup-form
difference seminorm, and the inequality check between different metrics.

Numerical conventions
---------------------
* L_2 is computed exactly from coefficients (Parseval, normalized measure).
* L_inf is the maximum over an oversampled grid and is therefore a lower
  estimate of the true sup; oversampling is forced to at least 4.
* Even integer p uses trigonometric-rectangle quadrature on a grid fine
  enough to make |f|^p a resolved trigonometric polynomial, hence exact.
* Any other p uses quadrature with a doubling self-check: the grid is
  refined until one doubling changes the value by less than ``check_rtol``
  relatively.  Grids pinned by ``points_per_dim`` skip the self-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from itertools import product as iter_product
from typing import Sequence

import numpy as np

from .blocks import SmoothParams
from .kernels import filter_support_blocks, smooth_block
from .poly import GridSpec, TrigPoly, blocks_of, eval_grid, mixed_difference, resolve_grid_dims

FORMS = ("sharp", "smooth")


class QuadratureError(RuntimeError):
    """Self-checked quadrature failed to converge within the refinement budget."""


def _quad_mean_p(f: TrigPoly, p: float, dims: Sequence[int]) -> float:
    vals = eval_grid(f, dims)
    return float(np.mean(np.abs(vals) ** p))


def lp_norm(f: TrigPoly, p: float, grid: GridSpec = GridSpec()) -> float:
    """L_p norm with the normalized measure (2*pi)**(-d) dx."""
    if p < 1:
        raise ValueError("p must be >= 1")
    if f.is_zero():
        return 0.0
    if p == 2:
        return math.sqrt(sum(abs(c) ** 2 for _, c in f.terms()))
    if math.isinf(p):
        g = grid if grid.oversampling >= 4 else replace(grid, oversampling=4.0)
        vals = eval_grid(f, resolve_grid_dims(f, g))
        return float(np.max(np.abs(vals)))
    deg = f.degree()
    if p == int(p) and int(p) % 2 == 0:
        # |f|^p is itself a trigonometric polynomial of degree p*deg
        base = resolve_grid_dims(f, grid)
        dims = tuple(max(n, int(p) * m + 1) for n, m in zip(base, deg))
        return _quad_mean_p(f, p, dims) ** (1.0 / p)
    base = resolve_grid_dims(f, grid)
    prev = _quad_mean_p(f, p, base) ** (1.0 / p)
    if grid.points_per_dim is not None or not grid.self_check:
        return prev
    # refine by exact doubling of the base grid so successive grids nest
    for level in range(1, grid.max_refine + 1):
        dims = tuple(n * 2**level for n in base)
        if math.prod(dims) > grid.max_points:
            raise QuadratureError(
                f"L_{p} quadrature hit the grid budget before reaching "
                f"rtol={grid.check_rtol} (last value {prev:.6e})"
            )
        cur = _quad_mean_p(f, p, dims) ** (1.0 / p)
        if abs(cur - prev) <= grid.check_rtol * max(abs(cur), 1e-300):
            return cur
        prev = cur
    raise QuadratureError(
        f"L_{p} quadrature not converged to rtol={grid.check_rtol} "
        f"within {grid.max_refine} refinements (last value {prev:.6e})"
    )


@dataclass(frozen=True)
class NormSpec:
    """Which class norm to evaluate and how."""

    p: float
    theta: float = math.inf
    form: str = "sharp"
    grid: GridSpec = GridSpec()

    def __post_init__(self):
        if self.form not in FORMS:
            raise ValueError(f"unknown block form {self.form!r}; expected one of {FORMS}")
        if self.form == "sharp" and not (1 < self.p < math.inf):
            raise ValueError("sharp block form requires 1 < p < inf")
        if not (1 <= self.theta):
            raise ValueError("theta must be >= 1")


def _block_norms(f: TrigPoly, p: float, form: str, grid: GridSpec,
                 convention: str = "partition-exact") -> list[tuple[tuple[int, ...], float]]:
    """Per-block L_p norms of the sharp or smooth components, sorted by block."""
    if form not in FORMS:
        raise ValueError(f"unknown block form {form!r}; expected one of {FORMS}")
    if form == "sharp" and not (1 < p < math.inf):
        raise ValueError("sharp block form requires 1 < p < inf")
    if not f.is_mean_zero():
        raise ValueError("polynomial must have mean zero in every variable")
    out = []
    if form == "sharp":
        for s, comp in blocks_of(f).items():
            out.append((s, lp_norm(comp, p, grid)))
    else:
        for s in filter_support_blocks(f):
            comp = smooth_block(f, s, convention)
            if not comp.is_zero():
                out.append((s, lp_norm(comp, p, grid)))
    return out


def aggregate_block_norms(block_norms: Sequence[tuple[tuple[int, ...], float]],
                          r: Sequence[float], theta: float) -> float:
    """l_theta aggregation of 2**(s.r)-weighted per-block norms."""
    terms = [2.0 ** sum(sj * rj for sj, rj in zip(s, r)) * v for s, v in block_norms]
    if math.isinf(theta):
        return max(terms, default=0.0)
    return sum(t**theta for t in terms) ** (1.0 / theta)


def besov_mixed_norm(f: TrigPoly, params: SmoothParams, p: float, theta: float,
                     form: str = "sharp", grid: GridSpec = GridSpec(),
                     convention: str = "partition-exact") -> float:
    """Mixed-smoothness class norm: l_theta of 2**(s.r) times block L_p norms."""
    if f.is_zero():
        return 0.0
    if len(params.r) != f.d:
        raise ValueError("smoothness vector dimension mismatch")
    return aggregate_block_norms(_block_norms(f, p, form, grid, convention), params.r, theta)


def besov_norm_spec(f: TrigPoly, params: SmoothParams, spec: NormSpec) -> float:
    return besov_mixed_norm(f, params, spec.p, spec.theta, spec.form, spec.grid)


def bq1_norm(f: TrigPoly, q: float, form: str = "smooth", grid: GridSpec = GridSpec(),
             convention: str = "partition-exact") -> float:
    """Sum over blocks of the block component's L_q norm (stronger than L_q)."""
    if f.is_zero():
        return 0.0
    return sum(v for _, v in _block_norms(f, q, form, grid, convention))


def nikolskii_check(t: TrigPoly, p: float, q: float,
                    grid: GridSpec = GridSpec()) -> tuple[float, float, bool]:
    """Different-metrics inequality for a polynomial of rectangular degree n.

    Returns (|t|_q, 2**d * prod n_j**(1/p - 1/q) * |t|_p, lhs <= rhs) with the
    degree bound n_j = max(1, max_k |k_j|).
    """
    if not (1 <= p < q):
        raise ValueError("requires 1 <= p < q")
    lhs = lp_norm(t, q, grid)
    degs = tuple(max(1, m) for m in t.degree())
    qinv = 0.0 if math.isinf(q) else 1.0 / q
    rhs = 2.0**t.d * math.prod(m ** (1.0 / p - qinv) for m in degs) * lp_norm(t, p, grid)
    return lhs, rhs, lhs <= rhs * (1 + 1e-9)


def _h_grid(h_points: int) -> np.ndarray:
    return np.geomspace(2.0 * math.pi * 2.0**-20, 2.0 * math.pi, num=h_points, endpoint=False)


def difference_seminorm(f: TrigPoly, params: SmoothParams, order: Sequence[int],
                        p: float = 2.0, h_points: int = 64,
                        grid: GridSpec = GridSpec()) -> float:
    """Sup-form seminorm: max over a log grid of steps h of
    |mixed difference of f|_p * prod h_j**(-r_j).

    A lower estimate of the supremum.  For p = 2 the difference norm is
    evaluated exactly from coefficients; other p walk the h grid with
    quadrature and are markedly slower.
    """
    order = tuple(int(x) for x in order)
    if len(order) != f.d or len(params.r) != f.d:
        raise ValueError("dimension mismatch")
    for oj, rj in zip(order, params.r):
        if oj <= rj:
            raise ValueError("difference order must exceed the smoothness in each coordinate")
    if f.is_zero():
        return 0.0
    hs = _h_grid(h_points)
    hw = [hs ** (-rj) for rj in params.r]
    if p == 2:
        terms = f.terms()
        K = np.array([k for k, _ in terms], dtype=np.int64)
        A = np.array([abs(c) ** 2 for _, c in terms])
        # (H, nnz) per-coordinate factors |e^{i k h} - 1|^{2 order}
        W = [
            (4.0 * np.sin(0.5 * np.outer(hs, K[:, j])) ** 2) ** order[j]
            for j in range(f.d)
        ]
        if f.d == 1:
            vals = np.sqrt(W[0] @ A) * hw[0]
            return float(np.max(vals))
        if f.d == 2:
            sq = np.einsum("ac,bc->ab", W[0] * A, W[1])
            vals = np.sqrt(sq) * np.outer(hw[0], hw[1])
            return float(np.max(vals))
        if f.d == 3:
            best = 0.0
            for a in range(len(hs)):
                sq = np.einsum("c,bc,gc->bg", W[0][a] * A, W[1], W[2])
                vals = np.sqrt(sq) * hw[0][a] * np.outer(hw[1], hw[2])
                best = max(best, float(np.max(vals)))
            return best
    best = 0.0
    g = replace(grid, self_check=False)
    for idx in iter_product(range(len(hs)), repeat=f.d):
        h = tuple(hs[i] for i in idx)
        v = lp_norm(mixed_difference(f, order, h), p, g)
        v *= math.prod(hw[j][idx[j]] for j in range(f.d))
        best = max(best, v)
    return best
