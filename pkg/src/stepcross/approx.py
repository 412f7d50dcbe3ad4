"""Approximation errors of the step hyperbolic Fourier sum and certified
upper bounds on the best approximation by cross polynomials.

The class-level suprema are never optimized over; the extremal families
stand in for them, matching how the lower bounds are actually realized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .blocks import BlockIndexSet, SmoothParams, hyperbolic_cross
from .kernels import smooth_aggregate
from .norms import _block_norms, bq1_norm
from .poly import GridSpec, TrigPoly, project_cross


@dataclass(frozen=True)
class ApproxResult:
    n: float
    cross_cardinality: int
    error_fourier_sum: float
    error_best_upper: float
    q: float
    gamma_mode: str

    def __post_init__(self):
        if self.error_best_upper > self.error_fourier_sum * (1 + 1e-9):
            raise ValueError("best-approximation bound exceeds the Fourier-sum error")


def default_form(q: float) -> str:
    return "sharp" if 1 < q < math.inf else "smooth"


def fourier_sum_error(f: TrigPoly, n: float, params: SmoothParams, gamma_mode: str,
                      q: float, form: str | None = None,
                      grid: GridSpec = GridSpec()) -> float:
    """Block-sum norm of f minus its Fourier sum over the level-n cross."""
    form = default_form(q) if form is None else form
    cross = hyperbolic_cross(n, params, gamma_mode)
    return bq1_norm(f - project_cross(f, cross), q, form, grid)


def best_approx_upper(f: TrigPoly, n: float, params: SmoothParams, gamma_mode: str,
                      q: float, form: str | None = None, grid: GridSpec = GridSpec(),
                      convention: str = "partition-exact") -> float:
    """Upper bound for the best approximation from the level-n cross.

    Minimum of the Fourier-sum error and the error of the smooth-block
    aggregate (the latter has spectrum inside the gamma'-cross, so for the
    gamma-prime mode both candidates are admissible).
    """
    form = default_form(q) if form is None else form
    err_sum = fourier_sum_error(f, n, params, gamma_mode, q, form, grid)
    candidates = [err_sum]
    if gamma_mode == "gamma-prime" or params.nu == params.d:
        agg = smooth_aggregate(f, n, params, convention)
        candidates.append(bq1_norm(f - agg, q, form, grid))
    return min(candidates)


def approx_result(f: TrigPoly, n: float, params: SmoothParams, gamma_mode: str,
                  q: float, form: str | None = None,
                  grid: GridSpec = GridSpec()) -> ApproxResult:
    cross = hyperbolic_cross(n, params, gamma_mode)
    err = fourier_sum_error(f, n, params, gamma_mode, q, form, grid)
    ub = best_approx_upper(f, n, params, gamma_mode, q, form, grid)
    return ApproxResult(n, cross.freq_count, err, min(ub, err), q, gamma_mode)


def random_mixed_poly(rng: np.random.Generator, d: int, max_shell: int,
                      blocks_per_poly: int = 6, terms_per_block: int = 3,
                      max_component: int | None = None) -> TrigPoly:
    """Sparse random polynomial touching blocks on both sides of a cross cut.

    Draws ``blocks_per_poly`` blocks uniformly from all blocks with
    (s,1) <= max_shell (and, if given, every component <= max_component) and
    fills a few frequencies per block with standard complex Gaussian
    coefficients.
    """
    from .blocks import compositions

    all_blocks = [s for m in range(d, max_shell + 1) for s in compositions(m, d)
                  if max_component is None or max(s) <= max_component]
    take = min(blocks_per_poly, len(all_blocks))
    coeffs: dict[tuple[int, ...], complex] = {}
    for idx in rng.choice(len(all_blocks), size=take, replace=False):
        s = all_blocks[int(idx)]
        for _ in range(terms_per_block):
            k = []
            for sj in s:
                mag = int(rng.integers(2 ** (sj - 1), 2**sj))
                k.append(mag if rng.random() < 0.5 else -mag)
            coeffs[tuple(k)] = complex(rng.standard_normal(), rng.standard_normal())
    return TrigPoly(d, coeffs)


def projector_norm_probe(n: float, params: SmoothParams, q: float, samples: int,
                         rng_seed: int = 0, gamma_mode: str = "gamma",
                         grid: GridSpec | None = None) -> float:
    """Max over random polynomials of |S_Q f| / |f| in the sharp block-sum norm.

    The Fourier sum drops whole blocks, so each ratio is a subset sum over
    the same nonnegative per-block values and cannot exceed 1 regardless of
    quadrature accuracy; the grid below is therefore kept cheap.
    """
    if not (1 < q < math.inf):
        raise ValueError("projector probe requires 1 < q < inf (sharp form)")
    if grid is None:
        grid = GridSpec(oversampling=2.0, self_check=False)
    rng = np.random.default_rng(rng_seed)
    cross = hyperbolic_cross(n, params, gamma_mode)
    worst = 0.0
    for _ in range(samples):
        f = random_mixed_poly(rng, params.d, max_shell=int(n) + 2)
        per_block = _block_norms(f, q, "sharp", grid)
        total = sum(v for _, v in per_block)
        if total == 0.0:
            continue
        kept = sum(v for s, v in per_block if s in cross)
        worst = max(worst, kept / total)
    return worst
