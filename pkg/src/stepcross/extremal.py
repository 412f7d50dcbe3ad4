"""Test families used to probe the approximation rates from below.

* ``dirichlet_shell``: unit coefficients on every frequency of the shell of
  blocks with (s,1) = n; the worst-case building block for sharp cuts.
* ``shell_extremal``: the shell polynomial scaled so its class norm stays in
  an n-independent band.
* ``shifted_rect_sample``: sums over the even shell of rectangle polynomials
  re-centered at the block anchors, with sup-normalized factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product as iter_product

import numpy as np

from .blocks import block_anchor, block_cardinality, compositions, even_shell
from .poly import GridSpec, TrigPoly, eval_grid, resolve_grid_dims


@dataclass(frozen=True)
class ExtremalSpec:
    """Parameters of the scaled shell extremal."""

    n: int
    d: int
    r1: float
    p: float
    theta: float
    c4: float = 1.0

    def __post_init__(self):
        if self.n < self.d:
            raise ValueError("need n >= d for a nonempty shell")
        if self.r1 <= 0:
            raise ValueError("r1 must be positive")


def dirichlet_shell(n: int, d: int) -> TrigPoly:
    """Sum of exp(i k.x) over all k in blocks with (s,1) = n.

    Term count is 2**n * C(n-1, d-1); returns the zero polynomial for n < d.
    """
    coeffs = {}
    for s in compositions(n, d):
        ranges = []
        for sj in s:
            lo, hi = 2 ** (sj - 1), 2**sj
            ranges.append(tuple(range(-hi + 1, -lo + 1)) + tuple(range(lo, hi)))
        for k in iter_product(*ranges):
            coeffs[k] = 1.0
    return TrigPoly(d, coeffs)


def shell_term_count(n: int, d: int) -> int:
    if n < d:
        return 0
    return 2**n * math.comb(n - 1, d - 1)


def shell_extremal(spec: ExtremalSpec) -> TrigPoly:
    """c4 * 2**(-n(r1+1-1/p)) * n**(-(d-1)/theta) times the shell polynomial.

    For theta = inf the logarithmic factor is absent (exponent 0).
    """
    log_exp = 0.0 if math.isinf(spec.theta) else (spec.d - 1) / spec.theta
    scale = spec.c4 * 2.0 ** (-spec.n * (spec.r1 + 1.0 - 1.0 / spec.p)) * spec.n**-log_exp
    return scale * dirichlet_shell(spec.n, spec.d)


def class_scale(n: int, d: int, r1: float, theta: float) -> float:
    """Scaling that places the shifted-rectangle family inside the p=inf class."""
    log_exp = 0.0 if math.isinf(theta) else (d - 1) / theta
    return 2.0 ** (-n * r1) * float(n) ** -log_exp


TPRIME_MODES = ("constant", "random-sign")


def shifted_rect_sample(n: int, d: int, mode: str = "constant",
                        rng: int | np.random.Generator | None = 0) -> TrigPoly:
    """A member of the shifted-rectangle family over the even shell at level n.

    For each block s in the shell, a factor polynomial of rectangular degree
    2**(s_j - 2) rides on the anchor frequency of the block.  ``constant``
    mode uses the factor 1; ``random-sign`` draws plus-minus-one coefficients
    on the whole rectangle and rescales by the factor's oversampled grid max,
    so the factor's sup is 1 on that grid.
    """
    if mode not in TPRIME_MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {TPRIME_MODES}")
    if n % 2 != 0:
        raise ValueError("shell level must be even")
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    coeffs: dict[tuple[int, ...], complex] = {}
    for s in even_shell(n, d):
        anchor = block_anchor(s)
        if mode == "constant":
            coeffs[anchor] = coeffs.get(anchor, 0.0) + 1.0
            continue
        half = [2 ** (sj - 2) for sj in s]
        rect = {}
        for m in iter_product(*[range(-h, h + 1) for h in half]):
            rect[m] = float(rng.choice((-1.0, 1.0)))
        factor = TrigPoly(d, rect)
        peak = float(np.max(np.abs(eval_grid(
            factor, resolve_grid_dims(factor, GridSpec(oversampling=8.0))))))
        for m, c in factor.coeffs.items():
            k = tuple(aj + mj for aj, mj in zip(anchor, m))
            coeffs[k] = coeffs.get(k, 0.0) + c / peak
    return TrigPoly(d, coeffs)
