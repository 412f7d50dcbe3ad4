"""De la Vallee-Poussin kernels and the smooth dyadic block filters they induce.

``vdp_coeff(l, k)`` is the Fourier coefficient of the order-l kernel: 1 on
|k| <= l, a linear ramp down to 0 on l < |k| < 2l, 0 beyond (for l = 1 the
ramp band is empty).  The block filter attached to a block index s is, per
coordinate, the difference of two consecutive kernels in the dyadic ladder;
convolving with it is plain coefficient multiplication.

Two conventions are provided.  ``literal`` takes the ladder rung at s = 1 as
V_2 - V_1, which annihilates the frequencies |k| = 1 and therefore cannot
reproduce every mean-zero polynomial from its filtered pieces.  The default
``partition-exact`` convention replaces the subtracted V_1 by the pure mean
projection, so that summing the filters over all block indices reproduces
any mean-zero polynomial exactly.
"""

from __future__ import annotations

from typing import Sequence

from .blocks import SmoothParams
from .poly import GridSpec, TrigPoly

CONVENTIONS = ("partition-exact", "literal")


def vdp_coeff(l: int, k: int) -> float:
    if l < 1:
        raise ValueError("kernel order must be >= 1")
    a = abs(int(k))
    if a <= l:
        return 1.0
    if a < 2 * l:
        return 1.0 - (a - l) / l
    return 0.0


def block_filter_coeff(s: int, k: int, convention: str = "partition-exact") -> float:
    """Per-coordinate multiplier of the block-s filter at frequency k."""
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")
    if s < 1:
        raise ValueError("block index components must be >= 1")
    if s == 1 and convention == "partition-exact":
        return vdp_coeff(2, k) - (1.0 if k == 0 else 0.0)
    return vdp_coeff(2**s, k) - vdp_coeff(2 ** (s - 1), k)


def smooth_block(f: TrigPoly, s: Sequence[int], convention: str = "partition-exact") -> TrigPoly:
    """Convolution of f with the product block filter for index ``s``."""
    s = tuple(int(x) for x in s)
    if len(s) != f.d:
        raise ValueError("dimension mismatch")
    out = {}
    for k, c in f.coeffs.items():
        mult = 1.0
        for sj, kj in zip(s, k):
            mult *= block_filter_coeff(sj, kj, convention)
            if mult == 0.0:
                break
        if mult != 0.0:
            out[k] = c * mult
    return TrigPoly(f.d, out)


def filter_support_blocks(f: TrigPoly) -> list[tuple[int, ...]]:
    """Block indices s for which the smooth block of f can be nonzero.

    A frequency in dyadic block m is touched only by the filters with index
    m - 1 and m per coordinate, so candidates come from that neighborhood.
    """
    candidates: set[tuple[int, ...]] = set()
    from .blocks import block_of

    for k in f.coeffs:
        m = block_of(k)
        if m is None:
            raise ValueError(f"frequency {k} has a zero component")
        per_dim = [sorted({mj, mj - 1} - {0}) for mj in m]
        stack = [()]
        for options in per_dim:
            stack = [acc + (o,) for acc in stack for o in options]
        candidates.update(stack)
    return sorted(candidates)


def kernel_poly_1d(s: int, convention: str = "partition-exact") -> TrigPoly:
    """The one-dimensional block filter as a trigonometric polynomial."""
    hi = 2 ** (s + 1)
    coeffs = {}
    for k in range(-hi, hi + 1):
        v = block_filter_coeff(s, k, convention)
        if v != 0.0:
            coeffs[(k,)] = v
    return TrigPoly(1, coeffs)


def kernel_l1_norm(s: Sequence[int], convention: str = "partition-exact",
                   grid: GridSpec = GridSpec()) -> float:
    """L1 norm of the product block filter on the torus.

    The filter is a tensor product, so the norm factorizes over coordinates;
    each factor is a one-dimensional quadrature.
    """
    from .norms import lp_norm

    out = 1.0
    for sj in s:
        out *= lp_norm(kernel_poly_1d(int(sj), convention), 1.0, grid)
    return out


def smooth_aggregate(f: TrigPoly, n: float, params: SmoothParams,
                     convention: str = "partition-exact") -> TrigPoly:
    """Sum of smooth blocks of f over (s, gamma') < n - (gamma', 1).

    A near-best approximant with spectrum inside the gamma'-cross at level n.
    """
    gp = params.gamma_prime
    threshold = n - sum(gp)
    out = TrigPoly.zero(f.d)
    for s in filter_support_blocks(f):
        if sum(sj * gj for sj, gj in zip(s, gp)) < threshold:
            out = out + smooth_block(f, s, convention)
    return out
