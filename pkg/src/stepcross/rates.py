"""Sweep the cross level, record errors, and fit the predicted order
2**(-a n) * n**b against the measurements.

Jointly estimating (a, b) from desk-scale n is ill conditioned because
log2(n) drifts slowly, so the acceptance protocol pins a at its predicted
value and fits only the logarithmic power and intercept; the free fit is
kept for diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .approx import best_approx_upper, fourier_sum_error
from .blocks import SmoothParams, hyperbolic_cross
from .extremal import ExtremalSpec, shell_extremal
from .poly import GridSpec

FIT_MODES = ("free", "slope-fixed")


@dataclass(frozen=True)
class RateFit:
    a_hat: float
    b_hat: float
    c_hat: float
    residual_rms: float
    a_theory: float
    b_theory: float
    mode: str


@dataclass(frozen=True)
class SweepRow:
    n: int
    cardinality: int
    error: float


def theory_exponents(p: float, q: float, theta: float, params: SmoothParams,
                     gamma_mode: str) -> tuple[float, float]:
    """Predicted (a, b) for the error of approximation from the level-n cross.

    a = r1 - (1/p - 1/q)_+ and b = (mu - 1)(1 - 1/theta), where mu counts the
    minimal smoothness coordinates for the gamma-prime cross (and for the
    genuinely off-diagonal p < q case) and equals d for the plain gamma cross
    on the diagonal p >= q.
    """
    pinv = 0.0 if math.isinf(p) else 1.0 / p
    qinv = 0.0 if math.isinf(q) else 1.0 / q
    a = params.r1 - max(pinv - qinv, 0.0)
    if p < q:
        mu = params.nu
    else:
        mu = params.nu if gamma_mode == "gamma-prime" else params.d
    theta_inv = 0.0 if math.isinf(theta) else 1.0 / theta
    b = (mu - 1) * (1.0 - theta_inv)
    return a, b


def validate_hypotheses(p: float, q: float, theta: float, params: SmoothParams,
                        gamma_mode: str) -> None:
    """Reject parameter combinations outside every covered regime, naming the
    violated condition."""
    if not (1 <= theta):
        raise ValueError("requires theta >= 1")
    if params.r1 <= 0:
        raise ValueError("requires r1 > 0")
    pinv = 0.0 if math.isinf(p) else 1.0 / p
    qinv = 0.0 if math.isinf(q) else 1.0 / q
    if p < q:
        if not (1 < p and q < math.inf):
            raise ValueError("off-diagonal p < q regime requires 1 < p < q < inf")
        if params.r1 <= pinv - qinv:
            raise ValueError("requires r1 > 1/p - 1/q")
        if gamma_mode == "gamma-prime":
            raise ValueError("off-diagonal p < q regime uses the gamma cross")
    elif p == q:
        if not (1 < p < math.inf) and p not in (1.0, math.inf):
            raise ValueError("diagonal regime requires 1 <= p = q <= inf")
    # q < p: any 1 <= q < p <= inf is covered


def sweep_extremal(p: float, q: float, theta: float, params: SmoothParams,
                   gamma_mode: str, n_range: Sequence[int], c4: float = 1.0,
                   grid: GridSpec = GridSpec(),
                   use_best_upper: bool | None = None) -> list[SweepRow]:
    """Errors of the per-level extremal member across a range of cross levels.

    For 1 < q < inf the Fourier-sum error is recorded (it matches the best
    approximation in order there); for q in {1, inf} the certified upper
    bound from the smooth aggregate is recorded instead.
    """
    validate_hypotheses(p, q, theta, params, gamma_mode)
    if use_best_upper is None:
        use_best_upper = not (1 < q < math.inf)
    rows = []
    for n in n_range:
        member = shell_extremal(ExtremalSpec(n=n, d=params.d, r1=params.r1, p=p, theta=theta, c4=c4))
        if use_best_upper:
            err = best_approx_upper(member, n, params, gamma_mode, q, grid=grid)
        else:
            err = fourier_sum_error(member, n, params, gamma_mode, q, grid=grid)
        rows.append(SweepRow(n=n, cardinality=hyperbolic_cross(n, params, gamma_mode).freq_count,
                             error=err))
    return rows


def fit_rates(rows: Sequence[SweepRow] | Sequence[tuple], mode: str,
              a_theory: float, b_theory: float) -> RateFit:
    """Least squares on log2(error) = -a*n + b*log2(n) + c.

    ``slope-fixed`` pins a at ``a_theory`` and fits (b, c) only.
    """
    if mode not in FIT_MODES:
        raise ValueError(f"unknown fit mode {mode!r}; expected one of {FIT_MODES}")
    ns = np.array([r.n if isinstance(r, SweepRow) else r[0] for r in rows], dtype=float)
    errs = np.array([r.error if isinstance(r, SweepRow) else r[-1] for r in rows], dtype=float)
    if len(ns) < 4:
        raise ValueError("need at least 4 sweep rows")
    if np.any(errs <= 0):
        raise ValueError("errors must be positive for a log fit")
    y = np.log2(errs)
    logn = np.log2(ns)
    if mode == "free":
        X = np.column_stack([-ns, logn, np.ones_like(ns)])
        coef, *_ = np.linalg.lstsq(X, y, rcond=None)
        a_hat, b_hat, c_hat = float(coef[0]), float(coef[1]), float(coef[2])
    else:
        y2 = y + a_theory * ns
        X = np.column_stack([logn, np.ones_like(ns)])
        coef, *_ = np.linalg.lstsq(X, y2, rcond=None)
        a_hat, b_hat, c_hat = float(a_theory), float(coef[0]), float(coef[1])
    resid = y - (-a_hat * ns + b_hat * logn + c_hat)
    rms = float(np.sqrt(np.mean(resid**2)))
    return RateFit(a_hat, b_hat, c_hat, rms, float(a_theory), float(b_theory), mode)


def predicted_order(n: float, a_theory: float, b_theory: float) -> float:
    return 2.0 ** (-a_theory * n) * float(n) ** b_theory
