"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines and timings.  Exact statements carry 1e-12-style tolerances; the order
statements are slope-fixed fits or band checks at desk scale.
"""

import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from stepcross.approx import projector_norm_probe, random_mixed_poly
from stepcross.blocks import SmoothParams, weighted_tail_sums
from stepcross.entropy import (CloudProblem, covering_number_exact,
                               covering_number_greedy, packing_number_exact,
                               packing_number_greedy)
from stepcross.experiments import (ExperimentConfig, csv_body, run_experiment)
from stepcross.extremal import dirichlet_shell
from stepcross.kernels import filter_support_blocks, smooth_block
from stepcross.norms import lp_norm
from stepcross.poly import GridSpec, TrigPoly, blocks_of
from stepcross.rates import fit_rates, sweep_extremal, theory_exponents


@contextmanager
def criterion(num, desc, budget_s):
    start = time.time()
    try:
        yield
    except Exception:
        print(f"criterion {num:02d} FAIL  {desc}  [{time.time() - start:.1f}s]")
        raise
    elapsed = time.time() - start
    print(f"criterion {num:02d} PASS  {desc}  [{elapsed:.1f}s / budget {budget_s}s]")
    assert elapsed < budget_s, f"criterion {num} exceeded its runtime budget"


def test_criterion_01_partition_of_unity():
    with criterion(1, "partition of unity, 500 random polynomials", 30):
        rng = np.random.default_rng(101)
        worst = 0.0
        for i in range(500):
            d = 1 + i % 3
            f = random_mixed_poly(rng, d, max_shell=8 + (d - 1), blocks_per_poly=6,
                                  terms_per_block=4, max_component=8)
            assert max(m for k in f.coeffs for m in map(abs, k)) <= 2**8
            total = TrigPoly.zero(d)
            for s in filter_support_blocks(f):
                total = total + smooth_block(f, s, "partition-exact")
            keys = set(f.coeffs) | set(total.coeffs)
            err = max(abs(f.coeffs.get(k, 0.0) - total.coeffs.get(k, 0.0)) for k in keys)
            worst = max(worst, err)
        assert worst <= 1e-12, f"worst coefficient error {worst}"


def test_criterion_02_projector_norm_bounded():
    with criterion(2, "Fourier-sum projector norm <= 1 in the block-sum norm", 60):
        worst = 0.0
        seed = 0
        for q in (1.5, 2.0, 3.0):
            for d in (2, 3):
                params = SmoothParams((1.0,) * d)
                for n in range(4, 9):
                    seed += 1
                    ratio = projector_norm_probe(n, params, q, samples=200,
                                                 rng_seed=seed)
                    worst = max(worst, ratio)
        assert worst <= 1 + 1e-9, f"projector ratio {worst}"


def test_criterion_03_nikolskii_inequality(tmp_path):
    with criterion(3, "different-metrics inequality, 1000 random polynomials", 120):
        cfg = ExperimentConfig(theorem_tag="nikolskii", d=2, r=(1.0, 1.0),
                               samples=1000, rng_seed=5,
                               output_path=str(tmp_path / "nik"))
        out = run_experiment(cfg)
        assert out["all_ok"]


def test_criterion_04_shell_block_norms():
    with criterion(4, "shell block norms: exact at p=2, banded at p=4", 120):
        for d in (1, 2, 3):
            for n in range(d, 13):
                dn = dirichlet_shell(n, d)
                for s, comp in blocks_of(dn).items():
                    got = lp_norm(comp, 2.0)
                    want = 2.0 ** (sum(s) / 2)
                    assert abs(got - want) <= 1e-12 * want
        ratios = []
        for ssum in range(6, 15):
            comp = blocks_of(dirichlet_shell(ssum, 1))[(ssum,)]
            ratios.append(lp_norm(comp, 4.0) / 2.0 ** (0.75 * ssum))
        for s in ((3, 3), (5, 4), (7, 7), (8, 6)):
            comp = blocks_of(dirichlet_shell(sum(s), 2))[s]
            ratios.append(lp_norm(comp, 4.0) / 2.0 ** (0.75 * sum(s)))
        assert max(ratios) / min(ratios) <= 4.0


def _rate_case(num, desc, p, q, r, thetas, b_tol, budget_s, n_lo=5, n_hi=11):
    params = SmoothParams(r)
    with criterion(num, desc, budget_s * len(thetas)):
        for theta in thetas:
            t0 = time.time()
            rows = sweep_extremal(p, q, theta, params, "gamma", range(n_lo, n_hi + 1))
            a_th, b_th = theory_exponents(p, q, theta, params, "gamma")
            fit = fit_rates(rows, "slope-fixed", a_th, b_th)
            elapsed = time.time() - t0
            print(f"    theta={theta}: a_theory={a_th} b_theory={b_th} "
                  f"b_hat={fit.b_hat:+.3f} resid={fit.residual_rms:.4f} [{elapsed:.1f}s]")
            assert abs(fit.b_hat - b_th) <= b_tol, (theta, fit.b_hat, b_th)
            assert fit.residual_rms <= 0.15, (theta, fit.residual_rms)
            assert elapsed < budget_s


def test_criterion_05_rate_p_less_q():
    # a_theory = 1.5 - 1/2 + 1/4 = 1.25; log-power targets 0, 0.5, 1
    _rate_case(5, "rate for p < q (d=2, p=2, q=4, r=(1.5,1.5))",
               2.0, 4.0, (1.5, 1.5), (1.0, 2.0, math.inf), 0.35, 300)


def test_criterion_06_rate_diagonal():
    _rate_case(6, "rate on the diagonal (d=2, p=q=2.5, r=(1,1))",
               2.5, 2.5, (1.0, 1.0), (1.0, 2.0, math.inf), 0.35, 300)


def test_criterion_07_univariate_control():
    # with one variable the log power must vanish for every theta
    params = SmoothParams((1.5,))
    with criterion(7, "univariate control: fitted log-power is zero", 60):
        for theta in (1.0, 2.0, math.inf):
            rows = sweep_extremal(2.0, 4.0, theta, params, "gamma", range(5, 12))
            a_th, b_th = theory_exponents(2.0, 4.0, theta, params, "gamma")
            assert b_th == 0.0
            fit = fit_rates(rows, "slope-fixed", a_th, b_th)
            assert abs(fit.b_hat) <= 0.2, (theta, fit.b_hat)


def test_criterion_08_tail_sum_ratios():
    cases = [
        ("gamma-on-gamma", SmoothParams((1.0, 1.0))),
        ("gamma-on-gamma", SmoothParams((1.0, 1.0, 1.0))),
        ("gamma-prime-on-gamma", SmoothParams((1.0, 4.0), gamma_prime=(1.0, 2.0))),
        ("gamma-prime-on-gamma", SmoothParams((1.0, 1.0, 4.0), gamma_prime=(1.0, 1.0, 2.0))),
    ]
    with criterion(8, "weighted tail sums track their predicted order", 30):
        for mode, params in cases:
            for alpha in (0.5, 1.0, 2.0):
                out = weighted_tail_sums(alpha, params, range(10, 21), mode)
                ratios = [r for _, r in out]
                band = max(ratios) / min(ratios)
                assert band <= 1.1 / 0.9, (mode, params.r, alpha, band)


def test_criterion_09_family_embedding(tmp_path):
    with criterion(9, "shifted-rectangle family stays inside the class", 180):
        cfg = ExperimentConfig(theorem_tag="T5-family", d=2, r=(1.0, 1.0),
                               n_range=(6, 8, 10, 12), samples=100, rng_seed=12,
                               output_path=str(tmp_path / "fam"))
        out = run_experiment(cfg)
        summary = out["summary"]
        chain_c = []
        for n in (6, 8, 10, 12):
            shell, l2sq, b11 = summary["const"][n]
            assert abs(l2sq - shell) <= 1e-12 * shell  # exact orthogonality count
            chain_c.append(b11 / l2sq)
        assert min(chain_c) >= 0.9  # block-sum norm dominates the squared L2 norm
        assert max(chain_c) / min(chain_c) <= 1.1  # with an n-stable constant
        for theta in (1.0, 2.0, math.inf):
            # variation across levels is measured on the per-level family
            # norm (the mean over members); the scatter between random
            # members inside one level is not n-variation
            means = [summary["norm_range"][(n, theta)][2] for n in (6, 8, 10, 12)]
            factor = max(means) / min(means)
            print(f"    theta={theta}: class-norm level factor across n = {factor:.3f}")
            assert factor <= 2.0, (theta, factor)
            assert all(m > 0 for m in means)


def test_criterion_10_entropy_chain(tmp_path):
    with criterion(10, "covering/packing chain on random clouds", 60):
        rng = np.random.default_rng(44)
        for _ in range(50):
            m = int(rng.integers(3, 13))
            dim = int(rng.integers(1, 5))
            cloud = CloudProblem(rng.standard_normal((m, dim)))
            dist = cloud.distance_matrix()
            eps = float(np.quantile(dist[np.triu_indices(m, k=1)], rng.uniform(0.2, 0.8)))
            n_eps = covering_number_exact(cloud, eps)
            m_eps = packing_number_exact(cloud, eps)
            n_half = covering_number_exact(cloud, eps / 2)
            assert n_eps <= m_eps <= n_half
            assert covering_number_greedy(cloud, eps)[0] >= n_eps
            assert packing_number_greedy(cloud, eps)[0] <= m_eps


def test_criterion_11_deterministic_outputs(tmp_path):
    with criterion(11, "byte-identical CSV bodies for a fixed seed", 60):
        def make(path):
            cfg = ExperimentConfig(theorem_tag="T1", d=2, p=2.0, q=4.0,
                                   theta=2.0, r=(1.5, 1.5), gamma_mode="gamma",
                                   n_range=(5, 9), rng_seed=99, output_path=path)
            return run_experiment(cfg)
        out1 = make(str(tmp_path / "run1"))
        out2 = make(str(tmp_path / "run2"))
        assert csv_body(out1["csv"]) == csv_body(out2["csv"])
        assert csv_body(out1["json"]).strip() != ""
