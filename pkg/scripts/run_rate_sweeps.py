#!/usr/bin/env python3
"""Run the three headline rate experiments and print the fitted log powers.

Writes CSV tables and JSON fit reports under results/ (override with --out).
"""

import argparse
import json
import math
from pathlib import Path

from stepcross.experiments import ExperimentConfig, run_experiment


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results/rates")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n-min", type=int, default=5)
    ap.add_argument("--n-max", type=int, default=11)
    args = ap.parse_args()

    cases = []
    for theta in (1.0, 2.0, math.inf):
        tag = "inf" if math.isinf(theta) else f"{theta:g}"
        cases.append((f"T1_theta{tag}", dict(theorem_tag="T1", d=2, p=2.0, q=4.0,
                                             theta=theta, r=(1.5, 1.5))))
        cases.append((f"T2_theta{tag}", dict(theorem_tag="T2", d=2, p=2.5, q=2.5,
                                             theta=theta, r=(1.0, 1.0))))
        cases.append((f"d1_theta{tag}", dict(theorem_tag="T1", d=1, p=2.0, q=4.0,
                                             theta=theta, r=(1.5,))))

    for name, kw in cases:
        cfg = ExperimentConfig(gamma_mode="gamma", n_range=(args.n_min, args.n_max),
                               rng_seed=args.seed, output_path=str(Path(args.out) / name),
                               **kw)
        out = run_experiment(cfg)
        fit = out["fit"]
        print(f"{name}: a={fit.a_theory:g} b_theory={fit.b_theory:+.2f} "
              f"b_hat={fit.b_hat:+.3f} resid={fit.residual_rms:.4f} -> {out['csv']}")


if __name__ == "__main__":
    main()
