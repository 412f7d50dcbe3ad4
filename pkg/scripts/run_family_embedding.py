#!/usr/bin/env python3
"""Class-membership experiment for the shifted-rectangle family.

For each even shell level the scaled members' class norms should sit in a
level-independent band; the constant-mode member satisfies the exact chain
squared-L2 = shell size = block-sum norm.
"""

import argparse
from pathlib import Path

from stepcross.experiments import ExperimentConfig, run_experiment


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results/family")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--samples", type=int, default=100)
    args = ap.parse_args()

    cfg = ExperimentConfig(theorem_tag="T5-family", d=2, r=(1.0, 1.0),
                           n_range=(6, 8, 10, 12), samples=args.samples,
                           rng_seed=args.seed, output_path=args.out)
    out = run_experiment(cfg)
    summary = out["summary"]
    for n, (shell, l2sq, b11) in summary["const"].items():
        print(f"n={n}: shell={shell} |t|_2^2={l2sq:.12g} block-sum={b11:.12g}")
    for (n, theta), (lo, hi, mean) in summary["norm_range"].items():
        print(f"n={n} theta={theta}: class norm in [{lo:.4f}, {hi:.4f}], mean {mean:.4f}")
    print("csv:", out["csv"])


if __name__ == "__main__":
    main()
