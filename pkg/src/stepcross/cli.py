"""Command-line interface.

Exit codes: 0 success, 1 invalid configuration or arguments (the message
names the violated condition), 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .approx import approx_result
from .blocks import GAMMA_MODES, SmoothParams, hyperbolic_cross, weighted_tail_sums, write_blocks
from .entropy import (CloudProblem, covering_number_exact, covering_number_greedy,
                      entropy_number_estimate, packing_number_exact, packing_number_greedy)
from .experiments import ExperimentConfig, run_experiment, write_csv
from .extremal import (ExtremalSpec, class_scale, dirichlet_shell, shell_extremal,
                       shifted_rect_sample)
from .kernels import vdp_coeff
from .norms import NormSpec, besov_norm_spec, bq1_norm, difference_seminorm, lp_norm
from .poly import GridSpec, TrigPoly, eval_grid, project_cross, read_jsonl, write_jsonl
from .rates import theory_exponents


def _parse_float(text: str) -> float:
    return math.inf if text.lower() in ("inf", "infinity") else float(text)


def _parse_rvec(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split(","))


def _norm_callable(spec: dict):
    kind = spec.get("kind", "lp")
    grid_spec = GridSpec(**spec.get("grid", {}))
    if kind == "lp":
        p = _parse_float(str(spec["p"]))
        return lambda f: lp_norm(f, p, grid_spec)
    if kind == "besov":
        params = SmoothParams(spec["r"])
        ns = NormSpec(p=_parse_float(str(spec["p"])),
                      theta=_parse_float(str(spec.get("theta", "inf"))),
                      form=spec.get("form", "sharp"), grid=grid_spec)
        return lambda f: besov_norm_spec(f, params, ns)
    if kind == "bq1":
        q = _parse_float(str(spec["q"]))
        form = spec.get("form", "smooth" if q in (1.0, math.inf) else "sharp")
        return lambda f: bq1_norm(f, q, form, grid_spec)
    if kind == "hrp":
        params = SmoothParams(spec["r"])
        order = tuple(int(x) for x in spec["order"])
        p = _parse_float(str(spec.get("p", 2)))
        return lambda f: difference_seminorm(f, params, order, p,
                                             int(spec.get("h_points", 64)), grid_spec)
    raise ValueError(f"unknown norm kind {kind!r}")


PLOT_SCRIPT = """\
#!/usr/bin/env python
\"\"\"Plot a rate-sweep CSV (columns n, M, error, predicted, ratio).\"\"\"
import sys
import matplotlib.pyplot as plt
import numpy as np

rows = [line.split(",") for line in open(sys.argv[1])
        if line.strip() and not line.startswith(("#", "n,"))]
n = np.array([float(r[0]) for r in rows])
err = np.array([float(r[2]) for r in rows])
pred = np.array([float(r[3]) for r in rows])
plt.semilogy(n, err, "o-", label="measured", base=2)
plt.semilogy(n, pred * err[0] / pred[0], "--", label="predicted order", base=2)
plt.xlabel("n"); plt.ylabel("error"); plt.legend(); plt.tight_layout()
plt.savefig(sys.argv[1].rsplit(".", 1)[0] + ".png", dpi=150)
"""


def cmd_poly(args) -> int:
    f = read_jsonl(args.input)
    if args.action == "eval":
        if args.at:
            x = [float(tok) for tok in args.at.split(",")]
            v = f.evaluate(x)
            print(f"{v.real:.17g} {v.imag:+.17g}j")
            return 0
        dims = (args.points,) * f.d if args.points else None
        vals = eval_grid(f, dims if dims else GridSpec(oversampling=args.oversampling))
        out = Path(args.out or "values.csv")
        with open(out, "w") as fh:
            fh.write(",".join(f"j{i+1}" for i in range(f.d)) + ",re,im\n")
            for idx in np.ndindex(vals.shape):
                v = vals[idx]
                fh.write(",".join(str(i) for i in idx) + f",{v.real:.17g},{v.imag:.17g}\n")
        print(out)
        return 0
    params = SmoothParams(_parse_rvec(args.r))
    cross = hyperbolic_cross(args.n, params, args.gamma_mode)
    g = project_cross(f, cross)
    write_jsonl(args.out or "projected.jsonl", g)
    print(args.out or "projected.jsonl")
    return 0


def cmd_kernel(args) -> int:
    rows = [(k, vdp_coeff(args.l, k)) for k in range(-2 * args.l, 2 * args.l + 1)]
    out = args.out
    if out:
        with open(out, "w") as fh:
            fh.write("k,coeff\n")
            for k, c in rows:
                fh.write(f"{k},{c:.17g}\n")
        print(out)
    else:
        print("k,coeff")
        for k, c in rows:
            print(f"{k},{c:.17g}")
    return 0


def cmd_norm(args) -> int:
    spec = json.loads(args.spec)
    fn = _norm_callable(spec)
    if args.batch:
        rows = [(Path(p).stem, fn(read_jsonl(p))) for p in args.batch]
        out = args.out or "norms.csv"
        with open(out, "w") as fh:
            fh.write("id,norm\n")
            for name, v in rows:
                fh.write(f"{name},{v:.17g}\n")
        print(out)
    else:
        print(f"{fn(read_jsonl(args.input)):.17g}")
    return 0


def cmd_approx(args) -> int:
    params = SmoothParams(_parse_rvec(args.r))
    theta = _parse_float(args.theta)
    p, q = _parse_float(args.p), _parse_float(args.q)
    a_th, b_th = theory_exponents(p, q, theta, params, args.gamma_mode)
    rows = []
    for n in range(args.n_min, args.n_max + 1):
        member = shell_extremal(ExtremalSpec(n=n, d=params.d, r1=params.r1, p=p, theta=theta))
        res = approx_result(member, n, params, args.gamma_mode, q)
        rows.append((n, res.cross_cardinality, res.error_fourier_sum, res.error_best_upper,
                     2.0 ** (-a_th * n) * n**b_th))
    config = ExperimentConfig(theorem_tag="T1" if p < q else "T2", d=params.d, p=p, q=q,
                              theta=theta, r=params.r, gamma_mode=args.gamma_mode,
                              n_range=(args.n_min, args.n_max), rng_seed=args.seed,
                              output_path=str(Path(args.out).parent))
    write_csv(args.out, config, ("n", "M", "script_E", "best_ub", "predicted_order"), rows)
    print(args.out)
    return 0


def cmd_extremal(args) -> int:
    if args.family == "dn":
        f = dirichlet_shell(args.n, args.d)
    elif args.family == "g":
        f = shell_extremal(ExtremalSpec(n=args.n, d=args.d, r1=args.r1,
                                        p=_parse_float(args.p), theta=_parse_float(args.theta),
                                        c4=args.c4))
    else:
        f = shifted_rect_sample(args.n, args.d, args.mode, args.seed)
        if args.scaled:
            f = class_scale(args.n, args.d, args.r1, _parse_float(args.theta)) * f
    write_jsonl(args.out, f)
    print(args.out)
    return 0


def cmd_rates(args) -> int:
    config = ExperimentConfig.load(args.config)
    if args.seed is not None:
        config = ExperimentConfig.from_json_dict({**config.to_json_dict(), "rng_seed": args.seed})
    if args.out is not None:
        config = ExperimentConfig.from_json_dict({**config.to_json_dict(), "output_path": args.out})
    result = run_experiment(config)
    if args.emit_plot_script:
        script = Path(config.output_path) / "plot_rates.py"
        script.write_text(PLOT_SCRIPT)
        result["plot_script"] = str(script)
    print(json.dumps({k: v for k, v in result.items() if isinstance(v, (str, bool, float, int))},
                     indent=2, sort_keys=True))
    return 0


def _read_cloud(path) -> CloudProblem:
    with open(path) as fh:
        header = json.loads(fh.readline())
        pts = [json.loads(line)["v"] for line in fh if line.strip()]
    return CloudProblem(pts, p=_parse_float(str(header.get("p", 2.0))))


def cmd_entropy(args) -> int:
    cloud = _read_cloud(args.cloud)
    if args.k is not None:
        print(f"{entropy_number_estimate(cloud, args.k):.17g}")
        return 0
    if args.eps is None:
        raise ValueError("need --eps or --k")
    n_ub, _ = covering_number_greedy(cloud, args.eps)
    m_lb, _ = packing_number_greedy(cloud, args.eps)
    out = {"greedy_covering_ub": n_ub, "greedy_packing_lb": m_lb,
           "H_eps_ub": math.log2(n_ub)}
    if args.exact and len(cloud) <= 12:
        out["covering_exact"] = covering_number_exact(cloud, args.eps)
        out["packing_exact"] = packing_number_exact(cloud, args.eps)
    print(json.dumps(out, sort_keys=True))
    return 0


def cmd_lemma_a(args) -> int:
    params = SmoothParams(_parse_rvec(args.r))
    ls = list(range(args.l_min, args.l_max + 1))
    modes = ("gamma-on-gamma", "gamma-prime-on-gamma") if args.mode == "both" else (args.mode,)
    rows = []
    for mode in modes:
        for (value, ratio), l in zip(weighted_tail_sums(args.alpha, params, ls, mode), ls):
            rows.append((mode, args.alpha, l, value, ratio))
    if args.out:
        config = ExperimentConfig(theorem_tag="lemmaA", d=params.d, r=params.r,
                                  alpha=args.alpha, l_range=(args.l_min, args.l_max),
                                  rng_seed=args.seed, output_path=str(Path(args.out).parent))
        write_csv(args.out, config, ("mode", "alpha", "l", "value", "normalized_ratio"), rows)
        print(args.out)
    else:
        for row in rows:
            print(f"{row[0]},{row[1]},{row[2]},{row[3]:.17g},{row[4]:.17g}")
    return 0


def cmd_cross(args) -> int:
    params = SmoothParams(_parse_rvec(args.r))
    cross = hyperbolic_cross(args.n, params, args.gamma_mode)
    if args.out:
        write_blocks(args.out, cross)
        print(args.out)
    else:
        for s in cross:
            print(" ".join(str(x) for x in s))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stepcross",
                                 description="step hyperbolic cross approximation toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p_poly = sub.add_parser("poly", help="evaluate or project a polynomial file")
    p_poly.add_argument("action", choices=("eval", "project"))
    p_poly.add_argument("--input", required=True)
    p_poly.add_argument("--at", help="comma separated point for direct evaluation")
    p_poly.add_argument("--points", type=int, help="uniform grid points per dimension")
    p_poly.add_argument("--oversampling", type=float, default=4.0)
    p_poly.add_argument("--n", type=float, help="cross level (project)")
    p_poly.add_argument("--r", default="1", help="smoothness vector, comma separated (project)")
    p_poly.add_argument("--gamma-mode", choices=GAMMA_MODES, default="gamma")
    p_poly.add_argument("--out")
    p_poly.set_defaults(func=cmd_poly)

    p_kernel = sub.add_parser("kernel", help="dump a kernel coefficient profile")
    p_kernel.add_argument("action", choices=("coeffs",))
    p_kernel.add_argument("--l", type=int, required=True)
    p_kernel.add_argument("--out")
    p_kernel.set_defaults(func=cmd_kernel)

    p_norm = sub.add_parser("norm", help="evaluate a norm on polynomial files")
    p_norm.add_argument("--spec", required=True, help="JSON norm spec")
    p_norm.add_argument("--input")
    p_norm.add_argument("--batch", nargs="+")
    p_norm.add_argument("--out")
    p_norm.set_defaults(func=cmd_norm)

    p_approx = sub.add_parser("approx", help="error sweep for the extremal family")
    p_approx.add_argument("action", choices=("sweep",))
    p_approx.add_argument("--n-min", type=int, required=True)
    p_approx.add_argument("--n-max", type=int, required=True)
    p_approx.add_argument("--p", required=True)
    p_approx.add_argument("--q", required=True)
    p_approx.add_argument("--theta", default="inf")
    p_approx.add_argument("--r", required=True)
    p_approx.add_argument("--gamma-mode", choices=GAMMA_MODES, default="gamma")
    p_approx.add_argument("--seed", type=int, default=0)
    p_approx.add_argument("--out", required=True)
    p_approx.set_defaults(func=cmd_approx)

    p_ext = sub.add_parser("extremal", help="generate a test-family member")
    p_ext.add_argument("action", choices=("gen",))
    p_ext.add_argument("--family", choices=("dn", "g", "tprime"), required=True)
    p_ext.add_argument("--n", type=int, required=True)
    p_ext.add_argument("--d", type=int, required=True)
    p_ext.add_argument("--r1", type=float, default=1.0)
    p_ext.add_argument("--p", default="2")
    p_ext.add_argument("--theta", default="inf")
    p_ext.add_argument("--c4", type=float, default=1.0)
    p_ext.add_argument("--mode", choices=("constant", "random-sign"), default="constant")
    p_ext.add_argument("--scaled", action="store_true")
    p_ext.add_argument("--seed", type=int, default=0)
    p_ext.add_argument("--out", required=True)
    p_ext.set_defaults(func=cmd_extremal)

    p_rates = sub.add_parser("rates", help="run a configured experiment")
    p_rates.add_argument("action", choices=("run",))
    p_rates.add_argument("--config", required=True)
    p_rates.add_argument("--seed", type=int)
    p_rates.add_argument("--out")
    p_rates.add_argument("--emit-plot-script", action="store_true")
    p_rates.set_defaults(func=cmd_rates)

    p_ent = sub.add_parser("entropy", help="covering/packing numbers of a cloud")
    p_ent.add_argument("--cloud", required=True)
    p_ent.add_argument("--eps", type=float)
    p_ent.add_argument("--k", type=int)
    p_ent.add_argument("--exact", action="store_true")
    p_ent.set_defaults(func=cmd_entropy)

    p_lem = sub.add_parser("lemma-a", help="weighted tail-sum ratio table")
    p_lem.add_argument("--alpha", type=float, required=True)
    p_lem.add_argument("--r", required=True)
    p_lem.add_argument("--l-min", type=int, default=10)
    p_lem.add_argument("--l-max", type=int, default=20)
    p_lem.add_argument("--mode", choices=("gamma-on-gamma", "gamma-prime-on-gamma", "both"),
                       default="both")
    p_lem.add_argument("--seed", type=int, default=0)
    p_lem.add_argument("--out")
    p_lem.set_defaults(func=cmd_lemma_a)

    p_cross = sub.add_parser("cross", help="dump the blocks of a hyperbolic cross")
    p_cross.add_argument("--n", type=float, required=True)
    p_cross.add_argument("--r", required=True)
    p_cross.add_argument("--gamma-mode", choices=GAMMA_MODES, default="gamma")
    p_cross.add_argument("--out")
    p_cross.set_defaults(func=cmd_cross)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime failure
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
