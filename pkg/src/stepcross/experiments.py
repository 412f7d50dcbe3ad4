"""Experiment configurations, provenance-stamped CSV/JSON outputs, and the
dispatcher that runs one named experiment end to end.

Output files start with '#'-prefixed provenance lines (config hash, seed,
version, timestamp); everything after those lines is deterministic given the
configuration and seed.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .approx import projector_norm_probe, random_mixed_poly
from .blocks import SmoothParams, even_shell, hyperbolic_cross, weighted_tail_sums
from .entropy import (CloudProblem, covering_number_exact, covering_number_greedy,
                      packing_number_exact, packing_number_greedy)
from .extremal import class_scale, shifted_rect_sample
from .norms import (GridSpec, _block_norms, aggregate_block_norms, besov_mixed_norm,
                    bq1_norm, lp_norm, nikolskii_check)
from .rates import (RateFit, fit_rates, predicted_order, sweep_extremal,
                    theory_exponents, validate_hypotheses)

THEOREM_TAGS = ("T1", "T2", "T3", "T4", "T5-family", "lemmaA", "nikolskii", "entropy44")
SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Invalid experiment configuration; the message names the violation."""


def _parse_extended(x):
    if isinstance(x, str):
        if x.lower() in ("inf", "infinity"):
            return math.inf
        return float(x)
    return float(x)


@dataclass(frozen=True)
class ExperimentConfig:
    theorem_tag: str
    d: int = 2
    p: float = 2.0
    q: float = 2.0
    theta: float = math.inf
    r: tuple[float, ...] = (1.0, 1.0)
    gamma_mode: str = "gamma"
    n_range: tuple[int, ...] = (5, 11)
    rng_seed: int = 0
    output_path: str = "results"
    alpha: float = 1.0
    l_range: tuple[int, ...] = (10, 20)
    samples: int = 100
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        if self.theorem_tag not in THEOREM_TAGS:
            raise ConfigError(f"unknown theorem tag {self.theorem_tag!r}")
        if self.schema_version != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema version {self.schema_version}")
        if len(self.r) != self.d:
            raise ConfigError("smoothness vector length must equal d")
        try:
            params = SmoothParams(self.r)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if self.theorem_tag in ("T1", "T2", "T3", "T4"):
            try:
                validate_hypotheses(self.p, self.q, self.theta, params, self.gamma_mode)
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
            tag_ok = {
                "T1": 1 < self.p < self.q < math.inf,
                "T2": self.p == self.q and (1 < self.p < math.inf or self.d == 1),
                "T3": self.p == self.q and self.p in (1.0, math.inf),
                "T4": self.q < self.p,
            }[self.theorem_tag]
            if not tag_ok:
                raise ConfigError(
                    f"(p, q) = ({self.p}, {self.q}) does not match regime {self.theorem_tag}")
        if self.theorem_tag == "T5-family" and any(n % 2 for n in self.n_range):
            raise ConfigError("T5-family needs even shell levels")

    @property
    def params(self) -> SmoothParams:
        return SmoothParams(self.r)

    def to_json_dict(self) -> dict:
        out = dataclasses.asdict(self)
        for key in ("p", "q", "theta", "alpha"):
            if math.isinf(out[key]):
                out[key] = "inf"
        return out

    @staticmethod
    def from_json_dict(data: dict) -> "ExperimentConfig":
        data = dict(data)
        for key in ("p", "q", "theta", "alpha"):
            if key in data:
                data[key] = _parse_extended(data[key])
        for key in ("r", "n_range", "l_range"):
            if key in data:
                data[key] = tuple(data[key])
        unknown = set(data) - {f.name for f in dataclasses.fields(ExperimentConfig)}
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        return ExperimentConfig(**data)

    @staticmethod
    def load(path) -> "ExperimentConfig":
        with open(path) as fh:
            return ExperimentConfig.from_json_dict(json.load(fh))

    def config_hash(self) -> str:
        canon = json.dumps(self.to_json_dict(), sort_keys=True)
        return hashlib.sha256(canon.encode()).hexdigest()[:12]


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def write_csv(path, config: ExperimentConfig, columns: Sequence[str],
              rows: Sequence[Sequence]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write(f"# config_hash: {config.config_hash()}\n")
        fh.write(f"# seed: {config.rng_seed}\n")
        fh.write(f"# version: {__version__}\n")
        fh.write(f"# timestamp: {time.strftime('%Y-%m-%dT%H:%M:%S')}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def csv_body(path) -> str:
    """File content with provenance comment lines stripped."""
    with open(path) as fh:
        return "".join(line for line in fh if not line.startswith("#"))


def _fit_report_dict(fit: RateFit) -> dict:
    return dataclasses.asdict(fit)


def run_rate_experiment(config: ExperimentConfig) -> dict:
    params = config.params
    ns = list(range(config.n_range[0], config.n_range[-1] + 1))
    rows = sweep_extremal(config.p, config.q, config.theta, params, config.gamma_mode, ns)
    a_th, b_th = theory_exponents(config.p, config.q, config.theta, params, config.gamma_mode)
    table = []
    for r in rows:
        pred = predicted_order(r.n, a_th, b_th)
        table.append((r.n, r.cardinality, r.error, pred, r.error / pred))
    fit_free = fit_rates(rows, "free", a_th, b_th)
    fit_fixed = fit_rates(rows, "slope-fixed", a_th, b_th)
    out_dir = Path(config.output_path)
    csv_path = out_dir / f"{config.theorem_tag}_rates.csv"
    write_csv(csv_path, config, ("n", "M", "error", "predicted", "ratio"), table)
    report = {
        "config": config.to_json_dict(),
        "config_hash": config.config_hash(),
        "free": _fit_report_dict(fit_free),
        "slope_fixed": _fit_report_dict(fit_fixed),
    }
    json_path = out_dir / f"{config.theorem_tag}_fit.json"
    with open(json_path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
    return {"csv": str(csv_path), "json": str(json_path), "fit": fit_fixed}


def run_lemma_a(config: ExperimentConfig) -> dict:
    params = config.params
    ls = list(range(config.l_range[0], config.l_range[-1] + 1))
    rows = []
    for mode in ("gamma-on-gamma", "gamma-prime-on-gamma"):
        for (value, ratio), l in zip(weighted_tail_sums(config.alpha, params, ls, mode), ls):
            rows.append((mode, config.alpha, l, value, ratio))
    csv_path = Path(config.output_path) / "lemmaA_ratios.csv"
    write_csv(csv_path, config, ("mode", "alpha", "l", "value", "normalized_ratio"), rows)
    return {"csv": str(csv_path)}


def run_nikolskii(config: ExperimentConfig) -> dict:
    rng = np.random.default_rng(config.rng_seed)
    grid = GridSpec(self_check=False)
    pairs = ((1.0, 2.0), (2.0, 4.0), (2.0, math.inf))
    rows = []
    all_ok = True
    for i in range(config.samples):
        d = int(rng.integers(1, 4))
        f = random_mixed_poly(rng, d, max_shell={1: 5, 2: 7, 3: 6}[d])
        for p, q in pairs:
            lhs, rhs, ok = nikolskii_check(f, p, q, grid)
            all_ok = all_ok and ok
            rows.append((i, d, p, "inf" if math.isinf(q) else q, lhs, rhs, int(ok)))
    csv_path = Path(config.output_path) / "nikolskii.csv"
    write_csv(csv_path, config, ("id", "d", "p", "q", "lhs", "rhs", "ok"), rows)
    return {"csv": str(csv_path), "all_ok": all_ok}


def run_projector_probe(config: ExperimentConfig) -> dict:
    params = config.params
    rows = []
    worst = 0.0
    for n in range(config.n_range[0], config.n_range[-1] + 1):
        ratio = projector_norm_probe(n, params, config.q, config.samples,
                                     rng_seed=config.rng_seed, gamma_mode=config.gamma_mode)
        worst = max(worst, ratio)
        rows.append((n, config.q, ratio))
    csv_path = Path(config.output_path) / "projector_probe.csv"
    write_csv(csv_path, config, ("n", "q", "max_ratio"), rows)
    return {"csv": str(csv_path), "max_ratio": worst}


def run_family_embedding(config: ExperimentConfig) -> dict:
    """Scaled shifted-rectangle members: class-norm stability across levels
    plus the exact constant-mode chain through the block-sum norm."""
    params = config.params
    d, r1 = config.d, config.r[0]
    rng = np.random.default_rng(config.rng_seed)
    grid = GridSpec()
    thetas = (1.0, 2.0, math.inf)
    rows = []
    summary: dict = {"const": {}, "norm_range": {}}
    for n in config.n_range:
        shell = even_shell(n, d)
        t_const = shifted_rect_sample(n, d, "constant")
        l2_sq = lp_norm(t_const, 2.0) ** 2
        b11 = bq1_norm(t_const, 1.0, "smooth", grid)
        summary["const"][n] = (len(shell), l2_sq, b11)
        norms = {theta: [] for theta in thetas}
        for _ in range(config.samples):
            t = shifted_rect_sample(n, d, "random-sign", rng)
            # block sups are theta-independent; rescale and aggregate per theta
            bn = _block_norms(t, math.inf, "smooth", grid)
            for theta in thetas:
                scale = class_scale(n, d, r1, theta)
                scaled = [(s, scale * v) for s, v in bn]
                norms[theta].append(aggregate_block_norms(scaled, params.r, theta))
        for theta in thetas:
            vals = norms[theta]
            summary["norm_range"][(n, theta)] = (min(vals), max(vals), sum(vals) / len(vals))
            rows.append((n, len(shell), l2_sq, b11,
                         "inf" if math.isinf(theta) else theta,
                         min(vals), max(vals), sum(vals) / len(vals)))
    csv_path = Path(config.output_path) / "family_embedding.csv"
    write_csv(csv_path, config,
              ("n", "shell_size", "const_l2_sq", "const_b11", "theta",
               "norm_min", "norm_max", "norm_mean"), rows)
    return {"csv": str(csv_path), "summary": summary}


def run_entropy_chain(config: ExperimentConfig) -> dict:
    rng = np.random.default_rng(config.rng_seed)
    rows = []
    all_ok = True
    for i in range(config.samples):
        m = int(rng.integers(3, 13))
        dim = int(rng.integers(1, 5))
        cloud = CloudProblem(rng.standard_normal((m, dim)))
        dists = cloud.distance_matrix()
        eps = float(np.quantile(dists[np.triu_indices(m, k=1)], rng.uniform(0.2, 0.8)))
        n_eps = covering_number_exact(cloud, eps)
        m_eps = packing_number_exact(cloud, eps)
        n_half = covering_number_exact(cloud, eps / 2)
        n_ub, _ = covering_number_greedy(cloud, eps)
        m_lb, _ = packing_number_greedy(cloud, eps)
        ok = n_eps <= m_eps <= n_half and n_ub >= n_eps and m_lb <= m_eps
        all_ok = all_ok and ok
        rows.append((i, m, dim, eps, n_eps, m_eps, n_half, n_ub, m_lb, int(ok)))
    csv_path = Path(config.output_path) / "entropy_chain.csv"
    write_csv(csv_path, config,
              ("id", "points", "dim", "eps", "N_eps", "M_eps", "N_half_eps",
               "greedy_N_ub", "greedy_M_lb", "ok"), rows)
    return {"csv": str(csv_path), "all_ok": all_ok}


def run_experiment(config: ExperimentConfig) -> dict:
    if config.theorem_tag in ("T1", "T2", "T3", "T4"):
        return run_rate_experiment(config)
    if config.theorem_tag == "lemmaA":
        return run_lemma_a(config)
    if config.theorem_tag == "nikolskii":
        return run_nikolskii(config)
    if config.theorem_tag == "T5-family":
        return run_family_embedding(config)
    if config.theorem_tag == "entropy44":
        return run_entropy_chain(config)
    raise ConfigError(f"unknown theorem tag {config.theorem_tag!r}")
