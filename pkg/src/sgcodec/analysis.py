"""Entropy lab and experiment harness: closed-form entropy quantities,
tiny-size exact oracles (typical-set counts, graph-ensemble entropy), and
deterministic trend experiments with CSV output."""

import hashlib
import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from .codec import encode, normalized_rate_graphon, normalized_rate_lwc, parse_policy
from .errors import BudgetExceededError, ConfigError, SgcError
from .graph import Graph, split
from .graphon import (
    BlockGraphon,
    LatentStream,
    delta2_identity,
    delta2_upper,
    load_graphon,
    nominal_edges,
    sample_w_random,
)
from .heavy import fitted_graphons, schedule
from .lsfit import ls_heuristic
from .rooted import empirical_local_dist, lp_distance_exact

EXPERIMENTS = (
    "density-convergence",
    "ls-consistency",
    "codec-rate-graphon",
    "codec-rate-lwc",
    "fitted-gap",
)


def s_of_d(d: float) -> float:
    """d/2 - (d/2) log d, the maximal second-order rate at average degree d;
    s(0) = 0."""
    if d < 0:
        raise SgcError("need d >= 0")
    if d == 0:
        return 0.0
    return d / 2 - (d / 2) * math.log(d)


def binary_entropy(x: float) -> float:
    """Natural-base binary entropy, endpoints 0."""
    if not 0 <= x <= 1:
        raise SgcError("binary entropy needs x in [0, 1]")
    if x in (0.0, 1.0):
        return 0.0
    return -x * math.log(x) - (1 - x) * math.log(1 - x)


def er_entropy_gap(rho: float) -> float:
    """(H(G) - mbar log(1/rho))/mbar for the constant graphon, any n.

    H = C(n,2) H_b(rho) exactly (latents are irrelevant when W is constant),
    so the value collapses to H_b(rho)/rho - log(1/rho), increasing to 1 as
    rho drops to 0.
    """
    if not 0 < rho < 1:
        raise SgcError("rho must lie in (0, 1)")
    return binary_entropy(rho) / rho - math.log(1 / rho)


def count_typical(n: int, m: int, target, eps: float) -> int:
    """Brute-force count of m-edge graphs on [n] whose full rooted-class
    empirical distribution is within eps of the target (strict inequality),
    in the exact Levy-Prokhorov metric.  Capped at n <= 8."""
    if n > 8:
        raise BudgetExceededError("typical-set counting capped at n <= 8")
    if n < 1:
        raise SgcError("need n >= 1")
    eps_frac = Fraction(eps)
    cells = [(i, j) for i in range(n) for j in range(i + 1, n)]
    count = 0
    for chosen in combinations(range(len(cells)), m):
        g = Graph(n, [cells[c] for c in chosen])
        u = empirical_local_dist(g, None)
        if lp_distance_exact(u, target) < eps_frac:
            count += 1
    return count


def h_exact_tiny(w: BlockGraphon, rho: float, n: int) -> float:
    """Exact entropy (nats) of the n-vertex random graph generated from a
    block graphon at target density rho, by full marginalization over the
    k^n latent assignments and all 2^C(n,2) graphs.  Capped at k <= 3,
    n <= 5."""
    if w.k > 3 or n > 5:
        raise BudgetExceededError("exact entropy oracle capped at k <= 3, n <= 5")
    if rho < 0:
        raise SgcError("need rho >= 0")
    if n < 1:
        raise SgcError("need n >= 1")
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    npairs = len(pairs)
    assigns = list(product(range(w.k), repeat=n))
    a_weights = np.array(
        [math.prod(w.p[c] for c in a) for a in assigns]
    )
    probs = np.empty((len(assigns), npairs))
    for ai, a in enumerate(assigns):
        for pi, (i, j) in enumerate(pairs):
            probs[ai, pi] = min(1.0, rho * w.B[a[i], a[j]])
    masks = np.array(
        [[(mask >> pi) & 1 for pi in range(npairs)] for mask in range(1 << npairs)],
        dtype=bool,
    )
    # P(G | assignment) for every graph x assignment, then mix
    pg = np.ones((len(assigns), len(masks)))
    for pi in range(npairs):
        col = np.where(masks[:, pi], probs[:, pi][:, None], 1 - probs[:, pi][:, None])
        pg *= col
    mixture = a_weights @ pg
    mixture = mixture[mixture > 0]
    return float(-(mixture * np.log(mixture)).sum())


# ---------------------------------------------------------------------------
# trend experiments


@dataclass
class TrendSeries:
    experiment: str
    grid: tuple  # strictly increasing parameter values (n)
    values: tuple  # measured statistic per grid point
    extras: dict  # optional named companion columns
    metadata: dict

    def inversions(self) -> int:
        return sum(
            1 for a, b in zip(self.values, self.values[1:]) if b > a + 1e-12
        )

    def to_csv(self, path: str) -> str:
        """Write the series; returns the JSON sidecar path."""
        cols = ["param", "value"] + sorted(self.extras)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(",".join(cols) + "\n")
            for idx, (p, v) in enumerate(zip(self.grid, self.values)):
                row = [repr(p), repr(v)] + [
                    repr(self.extras[c][idx]) for c in sorted(self.extras)
                ]
                f.write(",".join(row) + "\n")
        sidecar = f"{path}.meta.json"
        with open(sidecar, "w", encoding="utf-8") as f:
            json.dump(self.metadata, f, indent=2, sort_keys=True)
        return sidecar


def _rho_at(rho_rule, n: int) -> float:
    if isinstance(rho_rule, (int, float)):
        return float(rho_rule)
    if isinstance(rho_rule, str):
        if rho_rule.startswith("pow:"):
            return float(n) ** float(rho_rule.split(":", 1)[1])
        if rho_rule.startswith("deg:"):
            # fixed expected average degree d: rho = d/n
            return float(rho_rule.split(":", 1)[1]) / n
    raise ConfigError(f"cannot interpret rho rule {rho_rule!r}")


def _beta_at(beta_rule, n: int, rho: float, m: int) -> float:
    if beta_rule == "regime":
        # grows without bound with beta^2 log beta = o(n rho)
        return max(2.0, (n * rho) ** (1.0 / 3.0))
    if beta_rule == "eq21":
        return schedule(max(m, 1), n).beta
    if isinstance(beta_rule, (int, float)):
        return float(beta_rule)
    raise ConfigError(f"cannot interpret beta rule {beta_rule!r}")


def _content_hash(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()


def run_trend(experiment: str, config: dict) -> TrendSeries:
    """Run one deterministic trend experiment.

    config keys: graphon (spec dict or path), seed (int), n_grid (increasing
    ints), rho (number | 'pow:<e>' | 'deg:<d>'), policy (text), beta_rule
    ('regime' | 'eq21' | number), effort (int), lwc_mode.
    """
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {experiment!r}")
    if "graphon" not in config or "n_grid" not in config:
        raise ConfigError("config needs 'graphon' and 'n_grid'")
    w = load_graphon(config["graphon"])
    grid = [int(x) for x in config["n_grid"]]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("n_grid must be strictly increasing")
    seed = int(config.get("seed", 0))
    rho_rule = config.get("rho", "pow:-0.5")
    policy = parse_policy(config.get("policy", "an:log"))
    beta_rule = config.get("beta_rule", "regime")
    effort = int(config.get("effort", 2))
    lwc_mode = config.get("lwc_mode", "auto")

    stream = LatentStream(seed)

    def run_point(n: int):
        rho = _rho_at(rho_rule, n)
        g = sample_w_random(w, n, rho, stream)
        mbar = nominal_edges(n, rho)
        if experiment == "density-convergence":
            return abs(g.m / mbar - 1.0), {}
        if experiment == "ls-consistency":
            beta = _beta_at(beta_rule, n, rho, g.m)
            fit = ls_heuristic(g, beta, seed=0)
            w_hat = BlockGraphon(np.array(fit.class_sizes, float) / n, fit.B / rho)
            return delta2_upper(w_hat, w, effort=effort), {"beta": beta}
        if experiment in ("codec-rate-graphon", "codec-rate-lwc"):
            data, rep = encode(g, policy, lwc_mode=lwc_mode)
            if experiment == "codec-rate-graphon":
                val = normalized_rate_graphon(rep, rho)
            else:
                val = normalized_rate_lwc(rep)
            return val, {"bytes": len(data)}
        # fitted-gap
        from .codec import choose_delta

        sr = split(g, choose_delta(policy, n))
        if sr.heavy.m < 1:
            return 0.0, {"optimal_coupling": 0.0}
        sched = schedule(sr.heavy.m, n)
        fit = ls_heuristic(g, sched.beta, seed=0)
        w_hat, w_hat_star = fitted_graphons(fit, sr)
        scaled = BlockGraphon(w_hat.p, w_hat.B / rho)
        scaled_star = BlockGraphon(w_hat_star.p, w_hat_star.B / rho)
        return (
            delta2_identity(scaled, scaled_star),
            {"optimal_coupling": delta2_upper(scaled, scaled_star, effort=effort)},
        )

    workers = max(1, int(os.environ.get("SGC_THREADS", "1")))
    if workers > 1 and len(grid) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=min(workers, len(grid))) as pool:
            results = list(pool.map(run_point, grid))
    else:
        results = [run_point(n) for n in grid]

    values = [v for v, _ in results]
    extras: dict[str, list] = {}
    for _, ex in results:
        for key, val in ex.items():
            extras.setdefault(key, []).append(val)

    meta = {
        "experiment": experiment,
        "config": {k: config[k] for k in sorted(config)},
        "content_hash": _content_hash({"experiment": experiment, "config": config}),
    }
    return TrendSeries(
        experiment=experiment,
        grid=tuple(grid),
        values=tuple(values),
        extras={k: list(v) for k, v in extras.items()},
        metadata=meta,
    )
