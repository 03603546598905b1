"""Monte Carlo orchestration: configuration, sweeps, aggregation, and the
analytic-vs-empirical comparison.

Replica streams come from a counter-based split of the master seed
(SeedSequence(seed, spawn_key=(run_id,))), so replicas are independent,
reproducible, and shared across grid cells: the same uniforms drive every
cell's run_id, which couples s0 variants monotonically.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import product

import numpy as np

from .analytics import (DiscreteDistribution, node_count_pmf, pinned_single_source_trace,
                        spread_pmf_horizon)
from .capacity import CapacityLaw, sequence_from_law
from .clock import ClockParams, poisson_pmf, truncation_index
from .errors import ConfigError
from .spreading import (BERNOULLI, PROPAGATION_MODES, TrajectoryRecord,
                        run_fixed_capacity_batch, run_trajectory)

MODES = ("simulate", "analytic", "compare")

_UINT64_MAX = 2**64 - 1


@dataclass(frozen=True)
class SimulationConfig:
    """One cell's run parameters; validated eagerly via `validate`."""

    tau: float
    n0: int = 1
    s0: int = 1
    rate: float = 1.0
    horizon: float | None = None
    max_nodes: int | None = 3000
    runs: int = 20
    seed: int = 0
    mode: str = "simulate"
    propagation_mode: str = BERNOULLI
    delete_old_edges: bool = False
    epsilon: float = 1e-10
    paper_faithful: bool = False

    def validate(self) -> "SimulationConfig":
        if not (isinstance(self.tau, (int, float)) and math.isfinite(self.tau)
                and self.tau > 1.0):
            raise ConfigError(f"tau must be finite and > 1, got {self.tau}")
        if not (1 <= self.s0 <= self.n0):
            raise ConfigError(f"need 1 <= s0 <= n0, got s0={self.s0}, n0={self.n0}")
        if self.runs < 1:
            raise ConfigError(f"runs must be >= 1, got {self.runs}")
        if self.max_nodes is None and self.horizon is None:
            raise ConfigError("set max_nodes and/or horizon to bound the run")
        if self.max_nodes is not None and self.max_nodes < self.n0:
            raise ConfigError(f"max_nodes {self.max_nodes} is below n0 {self.n0}")
        if self.horizon is not None and (not math.isfinite(self.horizon)
                                         or self.horizon < 0.0):
            raise ConfigError(f"horizon must be finite and >= 0, got {self.horizon}")
        if not (math.isfinite(self.rate) and self.rate > 0.0):
            raise ConfigError(f"rate must be finite and > 0, got {self.rate}")
        if not (0 <= self.seed <= _UINT64_MAX):
            raise ConfigError(f"seed must fit in 64 bits, got {self.seed}")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.propagation_mode not in PROPAGATION_MODES:
            raise ConfigError(
                f"propagation_mode must be one of {PROPAGATION_MODES}, "
                f"got {self.propagation_mode!r}")
        if not (0.0 < self.epsilon < 1.0):
            raise ConfigError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        return self

    def mean_steps(self) -> float:
        if self.horizon is None:
            return 0.0
        return self.rate * self.horizon


def replica_rng(seed: int, run_id: int) -> np.random.Generator:
    """Counter-based stream split: hash(seed, run_id) via SeedSequence."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(run_id,))))


@dataclass
class AggregateCurve:
    """Per-N mean holder ratio over runs, with counts and standard errors."""

    tau: float
    n0: int
    s0: int
    n_values: list = field(default_factory=list)
    mean_ratio: list = field(default_factory=list)
    count: list = field(default_factory=list)
    stderr: list = field(default_factory=list)

    def value_at(self, n_k: int) -> float:
        return self.mean_ratio[self.n_values.index(n_k)]


def aggregate_records(records) -> AggregateCurve:
    """Arithmetic mean of per-run ratios at each N_k (alignment is exact
    since N_k = n0 + k deterministically; clock-bounded runs may differ in
    length, hence the per-N counts)."""
    first = records[0]
    by_n: dict = {}
    for rec in records:
        for (_, n, s, _) in rec.steps:
            by_n.setdefault(n, []).append(s / n)
    curve = AggregateCurve(tau=first.tau, n0=first.n0, s0=first.s0)
    for n in sorted(by_n):
        ratios = by_n[n]
        mean = sum(ratios) / len(ratios)
        if len(ratios) > 1:
            var = sum((r - mean) ** 2 for r in ratios) / (len(ratios) - 1)
            se = math.sqrt(var / len(ratios))
        else:
            se = 0.0
        curve.n_values.append(n)
        curve.mean_ratio.append(mean)
        curve.count.append(len(ratios))
        curve.stderr.append(se)
    return curve


def _run_one(config: SimulationConfig, run_id: int) -> TrajectoryRecord:
    return run_trajectory(config, replica_rng(config.seed, run_id), run_id=run_id)


def run_cell(config: SimulationConfig, workers: int = 1):
    """All replicas of one cell, optionally across a process pool."""
    config.validate()
    run_ids = list(range(config.runs))
    if workers <= 1 or config.runs == 1:
        return [_run_one(config, rid) for rid in run_ids]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_one, [config] * len(run_ids), run_ids))


def format_param(value) -> str:
    """Filename-stable parameter rendering (1.5 -> '1.5', 10 -> '10')."""
    return format(value, "g")


def trajectories_filename(config: SimulationConfig) -> str:
    return (f"trajectories_{format_param(config.tau)}_"
            f"{format_param(config.n0)}_{format_param(config.s0)}.csv")


def aggregate_filename(config: SimulationConfig) -> str:
    return (f"aggregate_{format_param(config.tau)}_"
            f"{format_param(config.n0)}_{format_param(config.s0)}.csv")


def write_trajectories_csv(records, path) -> None:
    with open(path, "w") as fh:
        fh.write("run_id,k,N_k,S_k,ratio\n")
        for rec in sorted(records, key=lambda r: r.run_id):
            for row in rec.csv_rows():
                fh.write(row + "\n")


def write_aggregate_csv(curve: AggregateCurve, path) -> None:
    with open(path, "w") as fh:
        fh.write("N_k,mean_ratio,count,stderr\n")
        for n, m, c, se in zip(curve.n_values, curve.mean_ratio,
                               curve.count, curve.stderr):
            fh.write(f"{n},{m:.6f},{c},{se:.6f}\n")


def expand_grid(base: SimulationConfig, taus, n0s, s0s):
    """Cartesian product of the sweep axes over a shared base config."""
    return [replace(base, tau=t, n0=n, s0=s)
            for t, n, s in product(taus, n0s, s0s)]


def run_sweep(configs, out_dir, workers: int = 1):
    """Run every cell, emit raw + aggregate CSVs, and collect cell errors.

    Returns (curves, errors); errors are (config, message) pairs for cells
    that failed validation or blew up numerically. Callers map a nonempty
    error list to a nonzero exit.
    """
    os.makedirs(out_dir, exist_ok=True)
    curves, errors = [], []
    for config in configs:
        try:
            config.validate()
            records = run_cell(config, workers=workers)
        except Exception as exc:  # report and move to the next cell
            errors.append((config, f"{type(exc).__name__}: {exc}"))
            continue
        curve = aggregate_records(records)
        write_trajectories_csv(records, os.path.join(out_dir, trajectories_filename(config)))
        write_aggregate_csv(curve, os.path.join(out_dir, aggregate_filename(config)))
        curves.append(curve)
    return curves, errors


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    """TV distance between two pmfs on a shared support grid."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    width = max(len(p), len(q))
    pp = np.zeros(width)
    qq = np.zeros(width)
    pp[:len(p)] = p
    qq[:len(q)] = q
    return 0.5 * float(np.abs(pp - qq).sum())


def empirical_pmf(samples: np.ndarray, support_start: int, width: int) -> np.ndarray:
    counts = np.bincount(np.asarray(samples) - support_start, minlength=width)
    return counts[:width] / len(samples)


@dataclass
class CompareReport:
    """Total-variation distances between exact laws and end-to-end runs."""

    config: SimulationConfig
    mean_steps: float
    replicas: int
    node_count_tv: float
    spread_tv: float
    truncation_deficit: float

    def to_text(self) -> str:
        c = self.config
        lines = [
            "analytic-vs-empirical comparison",
            (f"tau={format_param(c.tau)} n0={c.n0} s0={c.s0} rate={format_param(c.rate)} "
             f"horizon={format_param(c.horizon if c.horizon is not None else 0)} "
             f"seed={c.seed}"),
            f"mean_steps={self.mean_steps:g}",
            f"replicas={self.replicas}",
            f"node_count_tv={self.node_count_tv:.6f}",
            f"spread_horizon_tv={self.spread_tv:.6f}",
            f"truncation_deficit={self.truncation_deficit:.6e}",
        ]
        return "\n".join(lines) + "\n"


def compare_analytic_empirical(config: SimulationConfig) -> CompareReport:
    """Validate the exact machinery against end-to-end simulation.

    For a fixed seeded capacity sequence and the holder set pinned at node 0,
    the exact horizon pmf is compared with `runs` end-to-end replicas (clock
    draw + Bernoulli chain); the node-count law is checked against the
    shifted Poisson pmf the same way.
    """
    config.validate()
    if config.mode != "compare":
        raise ConfigError(f"compare requires mode='compare', got {config.mode!r}")
    if config.horizon is None:
        raise ConfigError("compare requires a clock horizon")
    replicas = config.runs
    mean = config.mean_steps()
    clock = ClockParams(rate=config.rate, horizon=config.horizon)
    rng = replica_rng(config.seed, 0)

    # node counts: one arrival per tick, so N = n0 + K*
    kstars = rng.poisson(mean, size=replicas) if mean > 0 else np.zeros(replicas, dtype=int)
    k_max = truncation_index(mean, config.epsilon)
    width = int(max(kstars.max(initial=0), k_max)) + 1
    exact_nodes = np.array([node_count_pmf(clock, config.n0 + k, n0=config.n0)
                            for k in range(width)])
    emp_nodes = empirical_pmf(kstars + config.n0, config.n0, width)
    node_tv = total_variation(exact_nodes, emp_nodes)

    # holder counts along the pinned single-source trace
    law = CapacityLaw(tau=config.tau)
    seq = sequence_from_law(law, max(k_max, int(kstars.max(initial=0))) + 1,
                            replica_rng(config.seed, 1))
    trace = pinned_single_source_trace(seq)
    exact_spread = spread_pmf_horizon(trace, clock, epsilon=config.epsilon)

    probs = np.array([0.0] + [trace(k) for k in range(1, int(kstars.max(initial=0)) + 1)])
    max_k = int(kstars.max(initial=0))
    if max_k > 0:
        u = rng.random((replicas, max_k))
        active = np.arange(1, max_k + 1)[None, :] <= kstars[:, None]
        successes = ((u < probs[None, 1:]) & active).sum(axis=1)
    else:
        successes = np.zeros(replicas, dtype=int)
    spread_width = max(len(exact_spread.probs), int(successes.max(initial=0)) + 1)
    emp_spread = empirical_pmf(successes + 1, 1, spread_width)
    padded = np.zeros(spread_width)
    padded[:len(exact_spread.probs)] = exact_spread.probs
    spread_tv = total_variation(padded, emp_spread)

    return CompareReport(config=config, mean_steps=mean, replicas=replicas,
                         node_count_tv=node_tv, spread_tv=spread_tv,
                         truncation_deficit=exact_spread.deficit)


def analytic_distributions(config: SimulationConfig):
    """Exact laws for a seeded capacity sequence: horizon pmf of the holder
    count along the pinned single-source trace, the node-count pmf, the
    non-propagation curve and the ratio CDF grid. Returns {name: payload}."""
    from .analytics import non_propagation_probability, ratio_cdf

    config.validate()
    if config.horizon is None:
        raise ConfigError("analytic mode requires a clock horizon")
    clock = ClockParams(rate=config.rate, horizon=config.horizon)
    mean = clock.mean_steps
    k_max = truncation_index(mean, config.epsilon) if mean > 0 else 0
    law = CapacityLaw(tau=config.tau)
    seq = sequence_from_law(law, k_max + 2, replica_rng(config.seed, 0))
    trace = pinned_single_source_trace(seq)

    spread = spread_pmf_horizon(trace, clock, epsilon=config.epsilon)
    node_probs = np.array([poisson_pmf(mean, k) for k in range(k_max + 1)])
    nodes = DiscreteDistribution(support_start=config.n0, probs=node_probs,
                                 deficit=max(0.0, 1.0 - float(node_probs.sum())))
    non_prop = [(K, non_propagation_probability(seq, K)) for K in range(1, k_max + 1)]
    xs = [i / 100 for i in range(101)]
    cdf = [(x, ratio_cdf(trace, clock, x, epsilon=config.epsilon,
                         paper_faithful=config.paper_faithful)) for x in xs]
    return {"spread_horizon": spread, "node_count": nodes,
            "non_propagation": non_prop, "ratio_cdf": cdf}


def write_analytic_outputs(config: SimulationConfig, out_dir) -> list:
    """Write the analytic-mode artifacts; returns the created paths."""
    os.makedirs(out_dir, exist_ok=True)
    results = analytic_distributions(config)
    params = {"tau": format_param(config.tau), "rate": format_param(config.rate),
              "horizon": format_param(config.horizon), "seed": config.seed,
              "epsilon": config.epsilon}
    paths = []

    path = os.path.join(out_dir, "dist_spread_horizon.csv")
    results["spread_horizon"].to_csv(path, "spread_horizon", params)
    paths.append(path)

    path = os.path.join(out_dir, "dist_node_count.csv")
    results["node_count"].to_csv(path, "node_count", {**params, "n0": config.n0})
    paths.append(path)

    path = os.path.join(out_dir, "dist_non_propagation.csv")
    with open(path, "w") as fh:
        tags = " ".join(f"{k}={v}" for k, v in params.items())
        fh.write(f"# quantity=non_propagation {tags}\n")
        fh.write("K,prob\n")
        for K, prob in results["non_propagation"]:
            fh.write(f"{K},{prob:.12e}\n")
    paths.append(path)

    path = os.path.join(out_dir, "dist_ratio_cdf.csv")
    with open(path, "w") as fh:
        tags = " ".join(f"{k}={v}" for k, v in params.items())
        mode = "paper-faithful" if config.paper_faithful else "corrected"
        fh.write(f"# quantity=ratio_cdf mode={mode} {tags}\n")
        fh.write("x,cdf\n")
        for x, v in results["ratio_cdf"]:
            fh.write(f"{x:.2f},{v:.12e}\n")
    paths.append(path)
    return paths
