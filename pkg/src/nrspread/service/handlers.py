"""Operation handlers shared by the HTTP routes and the CLI.

Each handler maps a request model onto the core package and back; the CLI
calls these in-process, so both surfaces stay behaviorally identical.
"""

from __future__ import annotations

import math
import os

import numpy as np

from ..analytics import (DiscreteDistribution, node_count_pmf,
                         non_propagation_probability, poisson_binomial_pmf,
                         ratio_cdf, spread_pmf_fixed_k, spread_pmf_horizon)
from ..capacity import CapacityLaw, CapacitySequence, sequence_from_law
from ..clock import ClockParams, truncation_index
from ..evolution import init_graph, evolve_step
from ..harness import (SimulationConfig, aggregate_filename, compare_analytic_empirical,
                       expand_grid, replica_rng, run_sweep, trajectories_filename)
from ..spreading import EDGE_EXACT, MessageState, propagate_step, run_trajectory
from . import models as m


def _dist_out(dist: DiscreteDistribution) -> m.DistributionOut:
    return m.DistributionOut(support_start=dist.support_start,
                             probs=dist.probs.tolist(),
                             deficit=dist.deficit,
                             total_mass=dist.total_mass)


def health() -> m.HealthOut:
    return m.HealthOut(status="ok")


def poisson_binomial(req: m.PoissonBinomialIn) -> m.DistributionOut:
    return _dist_out(poisson_binomial_pmf(req.probs))


def spread_fixed(req: m.SpreadFixedIn) -> m.DistributionOut:
    return _dist_out(spread_pmf_fixed_k(req.probs))


def spread_horizon(req: m.SpreadHorizonIn) -> m.DistributionOut:
    clock = ClockParams(rate=req.clock.rate, horizon=req.clock.horizon)
    k_max = truncation_index(clock.mean_steps, req.epsilon)
    gen = req.trace.generator(k_max)
    return _dist_out(spread_pmf_horizon(gen, clock, epsilon=req.epsilon))


def non_propagation(req: m.NonPropagationIn) -> m.NonPropagationOut:
    seq = CapacitySequence.from_values(req.capacities)
    return m.NonPropagationOut(probability=non_propagation_probability(seq, req.K))


def node_count(req: m.NodeCountIn) -> m.DistributionOut:
    clock = ClockParams(rate=req.clock.rate, horizon=req.clock.horizon)
    if req.i_max is not None:
        i_max = req.i_max
    else:
        i_max = req.n0 + truncation_index(clock.mean_steps, req.epsilon)
    if i_max < req.n0:
        raise ValueError(f"i_max {i_max} is below n0 {req.n0}")
    probs = np.array([node_count_pmf(clock, i, n0=req.n0)
                      for i in range(req.n0, i_max + 1)])
    deficit = max(0.0, 1.0 - float(probs.sum()))
    return _dist_out(DiscreteDistribution(support_start=req.n0, probs=probs,
                                          deficit=deficit))


def ratio_cdf_values(req: m.RatioCdfIn) -> m.RatioCdfOut:
    clock = ClockParams(rate=req.clock.rate, horizon=req.clock.horizon)
    k_max = truncation_index(clock.mean_steps, req.epsilon)
    gen = req.trace.generator(k_max)
    values = [ratio_cdf(gen, clock, x, epsilon=req.epsilon,
                        paper_faithful=req.paper_faithful) for x in req.xs]
    return m.RatioCdfOut(xs=list(req.xs), cdf=values,
                         paper_faithful=req.paper_faithful)


def trajectory(req: m.TrajectoryIn) -> m.TrajectoryOut:
    config = SimulationConfig(tau=req.tau, n0=req.n0, s0=req.s0, rate=req.rate,
                              horizon=req.horizon, max_nodes=req.max_nodes,
                              runs=1, seed=req.seed,
                              propagation_mode=req.propagation_mode).validate()
    rec = run_trajectory(config, replica_rng(req.seed, req.run_id), run_id=req.run_id)
    steps = [m.TrajectoryStep(k=k, n_k=n, s_k=s, ratio=s / n,
                              p_k=None if math.isnan(p) else p)
             for (k, n, s, p) in rec.steps]
    return m.TrajectoryOut(run_id=rec.run_id, tau=rec.tau, n0=rec.n0,
                           s0=rec.s0, steps=steps)


def sweep(req: m.SweepIn) -> m.SweepOut:
    base = SimulationConfig(tau=req.taus[0], n0=req.n0s[0], s0=req.s0s[0],
                            max_nodes=req.max_nodes, runs=req.runs, seed=req.seed,
                            propagation_mode=req.propagation_mode)
    configs = expand_grid(base, req.taus, req.n0s, req.s0s)
    out_dir = req.out_dir or os.path.join(os.getcwd(), "sweep_out")
    curves, errors = run_sweep(configs, out_dir, workers=req.workers)
    files = []
    for config in configs:
        if any(c is config for c, _ in errors):
            continue
        files.append(os.path.join(out_dir, trajectories_filename(config)))
        files.append(os.path.join(out_dir, aggregate_filename(config)))
    return m.SweepOut(
        curves=[m.CurveOut(tau=c.tau, n0=c.n0, s0=c.s0, n_values=c.n_values,
                           mean_ratio=c.mean_ratio, count=c.count, stderr=c.stderr)
                for c in curves],
        files=files,
        errors=[msg for _, msg in errors])


def compare(req: m.CompareIn) -> m.CompareOut:
    config = SimulationConfig(tau=req.tau, n0=req.n0, s0=req.s0, rate=req.clock.rate,
                              horizon=req.clock.horizon, max_nodes=None,
                              runs=req.replicas, seed=req.seed, mode="compare",
                              epsilon=req.epsilon)
    report = compare_analytic_empirical(config)
    return m.CompareOut(mean_steps=report.mean_steps, replicas=report.replicas,
                        node_count_tv=report.node_count_tv,
                        spread_tv=report.spread_tv,
                        truncation_deficit=report.truncation_deficit)


def build_snapshot(req: m.SnapshotIn):
    """Grow a graph to the requested size with edge-exact spreading from s0
    seed holders; returns (graph, sequence, holder set)."""
    law = CapacityLaw(tau=req.tau)
    rng = replica_rng(req.seed, 0)
    seq = sequence_from_law(law, req.nodes, rng)
    n0 = max(req.s0, 1)
    g = init_graph(seq, n0, req.s0, rng, delete_old_edges=req.delete_old_edges)
    state = MessageState.initial(seq, n0, req.s0)
    while g.node_count < req.nodes:
        new_node = g.node_count
        g, report = evolve_step(g, seq, rng, delete_old_edges=req.delete_old_edges)
        propagate_step(state, EDGE_EXACT, seq.values[new_node], report=report)
    return g, seq, state.members


def snapshot(req: m.SnapshotIn) -> m.SnapshotOut:
    g, seq, members = build_snapshot(req)
    nodes = [m.SnapshotNode(i=i, capacity=seq.values[i], has_message=i in members)
             for i in range(g.node_count)]
    edges = [m.SnapshotEdge(i=i, j=j, count=c)
             for (i, j), c in sorted(g.edge_counts.items())]
    return m.SnapshotOut(nodes=nodes, edges=edges)
