"""Norros-Reittu multigraph evolution.

Step 1 puts Poisson(cap_0) self-loops on a single node. Step N+1 adds node
N+1 and, for every i <= N+1, an independent Poisson(cap_i*cap_{N+1}/L_{N+1})
batch of edges between i and the newcomer (i = N+1 being its self-loop);
optionally each pre-existing edge then survives independently with
probability L_N/L_{N+1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .capacity import CapacitySequence
from .errors import NumericalFailureError

# numpy's poisson sampler rejects lam above ~9.2e18; treat anything close
# as the capacity-overflow failure mode.
_POISSON_MEAN_LIMIT = 9.0e18


def sample_poisson(mean: float, rng: np.random.Generator) -> int:
    """Poisson(mean) variate; mean 0 returns 0 deterministically."""
    if not (isinstance(mean, (int, float)) and math.isfinite(mean) and mean >= 0.0):
        raise ValueError(f"mean must be finite and >= 0, got {mean!r}")
    if mean == 0.0:
        return 0
    if mean > _POISSON_MEAN_LIMIT:
        raise NumericalFailureError(f"Poisson mean {mean} exceeds sampler range")
    return int(rng.poisson(mean))


@dataclass
class NewEdgeReport:
    """New edges created when `new_node` arrived: old node -> count (zero
    counts omitted), plus the newcomer's own self-loop count."""

    new_node: int
    counts: dict
    self_loops: int

    def edges_to(self, nodes) -> int:
        return sum(c for i, c in self.counts.items() if i in nodes)


@dataclass
class MultiGraphState:
    """Evolving multigraph; edge counts keyed by (i, j) with i <= j."""

    step: int
    node_count: int
    edge_counts: dict = field(default_factory=dict)

    def edge_count(self, i: int, j: int) -> int:
        key = (i, j) if i <= j else (j, i)
        return self.edge_counts.get(key, 0)

    def total_edges(self) -> int:
        return sum(self.edge_counts.values())

    def _add_edges(self, i: int, j: int, count: int) -> None:
        if count <= 0:
            return
        key = (i, j) if i <= j else (j, i)
        self.edge_counts[key] = self.edge_counts.get(key, 0) + count


def draw_new_edges(seq: CapacitySequence, new_node: int,
                   rng: np.random.Generator) -> NewEdgeReport:
    """Sample the step-(new_node) edge batch: one Poisson draw per node
    0..new_node with mean cap_i*cap_new/L_new."""
    caps = np.asarray(seq.values[: new_node + 1])
    total = seq.prefix_sums[new_node]
    lam = caps * (caps[new_node] / total)
    if not np.all(np.isfinite(lam)):
        raise NumericalFailureError(f"edge intensity overflow at step {new_node}")
    if lam.max() > _POISSON_MEAN_LIMIT:
        raise NumericalFailureError(
            f"edge intensity {lam.max():g} at step {new_node} exceeds sampler range"
        )
    draws = rng.poisson(lam)
    counts = {i: int(c) for i, c in enumerate(draws[:-1]) if c > 0}
    return NewEdgeReport(new_node=new_node, counts=counts, self_loops=int(draws[-1]))


def evolve_step(g: MultiGraphState, seq: CapacitySequence, rng: np.random.Generator,
                delete_old_edges: bool = False):
    """Advance the graph one step in place; returns (graph, NewEdgeReport).

    Old-edge thinning happens after the new batch is drawn, so the report
    reflects exactly what the newcomer brought.
    """
    new_node = g.node_count
    if len(seq) < new_node + 1:
        raise ValueError(
            f"capacity sequence covers {len(seq)} nodes; step needs index {new_node}"
        )
    report = draw_new_edges(seq, new_node, rng)

    if delete_old_edges and g.edge_counts:
        survive_p = seq.prefix_sums[new_node - 1] / seq.prefix_sums[new_node]
        thinned = {}
        for key, count in g.edge_counts.items():
            kept = int(rng.binomial(count, survive_p))
            if kept > 0:
                thinned[key] = kept
        g.edge_counts = thinned

    for i, c in report.counts.items():
        g._add_edges(i, new_node, c)
    g._add_edges(new_node, new_node, report.self_loops)
    g.step = new_node
    g.node_count = new_node + 1
    return g, report


def init_graph(seq: CapacitySequence, n0: int, s0: int,
               rng: np.random.Generator, delete_old_edges: bool = False) -> MultiGraphState:
    """Initial graph with n0 nodes.

    n0 = 1 is the canonical case: Poisson(cap_0) self-loops on node 0.
    Larger initial graphs are grown by running n0-1 ordinary evolution
    steps from that single node, keeping one mechanism for all sizes.
    The caller marks nodes 0..s0-1 as the initial message holders.
    """
    if n0 < 1:
        raise ValueError(f"n0 must be >= 1, got {n0}")
    if not (1 <= s0 <= n0):
        raise ValueError(f"s0 must satisfy 1 <= s0 <= n0, got s0={s0}, n0={n0}")
    if len(seq) < n0:
        raise ValueError(f"capacity sequence covers {len(seq)} nodes; init needs {n0}")
    g = MultiGraphState(step=0, node_count=1)
    g._add_edges(0, 0, sample_poisson(seq.values[0], rng))
    for _ in range(n0 - 1):
        evolve_step(g, seq, rng, delete_old_edges=delete_old_edges)
    return g


def write_snapshot(g: MultiGraphState, seq: CapacitySequence, members,
                   edges_path, nodes_path) -> None:
    """Export the graph as the documented CSV pair.

    Edge rows are `i,j,count`; node rows are `i,capacity,has_message`.
    """
    with open(edges_path, "w") as fh:
        fh.write("i,j,count\n")
        for (i, j), count in sorted(g.edge_counts.items()):
            fh.write(f"{i},{j},{count}\n")
    with open(nodes_path, "w") as fh:
        fh.write("i,capacity,has_message\n")
        for i in range(g.node_count):
            flag = 1 if i in members else 0
            fh.write(f"{i},{seq.values[i]:.9g},{flag}\n")
