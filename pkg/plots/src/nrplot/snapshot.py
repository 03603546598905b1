"""Single-graph rendering from snapshot CSV pairs."""

from __future__ import annotations

import matplotlib.pyplot as plt
import networkx as nx
import numpy as np

from .reader import PlotDataError, read_edges_csv, read_nodes_csv

HOLDER_COLOR = "black"
OTHER_COLOR = "grey"


def plot_graph_snapshot(edges_path, nodes_path, out_path, layout_seed: int = 7):
    """Draw the graph with message holders in black, the rest in grey, and
    circle sizes proportional to node capacity.

    Parallel edges collapse to a single drawn line and self-loops are
    omitted; the force-directed layout is seeded, so the same inputs give
    the same picture. Returns (figure, positions).
    """
    nodes = read_nodes_csv(nodes_path)
    edges = read_edges_csv(edges_path)
    ids = [i for i, _, _ in nodes]
    known = set(ids)
    for i, j, _ in edges:
        if i not in known or j not in known:
            raise PlotDataError(
                f"{edges_path}: edge ({i},{j}) references a node missing from {nodes_path}")

    graph = nx.Graph()
    graph.add_nodes_from(ids)
    graph.add_edges_from((i, j) for i, j, _ in edges if i != j)
    positions = nx.spring_layout(graph, seed=layout_seed)

    capacities = np.array([c for _, c, _ in nodes])
    sizes = 300.0 * capacities / capacities.mean()
    colors = [HOLDER_COLOR if flag else OTHER_COLOR for _, _, flag in nodes]

    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    nx.draw_networkx_edges(graph, positions, ax=ax, edge_color="0.6", width=0.8)
    nx.draw_networkx_nodes(graph, positions, nodelist=ids, node_size=sizes,
                           node_color=colors, ax=ax,
                           linewidths=0.4, edgecolors="black")
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    return fig, positions
