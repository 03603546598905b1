import matplotlib.pyplot as plt
import pytest
from matplotlib.collections import LineCollection, PathCollection
from matplotlib.colors import to_rgba

from nrplot import PlotDataError, plot_graph_snapshot


def _write_pair(tmp_path, node_rows, edge_rows):
    nodes = tmp_path / "nodes.csv"
    nodes.write_text("i,capacity,has_message\n"
                     + "".join(f"{r}\n" for r in node_rows))
    edges = tmp_path / "edges.csv"
    edges.write_text("i,j,count\n" + "".join(f"{r}\n" for r in edge_rows))
    return edges, nodes


def _node_collection(fig):
    for coll in fig.axes[0].collections:
        if isinstance(coll, PathCollection):
            return coll
    raise AssertionError("no drawn nodes found")


def _edge_segments(fig):
    for coll in fig.axes[0].collections:
        if isinstance(coll, LineCollection):
            return coll.get_segments()
    return []


def test_three_node_snapshot(tmp_path):
    edges, nodes = _write_pair(
        tmp_path,
        ["0,1.0,1", "1,2.0,0", "2,4.0,0"],
        ["0,1,3", "1,2,1"])
    out = tmp_path / "g.png"
    fig, pos = plot_graph_snapshot(edges, nodes, out)
    try:
        coll = _node_collection(fig)
        assert len(coll.get_offsets()) == 3
        assert len(pos) == 3
        assert out.exists() and out.stat().st_size > 0
    finally:
        plt.close(fig)


def test_holder_black_rest_grey(tmp_path):
    edges, nodes = _write_pair(
        tmp_path, ["0,1.0,1", "1,1.0,0"], ["0,1,1"])
    fig, _ = plot_graph_snapshot(edges, nodes, tmp_path / "g.png")
    try:
        colors = _node_collection(fig).get_facecolor()
        assert tuple(colors[0]) == to_rgba("black")
        assert tuple(colors[1]) == to_rgba("grey")
    finally:
        plt.close(fig)


def test_node_size_proportional_to_capacity(tmp_path):
    edges, nodes = _write_pair(
        tmp_path, ["0,1.0,1", "1,3.0,0"], ["0,1,1"])
    fig, _ = plot_graph_snapshot(edges, nodes, tmp_path / "g.png")
    try:
        sizes = _node_collection(fig).get_sizes()
        assert sizes[1] / sizes[0] == pytest.approx(3.0)
    finally:
        plt.close(fig)


def test_self_loops_omitted_and_multi_edges_drawn_once(tmp_path):
    edges, nodes = _write_pair(
        tmp_path,
        ["0,1.0,1", "1,1.0,0", "2,1.0,0"],
        ["0,0,4", "0,1,7", "1,2,1"])
    fig, _ = plot_graph_snapshot(edges, nodes, tmp_path / "g.png")
    try:
        assert len(_edge_segments(fig)) == 2  # (0,1) once despite count 7, no loop
    finally:
        plt.close(fig)


def test_isolated_nodes_still_drawn(tmp_path):
    edges, nodes = _write_pair(tmp_path, ["0,1.0,1", "1,1.0,0"], [])
    fig, pos = plot_graph_snapshot(edges, nodes, tmp_path / "g.png")
    try:
        assert len(_node_collection(fig).get_offsets()) == 2
        assert len(pos) == 2
    finally:
        plt.close(fig)


def test_layout_reproducible_for_fixed_seed(tmp_path):
    edges, nodes = _write_pair(
        tmp_path,
        ["0,1.0,1", "1,2.0,0", "2,1.5,0", "3,1.0,0"],
        ["0,1,1", "0,2,2", "1,3,1"])
    fig1, pos1 = plot_graph_snapshot(edges, nodes, tmp_path / "a.png")
    plt.close(fig1)
    fig2, pos2 = plot_graph_snapshot(edges, nodes, tmp_path / "b.png")
    plt.close(fig2)
    assert pos1.keys() == pos2.keys()
    for node in pos1:
        assert tuple(pos1[node]) == tuple(pos2[node])

    fig3, pos3 = plot_graph_snapshot(edges, nodes, tmp_path / "c.png",
                                     layout_seed=8)
    plt.close(fig3)
    assert any(tuple(pos1[n]) != tuple(pos3[n]) for n in pos1)


def test_edge_referencing_unknown_node(tmp_path):
    edges, nodes = _write_pair(tmp_path, ["0,1.0,1"], ["0,5,1"])
    with pytest.raises(PlotDataError, match="missing"):
        plot_graph_snapshot(edges, nodes, tmp_path / "g.png")


def test_malformed_rows_fail_descriptively(tmp_path):
    edges, nodes = _write_pair(tmp_path, ["0,1.0,2"], [])
    with pytest.raises(PlotDataError, match="has_message"):
        plot_graph_snapshot(edges, nodes, tmp_path / "g.png")
