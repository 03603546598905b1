"""Figure rendering for nr-spread sweep and snapshot CSV artifacts."""

from .curves import CurvePanelSpec, build_panel_spec, plot_ratio_grid
from .reader import (AggregateSeries, PlotDataError, parse_aggregate_name,
                     read_aggregate_csv, read_edges_csv, read_nodes_csv)
from .snapshot import plot_graph_snapshot

__version__ = "0.1.0"

__all__ = [
    "AggregateSeries",
    "CurvePanelSpec",
    "PlotDataError",
    "build_panel_spec",
    "parse_aggregate_name",
    "plot_graph_snapshot",
    "plot_ratio_grid",
    "read_aggregate_csv",
    "read_edges_csv",
    "read_nodes_csv",
    "__version__",
]
