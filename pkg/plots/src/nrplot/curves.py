"""Grid of averaged holder-ratio curves, one panel per (tau, n0) cell."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass

import matplotlib.pyplot as plt

from .reader import AggregateSeries, PlotDataError, read_aggregate_csv

_AGGREGATE_GLOB = re.compile(r"^aggregate_.*\.csv$")


@dataclass(frozen=True)
class CurvePanelSpec:
    """Validated inputs for one figure: panels keyed by (tau, n0), one line
    per s0 inside each panel, plus the output path."""

    taus: tuple
    n0s: tuple
    cells: dict
    out_path: str

    def panel(self, tau: float, n0: int):
        return self.cells[(tau, n0)]


def build_panel_spec(source: str, out_path: str) -> CurvePanelSpec:
    """Collect aggregate CSVs from a sweep directory (or a single file) and
    group them into a panel grid. Every referenced file is read and
    validated here, so rendering cannot fail halfway."""
    if os.path.isdir(source):
        paths = [os.path.join(source, name)
                 for name in sorted(os.listdir(source))
                 if _AGGREGATE_GLOB.match(name)]
        if not paths:
            raise PlotDataError(f"{source}: no aggregate_*.csv files found")
    elif os.path.isfile(source):
        paths = [source]
    else:
        raise PlotDataError(f"{source}: no such file or directory")

    cells: dict = {}
    for path in paths:
        series = read_aggregate_csv(path)
        key = (series.tau, series.n0)
        lines = cells.setdefault(key, [])
        if any(existing.s0 == series.s0 for existing in lines):
            raise PlotDataError(
                f"{path}: duplicate cell tau={series.tau} n0={series.n0} s0={series.s0}")
        lines.append(series)
    for key in cells:
        cells[key] = tuple(sorted(cells[key], key=lambda s: s.s0))
    taus = tuple(sorted({tau for tau, _ in cells}))
    n0s = tuple(sorted({n0 for _, n0 in cells}))
    return CurvePanelSpec(taus=taus, n0s=n0s, cells=cells, out_path=out_path)


def plot_ratio_grid(spec: CurvePanelSpec):
    """Render the panel grid and save it to spec.out_path.

    Rows are tau values, columns initial sizes; every panel shows the mean
    holder ratio against the graph size with one line per s0 and a shared
    [0, 1] y-range. Returns the figure for callers that inspect it.
    """
    rows, cols = len(spec.taus), len(spec.n0s)
    fig, axes = plt.subplots(rows, cols, squeeze=False,
                             figsize=(4.0 * cols, 3.0 * rows),
                             sharex="col", sharey=True)
    for r, tau in enumerate(spec.taus):
        for c, n0 in enumerate(spec.n0s):
            ax = axes[r][c]
            for series in spec.cells.get((tau, n0), ()):
                ax.plot(series.n_values, series.mean_ratio,
                        label=f"S0={series.s0}", linewidth=1.2)
            ax.set_ylim(0.0, 1.0)
            ax.set_title(f"tau={tau:g}, N0={n0}", fontsize=10)
            ax.legend(fontsize=8, loc="lower right")
            if r == rows - 1:
                ax.set_xlabel("N_k")
            if c == 0:
                ax.set_ylabel("mean S_k/N_k")
    fig.tight_layout()
    fig.savefig(spec.out_path, dpi=150)
    return fig
