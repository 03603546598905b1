"""Readers for the CSV artifacts nr-spread writes.

Everything arrives through files; nothing here imports the simulation
package, so the only coupling between the two sides is the documented
CSV schema.
"""

from __future__ import annotations

import csv
import os
import re
from dataclasses import dataclass


class PlotDataError(ValueError):
    """Unusable input file: wrong schema, no data, or malformed rows."""


AGGREGATE_HEADER = ["N_k", "mean_ratio", "count", "stderr"]
NODE_HEADER = ["i", "capacity", "has_message"]
EDGE_HEADER = ["i", "j", "count"]

_AGGREGATE_NAME = re.compile(r"^aggregate_([^_]+)_(\d+)_(\d+)\.csv$")


@dataclass(frozen=True)
class AggregateSeries:
    """One sweep cell's averaged trajectory: mean holder ratio per graph size."""

    tau: float
    n0: int
    s0: int
    n_values: tuple
    mean_ratio: tuple


def parse_aggregate_name(path):
    """Cell parameters encoded in the filename, aggregate_<tau>_<n0>_<s0>.csv."""
    m = _AGGREGATE_NAME.match(os.path.basename(path))
    if m is None:
        raise PlotDataError(
            f"{path}: name does not match aggregate_<tau>_<n0>_<s0>.csv")
    try:
        return float(m.group(1)), int(m.group(2)), int(m.group(3))
    except ValueError as exc:
        raise PlotDataError(f"{path}: {exc}")


def _read_rows(path, header):
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise PlotDataError(f"cannot read {path}: {exc}")
    if not rows or rows[0] != header:
        raise PlotDataError(f"{path}: expected header {','.join(header)}")
    if len(rows) == 1:
        raise PlotDataError(f"{path}: header only, no data rows")
    return rows[1:]


def read_aggregate_csv(path) -> AggregateSeries:
    tau, n0, s0 = parse_aggregate_name(path)
    n_values, ratios = [], []
    for lineno, row in enumerate(_read_rows(path, AGGREGATE_HEADER), start=2):
        if len(row) != 4:
            raise PlotDataError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
        try:
            n = int(row[0])
            ratio = float(row[1])
        except ValueError as exc:
            raise PlotDataError(f"{path}:{lineno}: {exc}")
        if not (0.0 <= ratio <= 1.0):
            raise PlotDataError(f"{path}:{lineno}: mean_ratio {ratio} outside [0, 1]")
        n_values.append(n)
        ratios.append(ratio)
    return AggregateSeries(tau=tau, n0=n0, s0=s0,
                           n_values=tuple(n_values), mean_ratio=tuple(ratios))


def read_nodes_csv(path):
    """(id, capacity, has_message) triples from a snapshot node file."""
    nodes = []
    seen = set()
    for lineno, row in enumerate(_read_rows(path, NODE_HEADER), start=2):
        if len(row) != 3:
            raise PlotDataError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
        try:
            i = int(row[0])
            capacity = float(row[1])
            flag = int(row[2])
        except ValueError as exc:
            raise PlotDataError(f"{path}:{lineno}: {exc}")
        if i < 0 or i in seen:
            raise PlotDataError(f"{path}:{lineno}: bad node id {i}")
        if capacity <= 0.0:
            raise PlotDataError(f"{path}:{lineno}: capacity must be > 0, got {capacity}")
        if flag not in (0, 1):
            raise PlotDataError(f"{path}:{lineno}: has_message must be 0 or 1, got {flag}")
        seen.add(i)
        nodes.append((i, capacity, bool(flag)))
    return nodes


def read_edges_csv(path):
    """(i, j, count) triples from a snapshot edge file; the file may hold
    only the header, since small graphs can draw no edges at all."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise PlotDataError(f"cannot read {path}: {exc}")
    if not rows or rows[0] != EDGE_HEADER:
        raise PlotDataError(f"{path}: expected header {','.join(EDGE_HEADER)}")
    edges = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise PlotDataError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
        try:
            i, j, count = int(row[0]), int(row[1]), int(row[2])
        except ValueError as exc:
            raise PlotDataError(f"{path}:{lineno}: {exc}")
        if i < 0 or j < 0 or count < 1:
            raise PlotDataError(f"{path}:{lineno}: bad edge row {row}")
        edges.append((i, j, count))
    return edges
