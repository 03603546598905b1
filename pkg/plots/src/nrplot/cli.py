"""nr-plot: render PNG figures from nr-spread CSV artifacts."""

from __future__ import annotations

import argparse
import os
import sys

from .reader import PlotDataError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nr-plot",
        description="Plot holder-ratio curve grids and graph snapshots")
    subs = parser.add_subparsers(dest="command", required=True)

    curves = subs.add_parser("curves", help="panel grid of mean-ratio curves")
    curves.add_argument("--in", dest="in_path", required=True, metavar="DIR",
                        help="sweep output directory (or one aggregate CSV)")
    curves.add_argument("--out", required=True, metavar="FILE.png")

    snap = subs.add_parser("snapshot", help="draw one graph snapshot")
    snap.add_argument("--edges", required=True, metavar="F")
    snap.add_argument("--nodes", required=True, metavar="F")
    snap.add_argument("--out", required=True, metavar="FILE.png")
    snap.add_argument("--layout-seed", dest="layout_seed", type=int, default=7)
    return parser


def main(argv=None) -> int:
    os.environ.setdefault("MPLBACKEND", "Agg")
    args = build_parser().parse_args(argv)
    import matplotlib.pyplot as plt
    try:
        if args.command == "curves":
            from .curves import build_panel_spec, plot_ratio_grid

            spec = build_panel_spec(args.in_path, args.out)
            fig = plot_ratio_grid(spec)
            plt.close(fig)
        else:
            from .snapshot import plot_graph_snapshot

            fig, _ = plot_graph_snapshot(args.edges, args.nodes, args.out,
                                         layout_seed=args.layout_seed)
            plt.close(fig)
    except PlotDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
