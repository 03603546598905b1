"""Command-line interface.

Thin client over the service handler layer: each subcommand builds the same
request models the HTTP routes accept and dispatches in-process, so CLI and
server behavior cannot drift apart. Exit codes: 0 success, 2 configuration
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import ConfigError, NumericalFailureError
from .evolution import write_snapshot
from .harness import format_param
from .service import handlers
from .service import models as m

_PROP_MODE_ALIASES = {"edge": "edge-exact", "edge-exact": "edge-exact",
                      "bernoulli": "bernoulli"}


def _parse_floats(text: str):
    return [float(v) for v in text.split(",") if v != ""]


def _parse_ints(text: str):
    return [int(v) for v in text.split(",") if v != ""]


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"cannot parse boolean value {text!r}")


def read_config_file(path: str) -> dict:
    """Plain key=value config file; '#' starts a comment."""
    values = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
                key, value = line.split("=", 1)
                values[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}")
    return values


_FILE_PARSERS = {
    "tau": _parse_floats, "n0": _parse_ints, "s0": _parse_ints,
    "rate": float, "t_star": float, "max_nodes": int, "runs": int,
    "seed": int, "prop_mode": str, "delete_old_edges": _parse_bool,
    "epsilon": float, "paper_faithful": _parse_bool, "out": str,
    "workers": int, "nodes": int, "host": str, "port": int,
}


def _merge(args: argparse.Namespace, key: str, default):
    """CLI flag if given, else config-file value, else the default."""
    cli_value = getattr(args, key, None)
    if cli_value is not None:
        return cli_value
    file_values = getattr(args, "_file_values", {})
    if key in file_values:
        parser = _FILE_PARSERS.get(key, str)
        try:
            return parser(file_values[key])
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"config file value {key}={file_values[key]!r}: {exc}")
    return default


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", metavar="PATH", help="key=value config file; flags override")
    sub.add_argument("--tau", type=_parse_floats, metavar="R[,R...]")
    sub.add_argument("--n0", type=_parse_ints, metavar="I[,I...]")
    sub.add_argument("--s0", type=_parse_ints, metavar="I[,I...]")
    sub.add_argument("--rate", type=float, metavar="R")
    sub.add_argument("--t-star", dest="t_star", type=float, metavar="R")
    sub.add_argument("--max-nodes", dest="max_nodes", type=int, metavar="I")
    sub.add_argument("--runs", type=int, metavar="I")
    sub.add_argument("--seed", type=int, metavar="U64")
    sub.add_argument("--prop-mode", dest="prop_mode", choices=sorted(_PROP_MODE_ALIASES))
    sub.add_argument("--delete-old-edges", dest="delete_old_edges",
                     action="store_const", const=True)
    sub.add_argument("--epsilon", type=float, metavar="R")
    sub.add_argument("--paper-faithful", dest="paper_faithful",
                     action="store_const", const=True)
    sub.add_argument("--out", metavar="DIR")
    sub.add_argument("--workers", type=int, metavar="I")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nr-spread",
        description="Message spreading on Norros-Reittu preferential-attachment graphs")
    subs = parser.add_subparsers(dest="command", required=True)

    for name, blurb in (("simulate", "run Monte Carlo trajectory sweeps"),
                        ("analytic", "compute exact distributions"),
                        ("compare", "analytic vs end-to-end simulation report")):
        sub = subs.add_parser(name, help=blurb)
        _add_common(sub)

    snap = subs.add_parser("snapshot", help="export a grown graph as CSV")
    _add_common(snap)
    snap.add_argument("--nodes", type=int, metavar="I", help="target graph size")

    serve = subs.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _prop_mode(args) -> str:
    raw = _merge(args, "prop_mode", "bernoulli")
    try:
        return _PROP_MODE_ALIASES[raw]
    except KeyError:
        raise ConfigError(f"unknown propagation mode {raw!r}")


def _cmd_simulate(args) -> int:
    req = m.SweepIn(
        taus=_merge(args, "tau", [2.5]),
        n0s=_merge(args, "n0", [1]),
        s0s=_merge(args, "s0", [1]),
        max_nodes=_merge(args, "max_nodes", 3000),
        runs=_merge(args, "runs", 20),
        seed=_merge(args, "seed", 0),
        propagation_mode=_prop_mode(args),
        out_dir=_merge(args, "out", "sweep_out"),
        workers=_merge(args, "workers", os.cpu_count() or 1),
    )
    result = handlers.sweep(req)
    for curve in result.curves:
        tail = curve.mean_ratio[-1] if curve.mean_ratio else float("nan")
        print(f"cell tau={format_param(curve.tau)} n0={curve.n0} s0={curve.s0}: "
              f"final mean ratio {tail:.4f}")
    for message in result.errors:
        print(f"error: {message}", file=sys.stderr)
    print(f"wrote {len(result.files)} files to {req.out_dir}")
    if result.errors:
        numerical = any(e.startswith("NumericalFailureError") for e in result.errors)
        return 3 if numerical else 2
    return 0


def _require_horizon(args) -> float:
    horizon = _merge(args, "t_star", None)
    if horizon is None:
        raise ConfigError("this mode requires --t-star")
    return horizon


def _cmd_analytic(args) -> int:
    from .harness import SimulationConfig, write_analytic_outputs

    taus = _merge(args, "tau", [2.5])
    config = SimulationConfig(
        tau=taus[0],
        n0=_merge(args, "n0", [1])[0],
        s0=_merge(args, "s0", [1])[0],
        rate=_merge(args, "rate", 1.0),
        horizon=_require_horizon(args),
        max_nodes=None,
        runs=1,
        seed=_merge(args, "seed", 0),
        mode="analytic",
        epsilon=_merge(args, "epsilon", 1e-10),
        paper_faithful=bool(_merge(args, "paper_faithful", False)),
    )
    paths = write_analytic_outputs(config, _merge(args, "out", "analytic_out"))
    for path in paths:
        print(f"wrote {path}")
    return 0


def _cmd_compare(args) -> int:
    req = m.CompareIn(
        tau=_merge(args, "tau", [2.5])[0],
        n0=_merge(args, "n0", [1])[0],
        s0=_merge(args, "s0", [1])[0],
        clock=m.ClockIn(rate=_merge(args, "rate", 1.0),
                        horizon=_merge(args, "t_star", 3.0)),
        replicas=_merge(args, "runs", 100_000),
        seed=_merge(args, "seed", 0),
        epsilon=_merge(args, "epsilon", 1e-10),
    )
    report = handlers.compare(req)
    out_dir = _merge(args, "out", ".")
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "report_compare.txt")
    with open(path, "w") as fh:
        fh.write("analytic-vs-empirical comparison\n")
        fh.write(f"tau={format_param(req.tau)} n0={req.n0} s0={req.s0} "
                 f"rate={format_param(req.clock.rate)} "
                 f"horizon={format_param(req.clock.horizon)} seed={req.seed}\n")
        fh.write(f"mean_steps={report.mean_steps:g}\n")
        fh.write(f"replicas={report.replicas}\n")
        fh.write(f"node_count_tv={report.node_count_tv:.6f}\n")
        fh.write(f"spread_horizon_tv={report.spread_tv:.6f}\n")
        fh.write(f"truncation_deficit={report.truncation_deficit:.6e}\n")
    print(f"node_count_tv={report.node_count_tv:.6f}")
    print(f"spread_horizon_tv={report.spread_tv:.6f}")
    print(f"wrote {path}")
    return 0


def _cmd_snapshot(args) -> int:
    nodes = _merge(args, "nodes", 100)
    req = m.SnapshotIn(
        tau=_merge(args, "tau", [2.5])[0],
        nodes=nodes,
        s0=_merge(args, "s0", [1])[0],
        seed=_merge(args, "seed", 0),
        delete_old_edges=bool(_merge(args, "delete_old_edges", False)),
    )
    g, seq, members = handlers.build_snapshot(req)
    out_dir = _merge(args, "out", ".")
    os.makedirs(out_dir, exist_ok=True)
    edges_path = os.path.join(out_dir, f"edges_{nodes}.csv")
    nodes_path = os.path.join(out_dir, f"nodes_{nodes}.csv")
    write_snapshot(g, seq, members, edges_path, nodes_path)
    print(f"wrote {edges_path}")
    print(f"wrote {nodes_path}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import app
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "analytic": _cmd_analytic,
    "compare": _cmd_compare,
    "snapshot": _cmd_snapshot,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config_path = getattr(args, "config", None)
        args._file_values = read_config_file(config_path) if config_path else {}
        return _COMMANDS[args.command](args)
    except (ConfigError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
