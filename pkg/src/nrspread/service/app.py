"""FastAPI application exposing the analytics and simulation operations."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from ..errors import ConfigError, NumericalFailureError
from . import handlers
from . import models as m


def create_app() -> FastAPI:
    app = FastAPI(
        title="nrspread",
        description=("Exact analytics and Monte Carlo simulation of "
                     "single-message spreading on Norros-Reittu "
                     "preferential-attachment graphs."),
        version="0.1.0",
    )

    def guard(fn, *args):
        try:
            return fn(*args)
        except (ValueError, ConfigError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except NumericalFailureError as exc:
            raise HTTPException(status_code=500, detail=f"numerical failure: {exc}")

    @app.get("/health", response_model=m.HealthOut)
    def health():
        return handlers.health()

    @app.post("/analytics/poisson-binomial", response_model=m.DistributionOut)
    def poisson_binomial(req: m.PoissonBinomialIn):
        return guard(handlers.poisson_binomial, req)

    @app.post("/analytics/spread-fixed", response_model=m.DistributionOut)
    def spread_fixed(req: m.SpreadFixedIn):
        return guard(handlers.spread_fixed, req)

    @app.post("/analytics/spread-horizon", response_model=m.DistributionOut)
    def spread_horizon(req: m.SpreadHorizonIn):
        return guard(handlers.spread_horizon, req)

    @app.post("/analytics/non-propagation", response_model=m.NonPropagationOut)
    def non_propagation(req: m.NonPropagationIn):
        return guard(handlers.non_propagation, req)

    @app.post("/analytics/node-count", response_model=m.DistributionOut)
    def node_count(req: m.NodeCountIn):
        return guard(handlers.node_count, req)

    @app.post("/analytics/ratio-cdf", response_model=m.RatioCdfOut)
    def ratio_cdf(req: m.RatioCdfIn):
        return guard(handlers.ratio_cdf_values, req)

    @app.post("/simulate/trajectory", response_model=m.TrajectoryOut)
    def trajectory(req: m.TrajectoryIn):
        return guard(handlers.trajectory, req)

    @app.post("/simulate/sweep", response_model=m.SweepOut)
    def sweep(req: m.SweepIn):
        return guard(handlers.sweep, req)

    @app.post("/simulate/compare", response_model=m.CompareOut)
    def compare(req: m.CompareIn):
        return guard(handlers.compare, req)

    @app.post("/graph/snapshot", response_model=m.SnapshotOut)
    def snapshot(req: m.SnapshotIn):
        return guard(handlers.snapshot, req)

    return app


app = create_app()
