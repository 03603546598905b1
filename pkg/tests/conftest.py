import time

import pytest

from nrspread import SimulationConfig, expand_grid, run_sweep

SWEEP_TAUS = [1.5, 2.5, 3.5]
SWEEP_N0S = [10, 50, 100]
SWEEP_S0S = [1, 5, 10]
SWEEP_SEED = 0


@pytest.fixture(scope="session")
def full_sweep(tmp_path_factory):
    """The 27-cell reference sweep (20 runs each, up to 3000 nodes), run once
    per session; several acceptance checks read from it."""
    out_dir = tmp_path_factory.mktemp("full_sweep")
    base = SimulationConfig(tau=2.5, n0=1, s0=1, max_nodes=3000, runs=20,
                            seed=SWEEP_SEED)
    configs = expand_grid(base, SWEEP_TAUS, SWEEP_N0S, SWEEP_S0S)
    t0 = time.perf_counter()
    curves, errors = run_sweep(configs, out_dir, workers=4)
    elapsed = time.perf_counter() - t0
    assert errors == []
    return {"dir": out_dir, "curves": curves, "elapsed": elapsed}
