import os
import subprocess
import sys

import pytest

os.environ.setdefault("MPLBACKEND", "Agg")


def _run_nrspread(args):
    """Artifacts come from the producing package's CLI, the documented
    interface between the two packages."""
    proc = subprocess.run([sys.executable, "-m", "nrspread.cli"] + args,
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="session")
def sweep_dir(tmp_path_factory):
    """Full 3x3x3 grid at reduced size; the shape is what the grid figure
    needs, the statistics are irrelevant here."""
    out = tmp_path_factory.mktemp("sweep")
    _run_nrspread(["simulate", "--tau", "1.5,2.5,3.5", "--n0", "10,50,100",
                   "--s0", "1,5,10", "--max-nodes", "120", "--runs", "3",
                   "--seed", "0", "--workers", "2", "--out", str(out)])
    return out


@pytest.fixture(scope="session")
def snapshot_files(tmp_path_factory):
    out = tmp_path_factory.mktemp("snapshots")
    files = {}
    for n in (3, 20, 100):
        _run_nrspread(["snapshot", "--tau", "2.5", "--nodes", str(n),
                       "--seed", "0", "--out", str(out)])
        files[n] = (out / f"edges_{n}.csv", out / f"nodes_{n}.csv")
    return files
