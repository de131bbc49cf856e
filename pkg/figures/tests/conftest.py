import subprocess
import sys
from pathlib import Path

import pytest

FIGURES_DIR = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(FIGURES_DIR))


def cli(*args):
    subprocess.run(
        [sys.executable, "-m", "ergoliq"] + [str(a) for a in args],
        check=True, capture_output=True,
    )


@pytest.fixture(scope="session")
def artifacts(tmp_path_factory):
    """CSV artifacts produced through the CLI, smoke-sized."""
    root = tmp_path_factory.mktemp("artifacts")
    cli("compare", "--out", root / "compare", "--paths", 40, "--horizon", 200,
        "--dt", 0.1, "--seed", 99, "--timeseries", 200)
    cli("sweep", "--out", root / "surface", "--axis", "r=0,0.025,0.05,0.075,0.1",
        "--axis", "k=0.0005,0.001,0.002")
    cli("sweep", "--out", root / "line", "--axis", "eta=5,10,20")
    cli("sweep", "--out", root / "point", "--axis", "r=0.05", "--axis", "k=0.001")
    cli("sweep", "--out", root / "sigma_mc", "--axis", "sigma=0.1,0.4,0.7,1.0",
        "--mc", "--cash-mode", "full", "--paths", 60, "--horizon", 200,
        "--dt", 0.1, "--seed", 7)
    cli("sweep", "--out", root / "sigma_cf", "--axis", "sigma=0.1,0.4,0.7,1.0")
    return root
