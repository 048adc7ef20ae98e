"""
Shared fixtures: models and the default grids of each family.
"""
import copy
import sys
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from ladderlab.config.manager import DEFAULT_CONFIG  # noqa: E402
from ladderlab.hierarchies import HierarchyFactory  # noqa: E402
from ladderlab.numerics.grid import build_grid  # noqa: E402


@pytest.fixture(scope="session")
def oscillator():
    return HierarchyFactory.create_model("oscillator")


@pytest.fixture(scope="session")
def morse():
    return HierarchyFactory.create_model("morse", {"alpha": 1.0})


@pytest.fixture(scope="session")
def coulomb():
    return HierarchyFactory.create_model("coulomb")


@pytest.fixture(scope="session")
def oscillator_grid():
    return build_grid("half_line", 1e-4, 12.0, 4001)


@pytest.fixture(scope="session")
def morse_grid():
    return build_grid("full_line", -12.0, 6.0, 4001)


@pytest.fixture(scope="session")
def coulomb_grid():
    return build_grid("half_line", 1e-5, 60.0, 16001)


@pytest.fixture
def config():
    """A private copy of the built-in configuration."""
    return copy.deepcopy(DEFAULT_CONFIG)


@pytest.fixture
def clean_env(monkeypatch, tmp_path):
    """No LADDERLAB_ variables and no stray .env in the working directory."""
    import os

    for key in list(os.environ):
        if key.startswith("LADDERLAB_"):
            monkeypatch.delenv(key)
    monkeypatch.delenv("SOURCE_DATE_EPOCH", raising=False)
    monkeypatch.chdir(tmp_path)
    return tmp_path
