import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from riskirl.envmodel import DemonstrationSet, Trajectory
from helpers import env_from_rows


@pytest.fixture
def open_3x3():
    """3x3 grid, alternating two features, no obstacles."""
    return env_from_rows(["aba", "bab", "aba"], order="ab")


@pytest.fixture
def corridor():
    """3x3 grid: road row flanked by grass above and dirt below."""
    return env_from_rows(["ggg", "rrr", "ddd"], order="gdr")


@pytest.fixture
def corridor_demos(corridor):
    traj = Trajectory(((0, 1), (1, 1), (2, 1)))
    return DemonstrationSet(trajectories=[traj], start=(0, 1), goal=(2, 1))
