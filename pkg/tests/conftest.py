"""Shared fixtures: seeded generators, frames and states."""
import numpy as np
import pytest

from ptlab.shared.frames import build_frame, orthonormal_frame, random_frame, random_state
from ptlab.shared.two_level import TwoLevelParams, two_level_frame


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def identity_frame():
    return orthonormal_frame(2)


@pytest.fixture
def skew_frame():
    """phi_1 = e_1, phi_2 = (1, 1); chi_1 = (1, -1), chi_2 = e_2."""
    return build_frame([[1, 0], [1, 1]])


@pytest.fixture
def pt_params():
    return TwoLevelParams(xi=1.2, eta=0.7)


@pytest.fixture
def pt_frame(pt_params):
    return two_level_frame(pt_params)


@pytest.fixture
def random_frames(rng):
    return [random_frame(n, rng) for n in (2, 3, 4, 5, 6)]


@pytest.fixture
def random_pairs(rng, random_frames):
    """(frame, state) for N = 2..6."""
    return [(f, random_state(f, rng)) for f in random_frames]


@pytest.fixture(autouse=True)
def isolated_outputs(tmp_path, monkeypatch):
    """Runs every test from a scratch directory so logs and results stay out of the tree."""
    monkeypatch.chdir(tmp_path)
    return tmp_path
