"""Pytest configuration file."""
import os
import sys

import numpy as np
import pytest

# Add the src directory to the Python path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..', 'src')))

from qkd_protocol.states import SymmetricStdState  # noqa: E402


def random_symmetric_states(n: int, seed: int = 0, nppt_only: bool = False):
    """Physical symmetric standard states drawn uniformly in (lambda, c_x, c_p)."""
    rng = np.random.default_rng(seed)
    states = []
    while len(states) < n:
        lam = rng.uniform(1.0, 4.0)
        cx = rng.uniform(0.0, lam)
        cp = rng.uniform(-cx, cx)
        if (lam - cx) * (lam + cp) < 1.0 + 1e-6:
            continue
        state = SymmetricStdState(lam, cx, cp)
        if nppt_only and state.ppt_product > 1.0 - 1e-3:
            continue
        states.append(state)
    return states


@pytest.fixture
def reference_state():
    """lambda = 2, c_x = 1.5, c_p = 0.5: NPPT, not coherent-securable."""
    return SymmetricStdState(2.0, 1.5, 0.5)


@pytest.fixture
def tmsv():
    """Builder for two-mode squeezed vacua."""
    return SymmetricStdState.tmsv


@pytest.fixture
def random_states():
    return random_symmetric_states(200, seed=7)


@pytest.fixture
def random_nppt_states():
    return random_symmetric_states(100, seed=11, nppt_only=True)


@pytest.fixture
def state_sampler():
    return random_symmetric_states
