"""Shared fixtures: the expensive six-panel default-resolution sweep is run
once per session and reused by the acceptance tests."""

import os

import pytest
from hypothesis import HealthCheck, settings

from qctransition import ExperimentSetup, convergence_study, epsilon_sweep

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=40,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

# six-panel classical-to-quantum ladder at default resolution
DEFAULT_EPSILONS = (0.0, 0.02, 0.05, 0.2, 0.6, 1.0)


@pytest.fixture(scope="session")
def default_setup() -> ExperimentSetup:
    return ExperimentSetup()


@pytest.fixture(scope="session")
def default_sweep(default_setup):
    """All six panels at default resolution (the expensive part, ~1 min)."""
    workers = min(len(DEFAULT_EPSILONS), os.cpu_count() or 1)
    items = epsilon_sweep(list(DEFAULT_EPSILONS), default_setup, workers=workers)
    failed = [i for i in items if not i.ok]
    assert not failed, f"sweep failures: {[(i.epsilon, i.error) for i in failed]}"
    return {item.epsilon: item.panel for item in items}


@pytest.fixture(scope="session")
def convergence_result():
    """Three-level dx-halving study on a reduced horizon (shared, ~5 s)."""
    setup = ExperimentSetup(extent_over_sigma=40.0, n_points=512, t_final=5.0)
    return convergence_study(setup, epsilon=1.0, levels=3)
