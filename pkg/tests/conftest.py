# tests/conftest.py
import numpy as np
import pytest

from dataset import make_synthetic
from pipeline import PipelineConfig, fit_pipeline


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def small_config():
    return PipelineConfig(k_neighbors=8, num_points=128, dft_bins=16, n_features=48, seed=3)


@pytest.fixture(scope="session")
def two_class_data():
    return make_synthetic(shapes=("sphere", "box"), per_class=12, n_points=160, seed=11)


@pytest.fixture(scope="session")
def trained(small_config, two_class_data):
    """(model, summary) trained once per session on the tiny two-class set."""
    return fit_pipeline(two_class_data, small_config)


@pytest.fixture(scope="session")
def model(trained):
    return trained[0]
