# tests/test_acceptance.py
"""End-to-end run on the 4-class synthetic shape set. Run with ``pytest -m slow``."""
import pytest

from dataset import make_synthetic
from pipeline import evaluate, fit_pipeline, preset

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def splits():
    train = make_synthetic(per_class=100, n_points=1024, seed=0)
    test = make_synthetic(per_class=40, n_points=1024, seed=1)
    return train, test


class TestSyntheticShapes:
    def test_overall_accuracy(self, splits):
        train, test = splits
        model, summary = fit_pipeline(train, preset("modelnet40"))
        assert summary.feature_dim == 1680
        assert summary.selected == 1569
        report = evaluate(model, test)
        assert report.overall_accuracy >= 0.90
        assert report.class_avg_accuracy >= 0.85
