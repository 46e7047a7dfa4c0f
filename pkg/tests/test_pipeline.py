# tests/test_pipeline.py
import numpy as np
import pytest

from classifier import LlsrModel
from dataset import LabeledDataset, make_synthetic
from descriptor import SaabTransform, fit_saab
from errors import ConfigError, InvalidInputError
from pipeline import (
    PipelineConfig, PipelineModel, build_config, classify, classify_batch, config_parameters, count_parameters,
    dumps_model, estimate_flops, evaluate, evaluation_report, extract_batch, extract_features, fit_pipeline,
    load_config, model_label_ids, preset,
)
from pipeline.stages import PointwiseStage
from pointcloud import normalize
from selection import Standardizer


class TestConfig:
    def test_defaults_give_1680(self):
        assert PipelineConfig().feature_dim == 1680

    def test_presets(self):
        assert preset("modelnet40").n_features == 1569
        scan = preset("scanobjectnn")
        assert (scan.k_neighbors, scan.theta1_deg, scan.theta2_deg, scan.n_features) == (48, 65.0, 65.0, 1108)

    @pytest.mark.parametrize("values", [
        {"k_neighbors": 0}, {"theta1_deg": 90}, {"theta2_deg": 0}, {"aggregators": ["median"]},
        {"aggregators": []}, {"regions": ["sphere"]}, {"k_neighbors": 64, "num_points": 64},
        {"n_features": 2000}, {"unknown_key": 1},
    ])
    def test_invalid(self, values):
        with pytest.raises(ConfigError):
            build_config(values)

    def test_overrides_win_over_file(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# comment\nk_neighbors = 16\ntheta1_deg = 60\naggregators = max,mean\n")
        config = load_config(cfg, ["k_neighbors=48", "theta1_deg=65", "theta2_deg=65"])
        assert (config.k_neighbors, config.theta1_deg, config.theta2_deg) == (48, 65.0, 65.0)
        assert config.aggregators == ("max", "mean")

    def test_yaml_file(self, tmp_path):
        cfg = tmp_path / "run.yaml"
        cfg.write_text("k_neighbors: 20\nregions: [inverted, global]\n")
        config = load_config(cfg)
        assert config.regions == ("global", "inverted")
        assert config.feature_dim == 7 * 24 * 7

    def test_unknown_override(self):
        with pytest.raises(ConfigError):
            load_config(None, ["neighbours=3"])


class TestExtraction:
    @pytest.fixture
    def setup(self, rng):
        config = PipelineConfig(k_neighbors=8, num_points=64, seed=1)
        clouds = [rng.normal(size=(64, 3)) for _ in range(4)]
        stage = PointwiseStage(config)
        saab = fit_saab(np.vstack([stage.raw_descriptors(stage.points(c)) for c in clouds]))
        return config, saab, clouds

    def test_default_length(self, setup):
        config, saab, clouds = setup
        feat = extract_features(clouds[0], saab, config.region_set(), config)
        assert feat.shape == (1680,)

    def test_permutation_invariant(self, setup):
        config, saab, _ = setup
        regions = config.region_set()
        rng = np.random.default_rng(2024)
        for _ in range(100):
            cloud = rng.normal(size=(64, 3)) * rng.uniform(0.5, 3.0, size=3)
            base = extract_features(cloud, saab, regions, config)
            shuffled = extract_features(cloud[rng.permutation(64)], saab, regions, config)
            assert np.abs(shuffled - base).max() <= 1e-9

    def test_identical_clouds(self, setup):
        config, saab, clouds = setup
        regions = config.region_set()
        a = extract_features(clouds[1], saab, regions, config)
        b = extract_features(clouds[1].copy(), saab, regions, config)
        np.testing.assert_array_equal(a, b)

    def test_batch_equals_single(self, setup):
        config, saab, clouds = setup
        regions = config.region_set()
        batch = extract_batch(clouds, saab, regions, config)
        for row, cloud in zip(batch, clouds):
            np.testing.assert_array_equal(row, extract_features(cloud, saab, regions, config))

    def test_aggregation_points_subset(self, setup):
        config, saab, clouds = setup
        sub = config.with_overrides(aggregation_points=32)
        feat = extract_features(clouds[0], saab, sub.region_set(), sub)
        assert feat.shape == (1680,)
        assert not np.array_equal(feat, extract_features(clouds[0], saab, config.region_set(), config))


class TestTraining:
    def test_two_class_training_accuracy(self):
        data = make_synthetic(shapes=("sphere", "box"), per_class=50, n_points=160, seed=2)
        config = PipelineConfig(k_neighbors=8, num_points=128, n_features=64, seed=0)
        model, summary = fit_pipeline(data, config)
        assert summary.training_accuracy >= 0.95
        assert evaluate(model, data).overall_accuracy >= 0.95

    def test_model_shapes(self, model, small_config):
        assert model.saab.matrix.shape == (24, 24)
        assert model.selected.size == small_config.n_features
        assert model.classifier.weights.shape == (small_config.n_features + 1, 2)
        assert model.class_names == ("sphere", "box")

    def test_deterministic_bytes(self, two_class_data, small_config, model):
        again, _ = fit_pipeline(two_class_data, small_config)
        assert dumps_model(again) == dumps_model(model)

    def test_labels_do_not_reach_unsupervised_stages(self, two_class_data, small_config, model):
        shuffled = LabeledDataset(
            clouds=two_class_data.clouds,
            labels=np.random.default_rng(0).permutation(two_class_data.labels),
            class_names=two_class_data.class_names,
        )
        other, _ = fit_pipeline(shuffled, small_config)
        assert other.saab == model.saab
        a = extract_batch(two_class_data.clouds[:3], model.saab, model.regions, small_config)
        b = extract_batch(two_class_data.clouds[:3], other.saab, other.regions, small_config)
        np.testing.assert_array_equal(a, b)

    def test_single_class_rejected(self, small_config):
        data = make_synthetic(shapes=("sphere",), per_class=5, n_points=160)
        with pytest.raises(InvalidInputError):
            fit_pipeline(data, small_config)

    def test_augmented_views(self, two_class_data, small_config):
        config = small_config.with_overrides(augment=True, augment_copies=2)
        _, summary = fit_pipeline(two_class_data, config)
        assert summary.views == 3 * len(two_class_data)


class TestClassify:
    def test_training_sample_keeps_label(self, model, two_class_data):
        labels, _ = classify_batch(model, two_class_data.clouds)
        assert np.mean(labels == two_class_data.labels) >= 0.9

    def test_same_cloud_same_scores(self, model, two_class_data):
        a = classify(model, two_class_data.clouds[0])
        b = classify(model, two_class_data.clouds[0])
        assert a[0] == b[0]
        np.testing.assert_array_equal(a[1], b[1])

    def test_batch_is_map_of_single(self, model, two_class_data):
        clouds = two_class_data.clouds[:5]
        labels, scores = classify_batch(model, clouds)
        for i, cloud in enumerate(clouds):
            label, s = classify(model, cloud)
            assert label == labels[i]
            np.testing.assert_array_equal(s, scores[i])

    def test_empty_batch(self, model):
        labels, scores = classify_batch(model, [])
        assert labels.shape == (0,) and scores.shape == (0, 2)

    def test_too_few_points(self, model):
        with pytest.raises(InvalidInputError):
            classify(model, normalize(np.random.default_rng(0).normal(size=(10, 3))))


class TestEvaluate:
    @pytest.fixture
    def reordered(self, two_class_data):
        """Same clouds, class list reversed and labels re-expressed against it."""
        return LabeledDataset(
            clouds=two_class_data.clouds,
            labels=1 - two_class_data.labels,
            class_names=tuple(reversed(two_class_data.class_names)),
        )

    def test_class_order_does_not_change_metrics(self, model, two_class_data, reordered):
        direct = evaluate(model, two_class_data)
        remapped = evaluate(model, reordered)
        assert remapped.overall_accuracy == direct.overall_accuracy
        assert remapped.confusion == direct.confusion

    def test_labels_mapped_by_name(self, model, two_class_data, reordered):
        np.testing.assert_array_equal(model_label_ids(model, reordered), two_class_data.labels)

    def test_unknown_class_rejected(self, model, two_class_data):
        data = LabeledDataset(clouds=two_class_data.clouds[:2], labels=np.array([0, 1]),
                              class_names=("sphere", "torus"))
        with pytest.raises(ConfigError, match="torus"):
            evaluate(model, data)

    def test_subset_of_model_classes(self, model, two_class_data):
        box = two_class_data.class_names.index("box")
        idx = np.flatnonzero(two_class_data.labels == box)[:3]
        data = LabeledDataset(clouds=[two_class_data.clouds[i] for i in idx], labels=np.zeros(3, dtype=np.int64),
                              class_names=("box",))
        assert model_label_ids(model, data).tolist() == [box] * 3


class TestMetrics:
    def test_all_correct(self):
        r = evaluation_report(np.array([0, 1, 2, 1]), np.array([0, 1, 2, 1]), ["a", "b", "c"])
        assert r.overall_accuracy == r.class_avg_accuracy == 1.0

    def test_half_and_half(self):
        truth = np.repeat([0, 1], 10)
        r = evaluation_report(truth, np.zeros(20, dtype=int), ["a", "b"])
        assert r.overall_accuracy == 0.5
        assert r.class_avg_accuracy == 0.5

    def test_imbalanced(self):
        truth = np.array([0] * 90 + [1] * 10)
        r = evaluation_report(truth, np.zeros(100, dtype=int), ["a", "b"])
        assert r.overall_accuracy == pytest.approx(0.9)
        assert r.class_avg_accuracy == pytest.approx(0.5)
        assert r.confusion == [[90, 0], [10, 0]]

    def test_classes_without_samples_skipped(self):
        r = evaluation_report(np.array([0, 0]), np.array([0, 2]), ["a", "b", "c"])
        assert set(r.per_class_accuracy) == {"a"}
        assert r.class_avg_accuracy == 0.5
        cm = np.array(r.confusion)
        assert r.overall_accuracy == np.trace(cm) / cm.sum()


class TestComplexity:
    def test_parameter_counts_match_stored_weights(self, model):
        counts = count_parameters(model)
        assert counts["filter"] == 576
        assert counts["total"] == counts["filter"] + counts["classifier"]
        assert counts["classifier"] == model.classifier.weights.size

    def test_preset_parameters(self):
        assert config_parameters(preset("modelnet40"), n_classes=40) == {
            "filter": 576, "classifier": 62_800, "total": 63_376}
        assert config_parameters(preset("scanobjectnn"), n_classes=15)["classifier"] == 16_635

    def test_config_count_matches_trained_model(self, model):
        expected = config_parameters(model.config, n_classes=2, n_selected=int(model.selected.size))
        assert count_parameters(model) == expected

    def test_saab_and_classifier_stage(self):
        report = estimate_flops(preset("modelnet40"), n_points=1024, n_classes=40)
        assert report.stages["saab"] == 1_179_648
        assert report.stages["classifier"] == 125_600
        assert report.stages["aggregation"] == 10 * 24 * (15 * 1024 + 4)

    def test_headline_within_factor_four(self):
        report = estimate_flops(preset("modelnet40"), n_points=1024, n_classes=40)
        assert report.headline == sum(report.stages[s] for s in ("saab", "aggregation", "classifier"))
        assert 2.3e6 / 4 <= report.headline <= 2.3e6 * 4
        assert report.total > report.headline

    def test_measured_region_sizes(self):
        config = preset("modelnet40")
        full = estimate_flops(config, n_classes=40)
        measured = estimate_flops(config, n_classes=40, region_sizes=[1024] + [300] * 9)
        assert measured.stages["aggregation"] < full.stages["aggregation"]

    def test_global_only_classifier(self):
        config = build_config({"regions": ["global"], "n_features": 168})
        assert estimate_flops(config, n_classes=40).stages["classifier"] == 2 * 169 * 40

    def test_modelnet40_scale_parameters(self):
        config = preset("modelnet40")
        model = PipelineModel(
            config=config,
            saab=SaabTransform(matrix=np.eye(24), energies=np.ones(24)),
            regions=config.region_set(),
            standardizer=Standardizer(mean=np.zeros(1680), std=np.ones(1680)),
            selected=np.arange(1569, dtype=np.int64),
            classifier=LlsrModel(weights=np.zeros((1570, 40)), class_labels=np.arange(40)),
            class_names=tuple(f"c{i}" for i in range(40)),
        )
        assert count_parameters(model) == {"filter": 576, "classifier": 62_800, "total": 63_376}

    def test_inconsistent_model_rejected(self):
        config = preset("modelnet40")
        with pytest.raises(InvalidInputError):
            PipelineModel(
                config=config,
                saab=SaabTransform(matrix=np.eye(24), energies=np.ones(24)),
                regions=config.region_set(),
                standardizer=Standardizer(mean=np.zeros(1680), std=np.ones(1680)),
                selected=np.arange(10, dtype=np.int64),
                classifier=LlsrModel(weights=np.zeros((12, 2)), class_labels=np.arange(2)),
                class_names=("a", "b"),
            )
