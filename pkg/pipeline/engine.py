"""
Train / infer orchestration over the three stages.

    stage 1  normalize -> downsample -> knn -> octant descriptors -> Saab   (unsupervised)
    stage 2  region aggregation                                              (unsupervised)
    stage 3  standardize -> DFT selection -> LLSR                            (supervised)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Protocol, Sequence

import numpy as np

from aggregation import RegionSet
from classifier import LlsrModel, predict_batch
from descriptor import SaabAccumulator, SaabTransform
from errors import ConfigError, InvalidInputError
from logging_config import StageTimer, get_logger
from pipeline.config import PipelineConfig
from pipeline.metrics import EvalReport, evaluation_report
from pipeline.parallel import ordered_map
from pipeline.stages import AggregationStage, DecisionStage, PointwiseStage, SelectionStage
from selection import Standardizer

logger = get_logger(__name__)

FORMAT_VERSION = 1

# views whose descriptors are held in memory at once during the Saab pass
SAAB_CHUNK = 64


class LabeledSamples(Protocol):
    clouds: Sequence[np.ndarray]
    labels: np.ndarray
    class_names: Sequence[str]


@dataclass(frozen=True, eq=False)
class PipelineModel:
    config: PipelineConfig
    saab: SaabTransform
    regions: RegionSet
    standardizer: Standardizer
    selected: np.ndarray
    classifier: LlsrModel
    class_names: tuple[str, ...]
    format_version: int = FORMAT_VERSION

    def __post_init__(self) -> None:
        m = self.saab.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1] or self.saab.energies.shape != (m.shape[0],):
            raise InvalidInputError(f"Saab matrix must be square, got {self.saab.matrix.shape}")
        if self.standardizer.mean.ndim != 1 or self.standardizer.mean.shape != self.standardizer.std.shape:
            raise InvalidInputError("Standardizer mean and std lengths differ")
        if self.classifier.weights.ndim != 2 or self.classifier.class_labels.shape != (self.classifier.n_classes,):
            raise InvalidInputError("Classifier labels do not match its weight columns")
        full = self.standardizer.mean.shape[0]
        if self.selected.size and int(self.selected.max()) >= full:
            raise InvalidInputError(f"Selected index {int(self.selected.max())} outside feature length {full}")
        if self.classifier.n_features != self.selected.size:
            raise InvalidInputError(
                f"Classifier expects {self.classifier.n_features} features, {self.selected.size} selected"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PipelineModel):
            return NotImplemented
        return (
            self.config == other.config
            and self.saab == other.saab
            and tuple(self.regions) == tuple(other.regions)
            and self.standardizer == other.standardizer
            and np.array_equal(self.selected, other.selected)
            and self.selected.dtype == other.selected.dtype
            and self.classifier == other.classifier
            and self.class_names == other.class_names
            and self.format_version == other.format_version
        )

    def class_name(self, class_id: int) -> str:
        if 0 <= class_id < len(self.class_names):
            return self.class_names[class_id]
        return str(class_id)


@dataclass
class TrainingSummary:
    samples: int
    views: int
    feature_dim: int
    selected: int
    elbow: Optional[int]
    training_accuracy: float
    seconds: dict[str, float] = field(default_factory=dict)


def extract_features(cloud: np.ndarray, saab: SaabTransform, regions: RegionSet, config: PipelineConfig) -> np.ndarray:
    """FeatureVector for one cloud under a fitted Saab transform."""
    pointwise = PointwiseStage(config)
    aggregation = AggregationStage(config)
    aggregation.regions = tuple(regions)
    pts = pointwise.points(cloud)
    return aggregation.run(pts, pointwise.spectral(pts, saab))


def extract_batch(clouds: Sequence[np.ndarray], saab: SaabTransform, regions: RegionSet,
                  config: PipelineConfig) -> np.ndarray:
    if len(clouds) == 0:
        return np.zeros((0, config.feature_dim))
    rows = ordered_map(lambda c: extract_features(c, saab, regions, config), clouds)
    return np.vstack(rows)


def _training_views(n_samples: int, config: PipelineConfig) -> list[tuple[int, int]]:
    copies = config.augment_copies if config.augment else 0
    return [(i, c) for i in range(n_samples) for c in range(copies + 1)]


def fit_pipeline(dataset: LabeledSamples, config: PipelineConfig) -> tuple[PipelineModel, TrainingSummary]:
    labels = np.asarray(dataset.labels, dtype=np.int64).reshape(-1)
    clouds = list(dataset.clouds)
    if len(clouds) != labels.shape[0]:
        raise InvalidInputError(f"{len(clouds)} clouds but {labels.shape[0]} labels")
    if np.unique(labels).size < 2:
        raise InvalidInputError("Training needs at least two classes")

    pointwise = PointwiseStage(config)
    aggregation = AggregationStage(config)
    selection = SelectionStage(config)
    decision = DecisionStage(config)
    views = _training_views(len(clouds), config)
    view_labels = labels[[i for i, _ in views]]
    seconds: dict[str, float] = {}
    logger.info(f"Training on {len(clouds)} samples ({len(views)} views), feature length {config.feature_dim}")

    # stage 1: Saab fit on every training view's descriptors, streamed in sample order
    accumulator = SaabAccumulator()

    def saab_rows(view: tuple[int, int]) -> np.ndarray:
        i, copy = view
        raw = pointwise.raw_descriptors(pointwise.points(clouds[i], i, copy))
        return pointwise.saab_rows(raw, i)

    with StageTimer(logger, pointwise.name, count=len(views)) as timer:
        for start in range(0, len(views), SAAB_CHUNK):
            for rows in ordered_map(saab_rows, views[start:start + SAAB_CHUNK]):
                accumulator.update(rows)
        saab = accumulator.finalize()
    seconds[timer.stage] = timer.seconds

    # stage 2
    def view_feature(view: tuple[int, int]) -> np.ndarray:
        i, copy = view
        pts = pointwise.points(clouds[i], i, copy)
        return aggregation.run(pts, pointwise.spectral(pts, saab))

    with StageTimer(logger, aggregation.name, count=len(views)) as timer:
        features = np.vstack(ordered_map(view_feature, views))
    seconds[timer.stage] = timer.seconds

    # stage 3
    with StageTimer(logger, selection.name, count=features.shape[1]) as timer:
        standardizer, dft = selection.fit(features, view_labels)
    seconds[timer.stage] = timer.seconds
    with StageTimer(logger, decision.name, count=int(dft.selected.size)) as timer:
        selected = dft.selected.astype(np.int64)
        train_x = standardizer.apply(features)[:, selected]
        classifier = decision.fit(train_x, view_labels)
    seconds[timer.stage] = timer.seconds

    predicted, _ = predict_batch(classifier, train_x)
    accuracy = float(np.mean(predicted == view_labels))
    model = PipelineModel(
        config=config,
        saab=saab,
        regions=aggregation.regions,
        standardizer=standardizer,
        selected=selected,
        classifier=classifier,
        class_names=tuple(dataset.class_names),
    )
    summary = TrainingSummary(
        samples=len(clouds), views=len(views), feature_dim=features.shape[1], selected=int(selected.size),
        elbow=dft.elbow, training_accuracy=accuracy, seconds=seconds,
    )
    logger.info(f"✅ Training finished in {sum(seconds.values()):.2f}s; training accuracy {accuracy:.4f}")
    return model, summary


def train(dataset: LabeledSamples, config: PipelineConfig) -> PipelineModel:
    return fit_pipeline(dataset, config)[0]


def classify_batch(model: PipelineModel, clouds: Sequence[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    if len(clouds) == 0:
        return np.zeros(0, dtype=np.int64), np.zeros((0, model.classifier.n_classes))
    features = extract_batch(clouds, model.saab, model.regions, model.config)
    x = model.standardizer.apply(features)[:, model.selected]
    labels, scores = predict_batch(model.classifier, x)
    return labels.astype(np.int64), scores


def classify(model: PipelineModel, cloud: np.ndarray) -> tuple[int, np.ndarray]:
    labels, scores = classify_batch(model, [cloud])
    return int(labels[0]), scores[0]


def model_label_ids(model: PipelineModel, dataset: LabeledSamples) -> np.ndarray:
    """Dataset labels re-expressed as the model's class ids, matched by class name."""
    name_to_id = {name: i for i, name in enumerate(model.class_names)}
    missing = sorted(set(dataset.class_names) - set(name_to_id))
    if missing:
        raise ConfigError(f"Dataset classes {missing} are unknown to the model")
    remap = np.array([name_to_id[name] for name in dataset.class_names], dtype=np.int64)
    labels = np.asarray(dataset.labels, dtype=np.int64).reshape(-1)
    if labels.size and (labels.min() < 0 or labels.max() >= remap.size):
        raise InvalidInputError(f"Labels must lie in [0, {remap.size}), got range [{labels.min()}, {labels.max()}]")
    return remap[labels]


def evaluate(model: PipelineModel, dataset: LabeledSamples) -> EvalReport:
    truth = model_label_ids(model, dataset)
    predicted, _ = classify_batch(model, list(dataset.clouds))
    return evaluation_report(truth, predicted, model.class_names)
