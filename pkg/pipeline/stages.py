"""
The three pipeline stages as small executor objects.

Stages 1 and 2 are unsupervised and never see labels; stage 3 (selection and
decision) is the only place labels enter.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from aggregation import build_feature
from classifier import LlsrModel
from classifier import fit as fit_llsr
from descriptor import SaabTransform, apply_saab, octant_descriptors
from pipeline.config import PipelineConfig
from pointcloud import augment, downsample, knn, normalize, sample_seed, subsample_indices
from selection import DftResult, Standardizer, rank_and_select

# seed streams
DOWNSAMPLE_STREAM = 0
AGGREGATION_STREAM = 1
SAAB_SAMPLE_STREAM = 2
AUGMENT_STREAM = 100


class PointwiseStage:
    name = "pointwise"
    description = "Normalize, down-sample, KNN octant descriptors and Saab filtering."

    def __init__(self, config: PipelineConfig):
        self.config = config

    def points(self, cloud: np.ndarray, sample_index: Optional[int] = None, copy: int = 0) -> np.ndarray:
        """Normalized, down-sampled cloud; copy > 0 adds a seeded augmentation."""
        cfg = self.config
        pts = normalize(cloud)
        pts = downsample(pts, cfg.num_points, seed=sample_seed(cfg.seed, 0, DOWNSAMPLE_STREAM))
        if copy > 0:
            seed = sample_seed(cfg.seed, sample_index or 0, AUGMENT_STREAM + copy)
            pts = augment(pts, seed=seed, jitter_sigma=cfg.jitter_sigma, jitter_clip=cfg.jitter_clip)
        return pts

    def raw_descriptors(self, pts: np.ndarray) -> np.ndarray:
        neighbors = knn(pts, self.config.k_neighbors, method=self.config.knn_method)
        return octant_descriptors(pts, neighbors)

    def saab_rows(self, raw: np.ndarray, sample_index: int) -> np.ndarray:
        """Rows of one sample that feed the Saab fit (all, or a seeded subset)."""
        n = self.config.saab_samples
        if n is None or n >= raw.shape[0]:
            return raw
        idx = subsample_indices(raw.shape[0], n, sample_seed(self.config.seed, sample_index, SAAB_SAMPLE_STREAM))
        return raw[np.sort(idx)]

    def spectral(self, pts: np.ndarray, saab: SaabTransform) -> np.ndarray:
        return apply_saab(saab, self.raw_descriptors(pts))


class AggregationStage:
    name = "aggregation"
    description = "Seven symmetric reductions over global, cone and inverted-cone regions."

    def __init__(self, config: PipelineConfig):
        self.config = config
        self.regions = config.region_set()

    def run(self, pts: np.ndarray, spectral: np.ndarray) -> np.ndarray:
        m = self.config.aggregation_points
        if m is not None and m < pts.shape[0]:
            idx = np.sort(subsample_indices(pts.shape[0], m, sample_seed(self.config.seed, 0, AGGREGATION_STREAM)))
            pts, spectral = pts[idx], spectral[idx]
        return build_feature(pts, spectral, self.regions, self.config.aggregators)


class SelectionStage:
    name = "selection"
    description = "Standardize, rank dimensions with the DFT and keep the most discriminant ones."

    def __init__(self, config: PipelineConfig):
        self.config = config

    def fit(self, features: np.ndarray, labels: np.ndarray) -> tuple[Standardizer, DftResult]:
        standardizer = Standardizer.fit(features)
        result = rank_and_select(
            standardizer.apply(features), labels, bins=self.config.dft_bins, n_features=self.config.n_features
        )
        return standardizer, result


class DecisionStage:
    name = "decision"
    description = "Linear least-squares regression onto one-hot targets."

    def __init__(self, config: PipelineConfig):
        self.config = config

    def fit(self, features: np.ndarray, labels: np.ndarray) -> LlsrModel:
        return fit_llsr(features, labels, ridge=self.config.ridge)
