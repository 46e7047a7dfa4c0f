from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from dataset.manifest import DatasetManifest, load_manifest
from dataset.points import load_points
from logging_config import get_logger
from pipeline.parallel import ordered_map
from pointcloud import PointCloud

logger = get_logger(__name__)


@dataclass
class LabeledDataset:
    clouds: list[PointCloud]
    labels: np.ndarray              # int64 class ids into class_names
    class_names: tuple[str, ...]
    paths: Optional[tuple[str, ...]] = None
    split: str = "train"

    def __len__(self) -> int:
        return len(self.clouds)

    def subset(self, indices) -> "LabeledDataset":
        idx = [int(i) for i in indices]
        return LabeledDataset(
            clouds=[self.clouds[i] for i in idx],
            labels=self.labels[idx],
            class_names=self.class_names,
            paths=tuple(self.paths[i] for i in idx) if self.paths is not None else None,
            split=self.split,
        )


def load_dataset(manifest: str | Path | DatasetManifest) -> LabeledDataset:
    """Clouds in manifest order; file reads run on the worker pool."""
    if not isinstance(manifest, DatasetManifest):
        manifest = load_manifest(manifest)
    clouds = ordered_map(lambda e: load_points(manifest.resolve(e)), manifest.entries)
    logger.info(f"Loaded {len(clouds)} clouds ({manifest.split})")
    return LabeledDataset(
        clouds=clouds,
        labels=np.asarray(manifest.labels, dtype=np.int64),
        class_names=manifest.class_names,
        paths=tuple(e.path for e in manifest.entries),
        split=manifest.split,
    )
