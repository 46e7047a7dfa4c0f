"""
Seeded synthetic shape classes for desk-scale end-to-end checks.

Every sample is a surface sampling of its class shape with a random per-axis
scale, a random rotation about z and small Gaussian noise.
"""

from __future__ import annotations

from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from dataset.loader import LabeledDataset
from dataset.manifest import ManifestEntry, write_manifest
from dataset.points import write_points
from errors import InvalidInputError
from logging_config import get_logger
from pointcloud import rotation_about_z, sample_seed

logger = get_logger(__name__)

SCALE_RANGE = (0.85, 1.15)
NOISE_SIGMA = 0.01


def _unit_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def sphere(rng: np.random.Generator, n: int) -> np.ndarray:
    return _unit_vectors(rng, n)


def box(rng: np.random.Generator, n: int) -> np.ndarray:
    half = np.array([1.0, 0.7, 0.5])
    # pick a face pair by area, then a uniform point on it
    areas = np.array([half[1] * half[2], half[0] * half[2], half[0] * half[1]])
    axis = rng.choice(3, size=n, p=areas / areas.sum())
    pts = rng.uniform(-1.0, 1.0, size=(n, 3)) * half
    sign = rng.choice([-1.0, 1.0], size=n)
    pts[np.arange(n), axis] = sign * half[axis]
    return pts


def cylinder(rng: np.random.Generator, n: int) -> np.ndarray:
    radius, half_height = 0.5, 1.0
    lateral = 2 * np.pi * radius * 2 * half_height
    caps = 2 * np.pi * radius ** 2
    on_side = rng.uniform(size=n) < lateral / (lateral + caps)
    theta = rng.uniform(0.0, 2 * np.pi, size=n)
    r = np.where(on_side, radius, radius * np.sqrt(rng.uniform(size=n)))
    z = np.where(
        on_side,
        rng.uniform(-half_height, half_height, size=n),
        rng.choice([-half_height, half_height], size=n),
    )
    return np.column_stack([r * np.cos(theta), r * np.sin(theta), z])


def two_lobe(rng: np.random.Generator, n: int) -> np.ndarray:
    centers = np.array([[-0.7, 0.0, 0.0], [0.7, 0.0, 0.0]])
    which = rng.integers(0, 2, size=n)
    return 0.6 * _unit_vectors(rng, n) + centers[which]


SHAPES: dict[str, Callable[[np.random.Generator, int], np.ndarray]] = {
    "sphere": sphere,
    "box": box,
    "cylinder": cylinder,
    "two_lobe": two_lobe,
}


def make_sample(shape: str, n_points: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    pts = SHAPES[shape](rng, n_points) * rng.uniform(*SCALE_RANGE, size=3)
    pts = pts @ rotation_about_z(rng.uniform(0.0, 2 * np.pi)).T
    return pts + NOISE_SIGMA * rng.standard_normal(pts.shape)


def make_synthetic(
    shapes: Sequence[str] = tuple(SHAPES),
    per_class: int = 100,
    n_points: int = 1024,
    seed: int = 0,
) -> LabeledDataset:
    unknown = [s for s in shapes if s not in SHAPES]
    if unknown or not shapes:
        raise InvalidInputError(f"Unknown shapes {unknown}; choose from {sorted(SHAPES)}")
    if per_class < 1 or n_points < 1:
        raise InvalidInputError("per_class and n_points must be >= 1")
    clouds, labels = [], []
    for c, shape in enumerate(shapes):
        for i in range(per_class):
            clouds.append(make_sample(shape, n_points, sample_seed(seed, c * per_class + i, 7)))
            labels.append(c)
    return LabeledDataset(clouds=clouds, labels=np.asarray(labels, dtype=np.int64), class_names=tuple(shapes))


def write_synthetic(
    dst_dir: str | Path,
    shapes: Sequence[str] = tuple(SHAPES),
    per_class_train: int = 100,
    per_class_test: int = 40,
    n_points: int = 1024,
    seed: int = 0,
    binary: bool = False,
) -> tuple[Path, Path]:
    """Write train and test splits with their manifests; returns (train.tsv, test.tsv)."""
    dst = Path(dst_dir)
    suffix = ".xyzb" if binary else ".txt"
    manifests = []
    # distinct seeds per split so test clouds never repeat training clouds
    for split, per_class, split_seed in (("train", per_class_train, seed), ("test", per_class_test, seed + 1)):
        data = make_synthetic(shapes, per_class, n_points, split_seed)
        entries = []
        for i, (cloud, label) in enumerate(zip(data.clouds, data.labels)):
            rel = f"{split}/{data.class_names[label]}_{i:04d}{suffix}"
            write_points(cloud, dst / rel, binary=binary)
            entries.append(ManifestEntry(rel, data.class_names[label]))
        manifests.append(write_manifest(dst / f"{split}.tsv", entries, data.class_names, split))  # type: ignore[arg-type]
    logger.info(f"✅ Synthetic dataset written to {dst}: {len(shapes)} classes")
    return manifests[0], manifests[1]
