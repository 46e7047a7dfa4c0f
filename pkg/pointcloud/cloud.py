"""
Point-cloud container helpers: validation, normalization, down-sampling and
training-time augmentation.

A cloud is a float64 array of shape (N, 3). Every function here is pure: inputs
are never modified and randomness comes only from the explicit seed.
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from errors import InvalidInputError

PointCloud = npt.NDArray[np.float64]


def as_points(cloud: npt.ArrayLike) -> PointCloud:
    """Validate and convert to a (N, 3) float64 array with finite entries."""
    pts = np.asarray(cloud, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise InvalidInputError(f"Expected a (N, 3) point array, got shape {pts.shape}")
    if pts.shape[0] < 1:
        raise InvalidInputError("Point cloud is empty")
    if not np.all(np.isfinite(pts)):
        bad = int(np.argwhere(~np.isfinite(pts))[0, 0])
        raise InvalidInputError(f"Non-finite coordinate at point {bad}")
    return pts


def normalize(cloud: npt.ArrayLike) -> PointCloud:
    """Center on the centroid and scale so the farthest point has unit norm."""
    pts = as_points(cloud)
    if np.all(pts == pts[0]):
        # a single repeated point: centering only
        return np.zeros_like(pts)
    centered = pts - pts.mean(axis=0)
    scale = float(np.sqrt((centered ** 2).sum(axis=1)).max())
    return centered / scale


def subsample_indices(n: int, m: int, seed: int) -> npt.NDArray[np.int64]:
    """Uniform draw of m distinct indices out of n."""
    if m < 1 or m > n:
        raise InvalidInputError(f"Cannot sample {m} of {n} points (need 1 <= m <= N)")
    rng = np.random.default_rng(seed)
    return rng.choice(n, size=m, replace=False).astype(np.int64)


def downsample(cloud: npt.ArrayLike, m: int, seed: int) -> PointCloud:
    pts = as_points(cloud)
    return pts[subsample_indices(pts.shape[0], m, seed)]


def rotation_about_z(angle: float) -> npt.NDArray[np.float64]:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0],
                     [s, c, 0.0],
                     [0.0, 0.0, 1.0]])


def augment(
    cloud: npt.ArrayLike,
    seed: int,
    jitter_sigma: float = 0.01,
    jitter_clip: float = 0.05,
    angle: float | None = None,
) -> PointCloud:
    """
    Random rotation about the up (z) axis followed by clipped Gaussian jitter.

    ``angle`` forces the rotation (radians); by default it is drawn uniformly
    from [0, 2*pi) with the same generator that draws the jitter.
    """
    if jitter_sigma < 0 or jitter_clip < 0:
        raise InvalidInputError(
            f"Jitter sigma and clip must be non-negative (got {jitter_sigma}, {jitter_clip})"
        )
    pts = as_points(cloud)
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 2.0 * np.pi)
    if angle is not None:
        theta = float(angle)
    rotated = pts @ rotation_about_z(theta).T
    if jitter_sigma == 0:
        return rotated
    noise = np.clip(jitter_sigma * rng.standard_normal(pts.shape), -jitter_clip, jitter_clip)
    return rotated + noise


def sample_seed(base_seed: int, sample_index: int, stream: int = 0) -> int:
    """Derive an independent, order-free seed for one sample's random draws."""
    seq = np.random.SeedSequence([int(base_seed), int(sample_index), int(stream)])
    return int(seq.generate_state(1, dtype=np.uint32)[0])
