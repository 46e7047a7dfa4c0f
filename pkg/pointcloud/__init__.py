from pointcloud.cloud import (
    PointCloud, as_points, normalize, downsample, augment,
    rotation_about_z, subsample_indices, sample_seed,
)
from pointcloud.neighbors import NeighborIndex, knn, knn_brute_force

__all__ = [
    "PointCloud", "as_points", "normalize", "downsample", "augment",
    "rotation_about_z", "subsample_indices", "sample_seed",
    "NeighborIndex", "knn", "knn_brute_force",
]
