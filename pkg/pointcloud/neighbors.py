"""
K-nearest-neighbor search with self exclusion and index tie-breaking.

Two engines share one distance formula so their results are identical:
a chunked brute-force scan, and a scipy cKDTree over-fetch whose rows are
re-ranked with the brute-force arithmetic. Rows whose tie boundary cannot be
certified from the tree's candidates are recomputed by brute force.
"""

from __future__ import annotations

from typing import Literal

import numpy as np
import numpy.typing as npt
from scipy.spatial import cKDTree

from errors import InvalidInputError
from logging_config import get_logger
from pointcloud.cloud import as_points

logger = get_logger(__name__)

NeighborIndex = npt.NDArray[np.int64]

BRUTE_FORCE_MAX_POINTS = 2048
KDTREE_MARGIN = 8
_ROW_CHUNK = 256


def _sq_dist(query: np.ndarray, cand: np.ndarray) -> np.ndarray:
    return ((query - cand) ** 2).sum(axis=-1)


def _rank(d2: np.ndarray, cand: np.ndarray, k: int) -> np.ndarray:
    # ascending distance, ties by ascending point index
    order = np.lexsort((cand, d2), axis=-1)
    return np.take_along_axis(cand, order[:, :k], axis=-1)


def _brute_rows(pts: np.ndarray, rows: np.ndarray, k: int) -> NeighborIndex:
    n = pts.shape[0]
    out = np.empty((rows.shape[0], k), dtype=np.int64)
    all_idx = np.arange(n, dtype=np.int64)
    for start in range(0, rows.shape[0], _ROW_CHUNK):
        block = rows[start:start + _ROW_CHUNK]
        d2 = _sq_dist(pts[block, None, :], pts[None, :, :])
        d2[np.arange(block.shape[0]), block] = np.inf
        cand = np.broadcast_to(all_idx, d2.shape)
        out[start:start + block.shape[0]] = _rank(d2, cand, k)
    return out


def knn_brute_force(cloud: npt.ArrayLike, k: int) -> NeighborIndex:
    pts = as_points(cloud)
    _check_k(pts.shape[0], k)
    return _brute_rows(pts, np.arange(pts.shape[0]), k)


def _knn_kdtree(pts: np.ndarray, k: int) -> NeighborIndex:
    n = pts.shape[0]
    m = min(n, k + 1 + KDTREE_MARGIN)
    tree = cKDTree(pts)
    _, cand = tree.query(pts, k=m)
    cand = cand.astype(np.int64)

    d2 = _sq_dist(pts[:, None, :], pts[cand])
    d2[cand == np.arange(n)[:, None]] = np.inf
    result = _rank(d2, cand, k)

    if m == n:
        return result
    kth = np.sort(d2, axis=1)[:, k - 1]
    farthest = np.where(np.isinf(d2), -np.inf, d2).max(axis=1)
    uncertain = np.nonzero(~(farthest > kth * (1.0 + 1e-9) + 1e-300))[0]
    if uncertain.size:
        logger.debug(f"kd-tree tie boundary uncertain for {uncertain.size} rows, rescanning")
        result[uncertain] = _brute_rows(pts, uncertain, k)
    return result


def _check_k(n: int, k: int) -> None:
    if k < 1:
        raise InvalidInputError(f"k must be at least 1 (got {k})")
    if k >= n:
        raise InvalidInputError(f"k={k} needs at least {k + 1} points, cloud has {n}")


def knn(
    cloud: npt.ArrayLike,
    k: int,
    method: Literal["auto", "brute", "kdtree"] = "auto",
) -> NeighborIndex:
    """
    Return a (N, k) array of neighbor indices per point, self excluded, sorted
    by ascending Euclidean distance with ties broken by ascending index.
    """
    pts = as_points(cloud)
    n = pts.shape[0]
    _check_k(n, k)
    if method == "auto":
        method = "brute" if n <= BRUTE_FORCE_MAX_POINTS else "kdtree"
    if method == "brute":
        return _brute_rows(pts, np.arange(n), k)
    if method == "kdtree":
        return _knn_kdtree(pts, k)
    raise InvalidInputError(f"Unknown knn method '{method}'")
