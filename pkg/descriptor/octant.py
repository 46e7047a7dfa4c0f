"""
Raw 24-D octant descriptor: the centroid of a point's neighbors inside each of
the eight octants around it, in local coordinates.

Octant code b = (x>=0)*4 + (y>=0)*2 + (z>=0); slots are ordered by descending
code, so (+,+,+) occupies entries 0..2 and (-,-,-) entries 21..23. Empty
octants contribute a zero centroid.
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from errors import InvalidInputError
from pointcloud import as_points

N_OCTANTS = 8
DESCRIPTOR_DIM = 3 * N_OCTANTS
# slot i holds octant code OCTANT_CODES[i]
OCTANT_CODES = tuple(range(N_OCTANTS - 1, -1, -1))


def _octant_means(local: np.ndarray) -> np.ndarray:
    """local: (..., K, 3) neighbor offsets -> (..., 24) descriptor."""
    nonneg = local >= 0
    code = nonneg[..., 0] * 4 + nonneg[..., 1] * 2 + nonneg[..., 2]
    slot = (N_OCTANTS - 1) - code
    onehot = (slot[..., None] == np.arange(N_OCTANTS)).astype(np.float64)
    sums = np.einsum("...ks,...kc->...sc", onehot, local)
    counts = onehot.sum(axis=-2)
    means = sums / np.maximum(counts, 1.0)[..., None]
    return means.reshape(*local.shape[:-2], DESCRIPTOR_DIM)


def octant_descriptors(cloud: npt.ArrayLike, neighbors: np.ndarray) -> npt.NDArray[np.float64]:
    """Descriptors for every point; ``neighbors`` is the (N, K) knn index."""
    pts = as_points(cloud)
    nbr = np.asarray(neighbors, dtype=np.int64)
    if nbr.ndim != 2 or nbr.shape[0] != pts.shape[0] or nbr.shape[1] < 1:
        raise InvalidInputError(f"Neighbor index of shape {nbr.shape} does not match {pts.shape[0]} points")
    # canonical summation order: ascending neighbor index
    nbr = np.sort(nbr, axis=1)
    local = pts[nbr] - pts[:, None, :]
    return _octant_means(local)


def octant_descriptor(cloud: npt.ArrayLike, neighbors: np.ndarray, query: int) -> npt.NDArray[np.float64]:
    pts = as_points(cloud)
    row = np.asarray(neighbors, dtype=np.int64)
    if row.ndim == 2:
        row = row[query]
    if row.size == 0:
        raise InvalidInputError(f"Point {query} has no neighbors")
    local = pts[np.sort(row)] - pts[query]
    return _octant_means(local)
