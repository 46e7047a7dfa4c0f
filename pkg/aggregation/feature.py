"""Object-level feature: region-major, then aggregator, then spectral channel."""

from __future__ import annotations

from typing import Iterable

import numpy as np
import numpy.typing as npt

from aggregation.functions import aggregate, parse_aggregators
from aggregation.regions import RegionSet, region_membership
from errors import InvalidInputError
from logging_config import get_logger
from pointcloud import as_points

logger = get_logger(__name__)


def feature_length(n_regions: int, n_aggregators: int, channels: int = 24) -> int:
    return n_regions * n_aggregators * channels


def build_feature(
    cloud: npt.ArrayLike,
    descriptors: np.ndarray,
    regions: RegionSet,
    aggregators: Iterable[str],
) -> npt.NDArray[np.float64]:
    pts = as_points(cloud)
    desc = np.asarray(descriptors, dtype=np.float64)
    if desc.ndim != 2 or desc.shape[0] != pts.shape[0]:
        raise InvalidInputError(
            f"Need one descriptor per point: {pts.shape[0]} points, descriptors {desc.shape}"
        )
    names = parse_aggregators(aggregators)
    blocks = []
    for spec in regions:
        members = region_membership(spec, pts)
        if members.size == 0:
            logger.debug(f"Region {spec.label} is empty; emitting a zero block")
        blocks.append(aggregate(desc, members, names))
    return np.concatenate(blocks)
