from aggregation.regions import (
    REGION_GROUPS, RegionSpec, RegionSet, build_regions, default_regions,
    region_membership, region_sizes,
)
from aggregation.functions import AGGREGATORS, parse_aggregators, aggregate
from aggregation.feature import build_feature, feature_length

__all__ = [
    "REGION_GROUPS", "RegionSpec", "RegionSet", "build_regions", "default_regions",
    "region_membership", "region_sizes",
    "AGGREGATORS", "parse_aggregators", "aggregate",
    "build_feature", "feature_length",
]
