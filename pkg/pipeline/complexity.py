"""
Parameter counts and closed-form FLOP estimates for one inference.

Convention: one multiply-add counts as 2 FLOPs; comparisons, additions and
square roots count 1 each.

    knn            8 N (N-1) + N (N-1) ceil(log2 K)     3 sub + 3 sq + 2 add per pair, then selection
    descriptor     N (6K + 24)                          local offsets, octant sums, means
    saab           2 N 24^2
    membership     12 N per non-global region           dot product, norm, compare
    aggregation    24 per channel per region, per aggregator with n members:
                   max n, min n, mean n, l1 2n, l2 2n+1, var 4n+1, std 4n+2
    standardize    2 D_sel
    classifier     2 (D_sel + 1) C

The headline total covers saab + aggregation + classifier; knn, descriptor,
membership and standardize are reported alongside it.
"""

from __future__ import annotations

import math
from typing import Any, Optional, Sequence

from pydantic import BaseModel

from descriptor import DESCRIPTOR_DIM
from pipeline.config import PipelineConfig

HEADLINE_STAGES = ("saab", "aggregation", "classifier")

_AGGREGATOR_COST = {   # (per-member, constant)
    "max": (1, 0),
    "min": (1, 0),
    "mean": (1, 0),
    "l1": (2, 0),
    "l2": (2, 1),
    "var": (4, 1),
    "std": (4, 2),
}

MEMBERSHIP_FLOPS_PER_POINT = 12


class FlopReport(BaseModel):
    n_points: int
    stages: dict[str, int]
    headline_stages: tuple[str, ...] = HEADLINE_STAGES

    @property
    def headline(self) -> int:
        return sum(self.stages[s] for s in self.headline_stages)

    @property
    def total(self) -> int:
        return sum(self.stages.values())

    def rows(self) -> list[dict[str, Any]]:
        return [
            {"stage": name, "flops": count, "in_headline": name in self.headline_stages}
            for name, count in self.stages.items()
        ]


def count_parameters(model: Any) -> dict[str, int]:
    """Stored weights: Saab kernels plus LLSR weights (bias row included)."""
    filter_params = int(model.saab.matrix.size)
    classifier_params = int(model.classifier.weights.size)
    return {"filter": filter_params, "classifier": classifier_params, "total": filter_params + classifier_params}


def config_parameters(config: PipelineConfig, n_classes: int, n_selected: Optional[int] = None) -> dict[str, int]:
    """Parameter count a model trained under ``config`` will store."""
    d_sel = n_selected or config.n_features or config.feature_dim
    filter_params = DESCRIPTOR_DIM * DESCRIPTOR_DIM
    classifier_params = (d_sel + 1) * n_classes
    return {"filter": filter_params, "classifier": classifier_params, "total": filter_params + classifier_params}


def aggregation_flops(aggregators: Sequence[str], region_sizes: Sequence[int], channels: int = DESCRIPTOR_DIM) -> int:
    total = 0
    for n in region_sizes:
        for name in aggregators:
            per_member, constant = _AGGREGATOR_COST[name]
            total += channels * (per_member * n + constant)
    return total


def estimate_flops(
    config: PipelineConfig,
    n_points: Optional[int] = None,
    n_classes: int = 40,
    n_selected: Optional[int] = None,
    region_sizes: Optional[Sequence[int]] = None,
) -> FlopReport:
    n = n_points or config.num_points
    k = config.k_neighbors
    regions = config.region_set()
    d_sel = n_selected or config.n_features or config.feature_dim
    n_agg = min(config.aggregation_points or n, n)
    if region_sizes is None:
        # upper bound: every region holds every aggregated point
        region_sizes = [n_agg] * len(regions)

    pairs = n * (n - 1)
    stages = {
        "knn": 8 * pairs + pairs * math.ceil(math.log2(k)),
        "descriptor": n * (6 * k + DESCRIPTOR_DIM),
        "saab": 2 * n * DESCRIPTOR_DIM * DESCRIPTOR_DIM,
        "membership": MEMBERSHIP_FLOPS_PER_POINT * n_agg * sum(1 for r in regions if r.kind != "global"),
        "aggregation": aggregation_flops(config.aggregators, region_sizes),
        "standardize": 2 * d_sel,
        "classifier": 2 * (d_sel + 1) * n_classes,
    }
    return FlopReport(n_points=n, stages=stages)
