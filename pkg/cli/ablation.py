"""
Ablation sweeps.

A grid file declares, per axis, the values to try; each cell changes one axis
of the base config, trains on the training split and evaluates on the test
split. Axes: ``regions`` (region-group combinations), ``k_neighbors``,
``aggregators`` (named aggregator sets) and ``points`` (points aggregated).
"""

from __future__ import annotations

import time
from pathlib import Path
from typing import Any, Iterator, Optional, Sequence

import pandas as pd
import yaml
from pydantic import BaseModel, ConfigDict, ValidationError

from errors import ConfigError
from logging_config import get_logger
from pipeline import PipelineConfig, build_config, evaluate, fit_pipeline

logger = get_logger(__name__)

GRIDS = ("regions", "k_neighbors", "aggregators", "points")
ABLATION_COLUMNS = [
    "grid", "cell", "k_neighbors", "regions", "aggregators", "points",
    "feature_dim", "selected", "overall", "class_avg",
]


class AblationGrid(BaseModel):
    model_config = ConfigDict(extra="forbid")

    regions: list[list[str]] = []
    k_neighbors: list[int] = []
    aggregators: dict[str, list[str]] = {}
    points: list[int] = []


def load_grid(path: str | Path) -> AblationGrid:
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    except OSError as e:
        raise ConfigError(f"Cannot read ablation grid {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"{path}: invalid YAML: {e}") from e
    try:
        return AblationGrid.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"{path}: invalid ablation grid: {e}") from e


def _cell_config(base: PipelineConfig, **changes: Any) -> PipelineConfig:
    values = {**base.model_dump(), **changes, "n_features": None}
    config = build_config(values)
    if base.n_features is not None:
        n = min(base.n_features, config.feature_dim)
        if n < base.n_features:
            logger.info(f"Cell feature length {config.feature_dim} < n_features={base.n_features}; keeping all")
        config = config.with_overrides(n_features=n)
    return config


def ablation_cells(
    grid: AblationGrid, base: PipelineConfig, grids: Sequence[str] = GRIDS
) -> Iterator[tuple[str, str, PipelineConfig]]:
    """(grid name, cell name, config) in declaration order."""
    unknown = set(grids) - set(GRIDS)
    if unknown:
        raise ConfigError(f"Unknown ablation grid(s) {sorted(unknown)}; choose from {list(GRIDS)}")
    if "regions" in grids:
        for groups in grid.regions:
            yield "regions", "+".join(groups), _cell_config(base, regions=groups)
    if "k_neighbors" in grids:
        for k in grid.k_neighbors:
            yield "k_neighbors", f"K={k}", _cell_config(base, k_neighbors=k)
    if "aggregators" in grids:
        for name, aggregators in grid.aggregators.items():
            yield "aggregators", name, _cell_config(base, aggregators=aggregators)
    if "points" in grids:
        for m in grid.points:
            if m > base.num_points:
                logger.warning(f"Skipping points={m}: exceeds num_points={base.num_points}")
                continue
            yield "points", f"{m}", _cell_config(base, aggregation_points=m)


def run_ablation(
    grid: AblationGrid,
    base: PipelineConfig,
    train_set: Any,
    test_set: Any,
    grids: Sequence[str] = GRIDS,
    timings: Optional[dict[str, float]] = None,
) -> pd.DataFrame:
    rows = []
    for grid_name, cell, config in ablation_cells(grid, base, grids):
        logger.info(f"🔬 Ablation {grid_name}: {cell} (feature length {config.feature_dim})")
        start = time.perf_counter()
        model, summary = fit_pipeline(train_set, config)
        report = evaluate(model, test_set)
        if timings is not None:
            timings[f"{grid_name}/{cell}"] = time.perf_counter() - start
        rows.append({
            "grid": grid_name,
            "cell": cell,
            "k_neighbors": config.k_neighbors,
            "regions": ",".join(config.regions),
            "aggregators": ",".join(config.aggregators),
            "points": config.aggregation_points or config.num_points,
            "feature_dim": config.feature_dim,
            "selected": summary.selected,
            "overall": report.overall_accuracy,
            "class_avg": report.class_avg_accuracy,
        })
        logger.info(f"   overall {report.overall_accuracy:.4f}, class-avg {report.class_avg_accuracy:.4f}")
    return pd.DataFrame(rows, columns=ABLATION_COLUMNS)
