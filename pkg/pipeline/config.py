"""
PipelineConfig and its loaders.

Config files are either YAML mappings (.yaml / .yml) or flat ``key = value``
lines. ``--override key=value`` strings are typed with yaml.safe_load and win
over file values.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Iterable, Literal, Mapping, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from aggregation import AGGREGATORS, REGION_GROUPS, RegionSet, build_regions, feature_length, parse_aggregators
from descriptor import DESCRIPTOR_DIM
from errors import ConfigError
from logging_config import get_logger

logger = get_logger(__name__)


class PipelineConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    # stage 1
    k_neighbors: int = Field(32, ge=1)
    num_points: int = Field(1024, ge=1)
    knn_method: Literal["auto", "brute", "kdtree"] = "auto"
    saab_samples: Optional[int] = Field(None, ge=1)
    # stage 2
    theta1_deg: float = Field(75.0, gt=0.0, lt=90.0)
    theta2_deg: float = Field(45.0, gt=0.0, lt=90.0)
    delta: float = Field(1.0, gt=0.0)
    regions: tuple[str, ...] = REGION_GROUPS
    aggregators: tuple[str, ...] = AGGREGATORS
    aggregation_points: Optional[int] = Field(None, ge=1)
    # stage 3
    dft_bins: int = Field(32, ge=1)
    n_features: Optional[int] = Field(None, ge=1)
    ridge: float = Field(1e-4, ge=0.0)
    # run
    seed: int = Field(0, ge=0)
    augment: bool = False
    augment_copies: int = Field(1, ge=1)
    jitter_sigma: float = Field(0.01, ge=0.0)
    jitter_clip: float = Field(0.05, ge=0.0)

    @field_validator("aggregators", mode="before")
    @classmethod
    def _parse_aggregators(cls, v: Any) -> tuple[str, ...]:
        try:
            return parse_aggregators(v)
        except ConfigError as e:
            raise ValueError(str(e)) from e

    @field_validator("regions", mode="before")
    @classmethod
    def _parse_regions(cls, v: Any) -> tuple[str, ...]:
        if isinstance(v, str):
            v = [g for g in v.split(",") if g.strip()]
        groups = tuple(str(g).strip().lower() for g in v)
        if not groups or set(groups) - set(REGION_GROUPS) or len(set(groups)) != len(groups):
            raise ValueError(f"regions must be a non-empty subset of {list(REGION_GROUPS)}, got {list(groups)}")
        return tuple(g for g in REGION_GROUPS if g in groups)

    @model_validator(mode="after")
    def _check_counts(self) -> "PipelineConfig":
        if self.k_neighbors >= self.num_points:
            raise ValueError(f"k_neighbors={self.k_neighbors} needs num_points > k (got {self.num_points})")
        if self.aggregation_points is not None and self.aggregation_points > self.num_points:
            raise ValueError(f"aggregation_points={self.aggregation_points} exceeds num_points={self.num_points}")
        if self.n_features is not None and self.n_features > self.feature_dim:
            raise ValueError(f"n_features={self.n_features} exceeds feature length {self.feature_dim}")
        return self

    def region_set(self) -> RegionSet:
        return build_regions(self.regions, self.theta1_deg, self.theta2_deg, self.delta)

    @property
    def feature_dim(self) -> int:
        return feature_length(len(self.region_set()), len(self.aggregators), DESCRIPTOR_DIM)

    def with_overrides(self, **changes: Any) -> "PipelineConfig":
        return build_config({**self.model_dump(), **changes})


PRESETS: dict[str, dict[str, Any]] = {
    "modelnet40": {"k_neighbors": 32, "theta1_deg": 75.0, "theta2_deg": 45.0,
                   "num_points": 1024, "n_features": 1569},
    "scanobjectnn": {"k_neighbors": 48, "theta1_deg": 65.0, "theta2_deg": 65.0,
                     "num_points": 1024, "n_features": 1108, "augment": True},
}


def build_config(values: Mapping[str, Any]) -> PipelineConfig:
    try:
        return PipelineConfig.model_validate(dict(values))
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in e.errors()
        )
        raise ConfigError(f"Invalid pipeline config: {problems}") from e


def preset(name: str) -> PipelineConfig:
    if name not in PRESETS:
        raise ConfigError(f"Unknown preset '{name}'; choose from {sorted(PRESETS)}")
    return build_config(PRESETS[name])


def _parse_value(raw: str) -> Any:
    try:
        return yaml.safe_load(raw)
    except yaml.YAMLError:
        return raw


def parse_flat(text: str, source: str = "<config>") -> dict[str, Any]:
    values: dict[str, Any] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, raw = line.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got '{line}'")
        values[key.strip()] = _parse_value(raw.strip())
    return values


def parse_overrides(overrides: Iterable[str]) -> dict[str, Any]:
    values: dict[str, Any] = {}
    for item in overrides:
        key, sep, raw = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"Override '{item}' is not of the form key=value")
        key = key.strip()
        if key not in PipelineConfig.model_fields:
            raise ConfigError(f"Unknown config key '{key}' in override")
        values[key] = _parse_value(raw.strip())
    return values


def read_config_file(path: str | Path) -> dict[str, Any]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read config file {path}: {e}") from e
    if path.suffix.lower() in (".yaml", ".yml"):
        try:
            data = yaml.safe_load(text) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"{path}: invalid YAML: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected a mapping of config keys")
        return data
    return parse_flat(text, source=str(path))


def load_config(path: Optional[str | Path] = None, overrides: Iterable[str] = ()) -> PipelineConfig:
    values: dict[str, Any] = {}
    if path is not None:
        values.update(read_config_file(path))
        unknown = sorted(set(values) - set(PipelineConfig.model_fields))
        if unknown:
            raise ConfigError(f"{path}: unknown config key(s) {unknown}")
    values.update(parse_overrides(overrides))
    config = build_config(values)
    logger.debug(f"Loaded config: {config.model_dump()}")
    return config
