"""
Aggregation regions around the object centroid (the origin of a normalized cloud).

- global: every point
- symmetric cone on an axis: |p.a| >= |p| cos(theta1), i.e. within theta1 of
  either direction of the axis; points at the origin are members
- inverted cone: vertex v = s*delta*a, opening back toward the origin with
  half-angle theta2 and truncated at the base plane through the origin
"""

from __future__ import annotations

from typing import Literal, Optional, Sequence

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, model_validator

from errors import ConfigError
from pointcloud import as_points

REGION_GROUPS = ("global", "cone", "inverted")
_AXES = {"x": 0, "y": 1, "z": 2}


class RegionSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["global", "symmetric-cone", "inverted-cone"]
    axis: Optional[Literal["x", "y", "z"]] = None
    orientation: Optional[Literal["+", "-"]] = None
    half_angle: float = 90.0
    delta: Optional[float] = None

    @model_validator(mode="after")
    def _check_geometry(self) -> "RegionSpec":
        if self.kind == "global":
            return self
        if self.axis is None:
            raise ValueError(f"{self.kind} region needs an axis")
        if not 0.0 < self.half_angle < 90.0:
            raise ValueError(f"half_angle must lie in (0, 90), got {self.half_angle}")
        if self.kind == "inverted-cone":
            if self.orientation is None:
                raise ValueError("inverted-cone region needs an orientation")
            if self.delta is None or self.delta <= 0:
                raise ValueError(f"inverted-cone delta must be > 0, got {self.delta}")
        return self

    @property
    def label(self) -> str:
        if self.kind == "global":
            return "global"
        if self.kind == "symmetric-cone":
            return f"cone-{self.axis}"
        return f"inverted{self.orientation}{self.axis}"

    def unit_axis(self) -> np.ndarray:
        a = np.zeros(3)
        a[_AXES[self.axis]] = 1.0
        return a


RegionSet = tuple[RegionSpec, ...]


def build_regions(
    groups: Sequence[str] = REGION_GROUPS,
    theta1: float = 75.0,
    theta2: float = 45.0,
    delta: float = 1.0,
) -> RegionSet:
    """Regions for the requested groups, always in canonical order."""
    unknown = set(groups) - set(REGION_GROUPS)
    if unknown or not groups:
        raise ConfigError(f"Region groups must be a non-empty subset of {REGION_GROUPS}, got {list(groups)}")
    regions: list[RegionSpec] = []
    if "global" in groups:
        regions.append(RegionSpec(kind="global"))
    if "cone" in groups:
        regions += [RegionSpec(kind="symmetric-cone", axis=ax, half_angle=theta1) for ax in "xyz"]
    if "inverted" in groups:
        regions += [
            RegionSpec(kind="inverted-cone", axis=ax, orientation=sign, half_angle=theta2, delta=delta)
            for ax in "xyz" for sign in "+-"
        ]
    return tuple(regions)


def default_regions() -> RegionSet:
    return build_regions()


def region_membership(spec: RegionSpec, cloud: npt.ArrayLike) -> npt.NDArray[np.int64]:
    """Sorted indices of the points inside ``spec``."""
    pts = as_points(cloud)
    if spec.kind == "global":
        return np.arange(pts.shape[0], dtype=np.int64)

    a = spec.unit_axis()
    proj = pts @ a
    if spec.kind == "symmetric-cone":
        norms = np.sqrt((pts ** 2).sum(axis=1))
        inside = np.abs(proj) >= norms * np.cos(np.radians(spec.half_angle))
    else:
        s = 1.0 if spec.orientation == "+" else -1.0
        vertex = s * spec.delta * a
        offset = vertex - pts
        dist = np.sqrt((offset ** 2).sum(axis=1))
        inside = (offset @ (s * a) >= dist * np.cos(np.radians(spec.half_angle))) & (s * proj >= 0)
    return np.flatnonzero(inside).astype(np.int64)


def region_sizes(regions: RegionSet, cloud: npt.ArrayLike) -> list[int]:
    return [int(region_membership(spec, cloud).size) for spec in regions]
