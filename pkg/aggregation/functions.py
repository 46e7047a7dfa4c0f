"""Symmetric per-channel reductions over the descriptors of a point set."""

from __future__ import annotations

from typing import Callable, Iterable

import numpy as np

from errors import ConfigError

# Canonical names and default order
AGGREGATORS = ("max", "mean", "l1", "l2", "std", "var", "min")


def _var(v: np.ndarray) -> np.ndarray:
    # population variance
    return ((v - v.mean(axis=0)) ** 2).mean(axis=0)


_REDUCERS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "max": lambda v: v.max(axis=0),
    "mean": lambda v: v.mean(axis=0),
    "l1": lambda v: np.abs(v).sum(axis=0),
    "l2": lambda v: np.sqrt((v ** 2).sum(axis=0)),
    "std": lambda v: np.sqrt(_var(v)),
    "var": _var,
    "min": lambda v: v.min(axis=0),
}


def parse_aggregators(names: Iterable[str] | str) -> tuple[str, ...]:
    """Canonicalize aggregator names ("L1" -> "l1"); accepts a comma-separated string."""
    if isinstance(names, str):
        names = [n for n in names.split(",") if n.strip()]
    out = tuple(str(n).strip().lower() for n in names)
    unknown = [n for n in out if n not in _REDUCERS]
    if unknown:
        raise ConfigError(f"Unknown aggregator(s) {unknown}; choose from {list(AGGREGATORS)}")
    if not out:
        raise ConfigError("At least one aggregator is required")
    if len(set(out)) != len(out):
        raise ConfigError(f"Duplicate aggregators in {list(out)}")
    return out


def aggregate(descriptors: np.ndarray, members: np.ndarray, aggregators: Iterable[str]) -> np.ndarray:
    """
    Reduce the member rows of ``descriptors`` channel by channel and concatenate
    in aggregator order. An empty member set yields a zero block.
    """
    names = parse_aggregators(aggregators)
    desc = np.asarray(descriptors, dtype=np.float64)
    channels = desc.shape[1]
    idx = np.sort(np.asarray(members, dtype=np.int64))
    if idx.size == 0:
        return np.zeros(len(names) * channels)
    values = desc[idx]
    return np.concatenate([_REDUCERS[name](values) for name in names])
