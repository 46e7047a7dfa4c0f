"""
Discriminant Feature Test.

Each dimension is scored independently: B candidate thresholds split its
[lo, hi] range uniformly, every threshold partitions the samples into
value <= t and value > t, and the dimension's loss is the lowest
sample-weighted Shannon entropy (bits) of the class labels over the two sides.
Low loss means a discriminant dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import entropy

from errors import ConfigError, InvalidInputError
from logging_config import get_logger

logger = get_logger(__name__)

DEFAULT_BINS = 32


@dataclass(frozen=True)
class DftResult:
    losses: np.ndarray      # per dimension, bits
    order: np.ndarray       # dimension indices by ascending loss
    selected: np.ndarray    # prefix of order
    bins: int
    elbow: Optional[int] = None
    degenerate: bool = False


def candidate_thresholds(lo: float, hi: float, bins: int) -> np.ndarray:
    b = np.arange(1, bins + 1)
    return lo + b * (hi - lo) / (bins + 1)


def _entropy_rows(counts: np.ndarray) -> np.ndarray:
    totals = counts.sum(axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        h = entropy(counts, base=2, axis=-1)
    # an empty side carries no weight
    return np.where(totals > 0, h, 0.0)


def _encode_labels(labels: np.ndarray) -> tuple[np.ndarray, int]:
    classes, codes = np.unique(labels, return_inverse=True)
    return codes.reshape(-1), classes.size


def _loss(values: np.ndarray, codes: np.ndarray, n_classes: int, bins: int) -> float:
    n = values.shape[0]
    totals = np.bincount(codes, minlength=n_classes).astype(np.float64)
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        return float(_entropy_rows(totals))

    thresholds = candidate_thresholds(lo, hi, bins)
    # slot j: thresholds[j-1] < v <= thresholds[j]; v lies left of threshold b iff b >= slot
    slot = np.searchsorted(thresholds, values, side="left")
    hist = np.zeros((bins + 1, n_classes))
    np.add.at(hist, (slot, codes), 1.0)
    left = np.cumsum(hist, axis=0)[:bins]
    right = totals[None, :] - left
    n_left = left.sum(axis=1)
    weighted = (n_left / n) * _entropy_rows(left) + ((n - n_left) / n) * _entropy_rows(right)
    return float(weighted.min())


def _check_bins(bins: int) -> None:
    if bins < 1:
        raise ConfigError(f"dft_bins must be >= 1, got {bins}")


def dft_loss(feature_values: np.ndarray, labels: np.ndarray, bins: int = DEFAULT_BINS) -> float:
    values = np.asarray(feature_values, dtype=np.float64).reshape(-1)
    labels = np.asarray(labels).reshape(-1)
    _check_bins(bins)
    if values.shape[0] != labels.shape[0]:
        raise InvalidInputError(f"{values.shape[0]} values but {labels.shape[0]} labels")
    if values.shape[0] < 2:
        raise InvalidInputError("DFT needs at least two samples")
    codes, n_classes = _encode_labels(labels)
    if n_classes < 2:
        logger.warning("DFT input holds a single class; loss is 0 for every threshold")
        return 0.0
    return _loss(values, codes, n_classes, bins)


def elbow_index(sorted_losses: np.ndarray) -> int:
    """Index on an ascending curve farthest from the chord joining its end points."""
    y = np.asarray(sorted_losses, dtype=np.float64)
    n = y.shape[0]
    if n <= 2:
        return n - 1
    span = y[-1] - y[0]
    if span <= 0:
        return n - 1
    x = np.arange(n) / (n - 1)
    yn = (y - y[0]) / span
    # chord from (0, 0) to (1, 1)
    dist = np.abs(x - yn) / np.sqrt(2.0)
    return int(np.argmax(dist))


def rank_and_select(
    features: np.ndarray,
    labels: np.ndarray,
    bins: int = DEFAULT_BINS,
    n_features: Optional[int] = None,
) -> DftResult:
    x = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels).reshape(-1)
    _check_bins(bins)
    if x.ndim != 2 or x.shape[1] < 2:
        raise InvalidInputError(f"DFT ranking needs at least two dimensions, got shape {x.shape}")
    if x.shape[0] != labels.shape[0]:
        raise InvalidInputError(f"{x.shape[0]} samples but {labels.shape[0]} labels")
    if x.shape[0] < 2:
        raise InvalidInputError("DFT needs at least two samples")
    n_dims = x.shape[1]
    if n_features is not None and not 1 <= n_features <= n_dims:
        raise ConfigError(f"n_features={n_features} outside 1..{n_dims}")

    codes, n_classes = _encode_labels(labels)
    degenerate = n_classes < 2
    if degenerate:
        logger.warning("DFT input holds a single class; every dimension scores 0")
        losses = np.zeros(n_dims)
    else:
        losses = np.array([_loss(x[:, j], codes, n_classes, bins) for j in range(n_dims)])

    order = np.lexsort((np.arange(n_dims), losses))
    elbow = None
    if n_features is None:
        elbow = elbow_index(losses[order])
        n_features = elbow + 1
    selected = order[:n_features].copy()
    logger.info(
        f"DFT ranked {n_dims} dimensions (bins={bins}); selected {selected.size}"
        + (f" at elbow {elbow}" if elbow is not None else "")
    )
    return DftResult(losses=losses, order=order, selected=selected, bins=bins,
                     elbow=elbow, degenerate=degenerate)
